#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "qdw/io.hpp"
#include "qdw/protocol.hpp"
#include "support.hpp"

using namespace qdw;
constexpr double kPi = std::numbers::pi;

namespace {

json through_text(const json& j) { return json::parse(j.dump()); }

} // namespace

TEST_CASE("matrices survive a text round trip bit for bit", "[io][property]") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = i % 2 == 0 ? 2 : 4;
        const auto m = testing::random_hermitian(n, rng);
        REQUIRE(through_text(json(m)).get<ComplexMatrix>() == m);

        const auto rho = testing::random_state(n, rng, n == 4 ? std::vector<std::size_t>{2, 2} : std::vector<std::size_t>{});
        const auto back = density_matrix_from_json(through_text(to_json_value(rho)));
        REQUIRE(back.matrix() == rho.matrix());
        REQUIRE(back.dims() == rho.dims());
    }
}

TEST_CASE("matrix JSON layout", "[io]") {
    const ComplexMatrix m(1, 2, {complex{1.5, -2.0}, complex{0.0, 0.25}});
    const json j = m;
    REQUIRE(j.at("rows") == 1);
    REQUIRE(j.at("cols") == 2);
    REQUIRE(j.at("entries") == json::parse("[[1.5,-2.0],[0.0,0.25]]"));
}

TEST_CASE("malformed JSON is rejected", "[io]") {
    REQUIRE_THROWS_AS(json::parse(R"({"rows":2,"cols":2})").get<ComplexMatrix>(), ValidationError);
    REQUIRE_THROWS_AS(json::parse(R"({"rows":1,"cols":1,"entries":[[1]]})").get<ComplexMatrix>(), ValidationError);
    REQUIRE_THROWS_AS(json::parse(R"({"rows":2,"cols":1,"entries":[[1,0]]})").get<ComplexMatrix>(), ValidationError);
    REQUIRE_THROWS_AS(json::parse(R"({"rows":"x","cols":1,"entries":[[1,0]]})").get<ComplexMatrix>(), ValidationError);
    // not a state: trace 2
    REQUIRE_THROWS_AS(density_matrix_from_json(json(ComplexMatrix::identity(2))), ValidationError);

    REQUIRE_THROWS_AS(json::parse(R"({"family":"qc","lambda":0.5,"theta":3})").get<FamilyParams>(), ValidationError);
    REQUIRE_THROWS_AS(json::parse(R"({"family":"zz","lambda":0.5})").get<FamilyParams>(), ValidationError);
    REQUIRE_THROWS_AS(json::parse(R"({"lambda":0.5})").get<FamilyParams>(), ValidationError);
}

TEST_CASE("family parameters round trip", "[io]") {
    const FamilyParams p{Family::QC, 0.7, kPi / 4};
    const auto q = through_text(json(p)).get<FamilyParams>();
    REQUIRE(q.family == p.family);
    REQUIRE(q.lambda == p.lambda);
    REQUIRE(q.theta == p.theta);
    const auto cc = json::parse(R"({"family":"cc","lambda":0.64})").get<FamilyParams>();
    REQUIRE(cc.family == Family::CC);
    REQUIRE(cc.theta == 0.0);
}

TEST_CASE("tomography records round trip exactly", "[io][tomography]") {
    for (std::size_t n : {1u, 2u}) {
        const auto rho = n == 1 ? DensityMatrix(ComplexMatrix::diagonal({0.3, 0.7})) : make_qc(0.7, kPi / 4);
        const auto rec = simulate_counts(rho, default_settings(n), 12345, 99);
        const auto back = through_text(json(rec)).get<TomographyRecord>();
        REQUIRE(back.counts == rec.counts);
        REQUIRE(back.seed == rec.seed);
        REQUIRE(back.shots_per_setting == rec.shots_per_setting);
        REQUIRE(back.settings.size() == rec.settings.size());
        for (std::size_t i = 0; i < rec.settings.size(); ++i) {
            REQUIRE(back.settings[i].label == rec.settings[i].label);
            REQUIRE(back.settings[i].projectors == rec.settings[i].projectors);
        }
        REQUIRE(reconstruct(back, 20, 1).estimate.matrix() == reconstruct(rec, 20, 1).estimate.matrix());
    }

    auto j = json(simulate_counts(make_cc(0.5), default_settings(2), 100, 1));
    j["settings"][0] = "XY-ZW";
    REQUIRE_THROWS_AS(j.get<TomographyRecord>(), ValidationError);
    j = json(simulate_counts(make_cc(0.5), default_settings(2), 100, 1));
    j["counts"][0].erase(0);
    REQUIRE_THROWS_AS(j.get<TomographyRecord>(), ValidationError);
}

TEST_CASE("protocol config overlays defaults", "[io][protocol]") {
    ProtocolConfig c = json::parse(R"({"mode":"simulated","seed":17,"retry_phis":[0.5,1.0]})").get<ProtocolConfig>();
    REQUIRE(c.mode == Mode::Simulated);
    REQUIRE(c.seed == 17);
    REQUIRE(c.retry_phis == std::vector<double>{0.5, 1.0});
    REQUIRE(c.phi == kPi);
    REQUIRE(c.shots == 100000);
    REQUIRE(c.threshold_sigma == 3.0);

    ProtocolConfig full;
    full.phi = 1.25;
    full.hwp_angle = 0.3;
    full.bootstrap_samples = 17;
    full.emit_states = true;
    const auto back = through_text(json(full)).get<ProtocolConfig>();
    REQUIRE(json(back) == json(full));

    REQUIRE_THROWS_AS(json::parse(R"({"mode":"fast"})").get<ProtocolConfig>(), ValidationError);
    REQUIRE_THROWS_AS(json::parse(R"({"shots":"many"})").get<ProtocolConfig>(), ValidationError);
    REQUIRE_THROWS_AS(json::parse("[1,2]").get<ProtocolConfig>(), ValidationError);
}

TEST_CASE("classification results serialize every report", "[io][protocol]") {
    ProtocolConfig cfg;
    cfg.emit_states = true;
    const json cc = classify(make_cc(0.64), cfg);
    REQUIRE(cc.at("verdict") == "CC");
    REQUIRE(cc.at("td_report").at("fired") == false);
    REQUIRE(cc.at("growth_report").at("fired") == true);
    REQUIRE(cc.at("growth_report").at("kind") == std::string(to_string(WitnessKind::CorrelationWitness)));
    REQUIRE(cc.at("growth_report").at("inputs").at("hwp_angle") == kPi / 8);
    REQUIRE(cc.at("thresholds_used").at("exact_epsilon") == 1e-9);
    REQUIRE(cc.at("intermediate_states").size() == 5);
    const auto initial = density_matrix_from_json(cc.at("intermediate_states").at("system_initial"));
    REQUIRE(initial.matrix().approx_equal(ComplexMatrix::diagonal({0.64, 0.36}), 1e-15));

    const json qc = classify(make_qc(0.7, kPi / 4), ProtocolConfig{});
    REQUIRE(qc.at("verdict") == "QC");
    REQUIRE(qc.at("growth_report").is_null());
    REQUIRE_FALSE(qc.contains("intermediate_states"));
}
