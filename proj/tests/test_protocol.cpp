#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qdw/protocol.hpp"

using namespace qdw;
using Catch::Approx;
constexpr double kPi = std::numbers::pi;

namespace {

ProtocolConfig simulated(std::uint64_t seed, std::size_t bootstrap = 100) {
    ProtocolConfig c;
    c.mode = Mode::Simulated;
    c.seed = seed;
    c.bootstrap_samples = bootstrap;
    return c;
}

void require_structure(const ClassificationResult& r) {
    if (r.verdict == Verdict::QC) {
        REQUIRE_FALSE(r.growth_report.has_value());
        REQUIRE(r.td_report.fired);
    } else {
        REQUIRE(r.growth_report.has_value());
        REQUIRE_FALSE(r.td_report.fired);
        REQUIRE(r.growth_report->fired == (r.verdict == Verdict::CC));
    }
}

} // namespace

TEST_CASE("exact classification of the reference states", "[protocol]") {
    const ProtocolConfig exact;
    const auto qc = classify(make_qc(0.7, kPi / 4), exact);
    REQUIRE(qc.verdict == Verdict::QC);
    REQUIRE(qc.td_report.report.value == Approx(0.2534482758620691).margin(1e-12));
    require_structure(qc);

    const auto cc = classify(make_cc(0.64), exact);
    REQUIRE(cc.verdict == Verdict::CC);
    REQUIRE(cc.td_report.report.value < 1e-12);
    REQUIRE(cc.growth_report->report.value == Approx(0.3212403006976535).margin(1e-12));
    require_structure(cc);

    const auto f = classify(make_f(0.65), exact);
    REQUIRE(f.verdict == Verdict::F);
    REQUIRE(f.growth_report->report.value == Approx((1 - std::sqrt(2.0)) * 0.15).margin(1e-12));
    require_structure(f);

    REQUIRE(f.thresholds_used.exact_epsilon == 1e-9);
    REQUIRE_FALSE(f.intermediate_states.has_value());
}

TEST_CASE("exact-mode confusion matrix over the parameter grid", "[protocol]") {
    const ProtocolConfig exact;
    for (int i = 1; i <= 9; ++i) {
        const double l = i / 10.0;
        INFO("lambda=" << l);
        REQUIRE(classify(make_cc(l), exact).verdict == Verdict::CC);
        REQUIRE(classify(make_f(l), exact).verdict == Verdict::F);
        for (double t : {kPi / 8, kPi / 4, 3 * kPi / 8}) {
            INFO("theta=" << t);
            REQUIRE(classify(make_qc(l, t), exact).verdict == Verdict::QC);
        }
    }
}

TEST_CASE("degenerate and boundary loci", "[protocol]") {
    const ProtocolConfig exact;
    // theta = 0 is a product state
    REQUIRE(classify(make_qc(0.4, 0.0), exact).verdict == Verdict::F);
    // theta = pi/2 is the classical family
    REQUIRE(classify(make_qc(0.4, kPi / 2), exact).verdict == Verdict::CC);
    // lambda in {0, 1} removes all correlations
    REQUIRE(classify(make_cc(0.0), exact).verdict == Verdict::F);
    REQUIRE(classify(make_cc(1.0), exact).verdict == Verdict::F);

    // Balanced CC: degenerate marginal, flagged, still classically correlated.
    const auto half = classify(make_cc(0.5), exact);
    REQUIRE(half.degenerate_basis);
    REQUIRE(half.verdict == Verdict::CC);
    REQUIRE(half.growth_report->report.value == Approx(0.5).margin(1e-12));

    const auto mixed = classify(make_f(0.5), exact);
    REQUIRE(mixed.degenerate_basis);
    REQUIRE(mixed.verdict == Verdict::F);

    // On the zero line stage 1 is blind; stage 2 still sees the correlations.
    const auto line = classify(make_qc(1.0 / 3, kPi / 3), exact);
    REQUIRE_FALSE(line.td_report.fired);
    REQUIRE(line.verdict == Verdict::CC);
}

TEST_CASE("retry phases", "[protocol]") {
    ProtocolConfig exact;
    // phi = 0 is the identity evolution and can never reveal discord
    exact.phi = 0.0;
    exact.retry_phis = {kPi / 4, kPi};
    const auto qc = classify(make_qc(0.7, kPi / 4), exact);
    REQUIRE(qc.verdict == Verdict::QC);
    REQUIRE(qc.td_report.report.inputs.phi == kPi / 4);
    require_structure(qc);

    // The zero line is invisible to every phase of this gate, not only pi.
    exact.phi = kPi;
    exact.retry_phis = {kPi / 4, kPi / 2, 3.0};
    const auto line = classify(make_qc(1.0 / 3, kPi / 3), exact);
    REQUIRE_FALSE(line.td_report.fired);
    REQUIRE(line.td_report.report.inputs.phi == kPi);

    // retries never fire on zero-discord states
    REQUIRE(classify(make_cc(0.64), exact).verdict == Verdict::CC);
    REQUIRE(classify(make_f(0.65), exact).verdict == Verdict::F);
}

TEST_CASE("intermediate states are emitted on request", "[protocol]") {
    ProtocolConfig exact;
    exact.emit_states = true;
    const auto cc = classify(make_cc(0.64), exact);
    REQUIRE(cc.intermediate_states.has_value());
    REQUIRE(cc.intermediate_states->size() == 5);
    REQUIRE(cc.intermediate_states->front().name == "system_initial");
    REQUIRE(cc.intermediate_states->front().state.matrix().approx_equal(ComplexMatrix::diagonal({0.64, 0.36}), 1e-15));

    const auto qc = classify(make_qc(0.7, kPi / 4), exact);
    REQUIRE(qc.intermediate_states->size() == 3);
}

TEST_CASE("config validation", "[protocol]") {
    ProtocolConfig c;
    c.threshold_sigma = 0.0;
    REQUIRE_THROWS_AS(classify(make_cc(0.5), c), ValidationError);
    c = ProtocolConfig{};
    c.exact_epsilon = -1.0;
    REQUIRE_THROWS_AS(classify(make_cc(0.5), c), ValidationError);
    c = ProtocolConfig{};
    REQUIRE_THROWS_AS(classify(DensityMatrix(ComplexMatrix::diagonal({0.5, 0.5})), c), ValidationError);
    REQUIRE_THROWS_AS(classify_simulated({Family::CC, 0.5, 0.0}, c), ValidationError);  // exact mode
    REQUIRE_THROWS_AS(classify_simulated({Family::CC, 1.5, 0.0}, simulated(0)), ValidationError);
    auto s = simulated(0);
    s.shots = 0;
    REQUIRE_THROWS_AS(classify_simulated({Family::CC, 0.5, 0.0}, s), ValidationError);
}

TEST_CASE("simulated classification of the reference states", "[protocol][simulated]") {
    const FamilyParams qc{Family::QC, 0.7, kPi / 4};
    const FamilyParams cc{Family::CC, 0.64, 0.0};
    const FamilyParams f{Family::F, 0.65, 0.0};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto rq = classify_simulated(qc, simulated(seed));
        REQUIRE(rq.verdict == Verdict::QC);
        REQUIRE(rq.td_report.uncertainty > 0.0);
        REQUIRE(rq.td_report.report.inputs.lambda == 0.7);
        require_structure(rq);

        const auto rc = classify_simulated(cc, simulated(seed));
        require_structure(rc);
        REQUIRE(rc.growth_report->report.value == Approx(0.3212).margin(0.02));
        const auto rf = classify_simulated(f, simulated(seed));
        require_structure(rf);
        REQUIRE(rf.verdict == Verdict::F);
    }
}

TEST_CASE("simulated mode is reproducible for a fixed seed", "[protocol][simulated]") {
    auto cfg = simulated(7, 50);
    cfg.emit_states = true;
    const FamilyParams cc{Family::CC, 0.64, 0.0};
    const auto a = classify_simulated(cc, cfg);
    const auto b = classify_simulated(cc, cfg);
    REQUIRE(a.verdict == b.verdict);
    REQUIRE(a.td_report.report.value == b.td_report.report.value);
    REQUIRE(a.td_report.uncertainty == b.td_report.uncertainty);
    REQUIRE(a.growth_report->report.value == b.growth_report->report.value);
    REQUIRE(a.intermediate_states->size() == b.intermediate_states->size());
    for (std::size_t i = 0; i < a.intermediate_states->size(); ++i)
        REQUIRE((*a.intermediate_states)[i].state.matrix() == (*b.intermediate_states)[i].state.matrix());

    const auto c = classify_simulated(cc, simulated(8, 50));
    REQUIRE(c.td_report.report.value != a.td_report.report.value);
}
