// qdw: command-line front end for the correlation witnesses.
//
// Exit codes: 0 on success (whatever the verdict), 2 for invalid input,
// 3 for internal numerical failures. All angles are in radians.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdw/io.hpp"
#include "qdw/qdw.hpp"

namespace {

using qdw::json;
constexpr double kPi = std::numbers::pi;

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kNumericalFailure = 3 };

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::out | std::ios::trunc | std::ios::binary);
            if (!file_) throw qdw::ValidationError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

    void finish() {
        stream().flush();
        if (!stream()) throw qdw::ValidationError("failed to write output");
    }

private:
    std::ofstream file_;
};

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qdw::ValidationError("cannot read config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw qdw::ValidationError("config file '" + path + "': " + e.what());
    }
}

// Values collected from flags. Each flag is applied on top of the config file
// only when it was given explicitly.
struct StateFlags {
    std::string family = "qc";
    double lambda = 0.5;
    double theta = 0.0;
    CLI::Option* family_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;
    CLI::Option* theta_opt = nullptr;

    void add(CLI::App& app) {
        family_opt = app.add_option("--family", family, "State family: cc, qc or f");
        lambda_opt = app.add_option("--lambda", lambda, "Mixing weight in [0, 1]");
        theta_opt = app.add_option("--theta", theta, "Polarization angle in [0, pi/2] (qc only)");
    }

    qdw::FamilyParams resolve(const json& config) const {
        qdw::FamilyParams p;
        p.family = qdw::Family::QC;
        p.lambda = 0.5;
        if (config.contains("state")) {
            const auto& s = config.at("state");
            if (s.contains("family")) p.family = qdw::family_from_string(s.at("family").get<std::string>());
            if (s.contains("lambda")) p.lambda = s.at("lambda").get<double>();
            if (s.contains("theta") && !s.at("theta").is_null()) p.theta = s.at("theta").get<double>();
        }
        if (family_opt->count()) p.family = qdw::family_from_string(family);
        if (lambda_opt->count()) p.lambda = lambda;
        if (theta_opt->count()) p.theta = theta;
        p.validate();
        return p;
    }
};

struct ProtocolFlags {
    std::string mode = "exact";
    double phi = kPi;
    double hwp_angle = kPi / 8;
    std::uint64_t shots = 100000;
    std::size_t bootstrap = qdw::kDefaultBootstrapSamples;
    double threshold_sigma = 3.0;
    double epsilon = 1e-9;
    std::uint64_t seed = 0;
    std::vector<double> retry_phis;
    bool emit_states = false;
    std::vector<std::pair<CLI::Option*, std::function<void(qdw::ProtocolConfig&)>>> setters;

    template <typename T>
    void bind(CLI::App& app, const std::string& name, T& target, const std::string& help,
              std::function<void(qdw::ProtocolConfig&)> apply) {
        setters.emplace_back(app.add_option(name, target, help), std::move(apply));
    }

    void add(CLI::App& app, bool with_classify_flags) {
        bind(app, "--phi", phi, "Phase-gate angle (default pi)", [this](auto& c) { c.phi = phi; });
        bind(app, "--hwp-angle", hwp_angle, "Half-wave plate angle for the local rotation (default pi/8)",
             [this](auto& c) { c.hwp_angle = hwp_angle; });
        if (!with_classify_flags) return;
        bind(app, "--mode", mode, "exact or simulated", [this](auto& c) { c.mode = qdw::mode_from_string(mode); });
        bind(app, "--shots", shots, "Shots per measurement setting (simulated)", [this](auto& c) { c.shots = shots; });
        bind(app, "--seed", seed, "Master seed (simulated)", [this](auto& c) { c.seed = seed; });
        bind(app, "--bootstrap", bootstrap, "Bootstrap replicas per witness (simulated)",
             [this](auto& c) { c.bootstrap_samples = bootstrap; });
        bind(app, "--threshold-sigma", threshold_sigma, "Bootstrap standard deviations required to fire",
             [this](auto& c) { c.threshold_sigma = threshold_sigma; });
        bind(app, "--epsilon", epsilon, "Exact-mode firing threshold", [this](auto& c) { c.exact_epsilon = epsilon; });
        auto* retry = app.add_option("--retry-phis", retry_phis, "Extra stage-1 phases tried when phi does not fire")
                          ->delimiter(',');
        setters.emplace_back(retry, [this](auto& c) { c.retry_phis = retry_phis; });
        auto* emit = app.add_flag("--emit-states", emit_states, "Include intermediate marginals in the output");
        setters.emplace_back(emit, [this](auto& c) { c.emit_states = emit_states; });
    }

    qdw::ProtocolConfig resolve(const json& config) const {
        qdw::ProtocolConfig c;
        if (config.contains("protocol")) c = config.at("protocol").get<qdw::ProtocolConfig>();
        for (const auto& [opt, apply] : setters)
            if (opt->count()) apply(c);
        c.validate();
        return c;
    }
};

struct Grid {
    double start = 0.0;
    double stop = 1.0;
    std::size_t count = 2;

    std::vector<double> values(double lo, double hi, const char* name) const {
        if (count < 2 && !(count == 1 && start == stop)) {
            throw qdw::ValidationError(std::string(name) + " grid needs at least two points");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < count; ++i) {
            double x = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
            // tolerate rounding of endpoints typed in decimal
            if (x < lo && x > lo - 1e-9) x = lo;
            if (x > hi && x < hi + 1e-9) x = hi;
            if (x < lo || x > hi) {
                throw qdw::ValidationError(std::string(name) + " grid leaves [" + format_number(lo) + ", " +
                                           format_number(hi) + "]");
            }
            out.push_back(x);
        }
        return out;
    }
};

Grid grid_from(const std::vector<double>& v, const char* name) {
    if (v.size() != 3) throw qdw::ValidationError(std::string(name) + " expects START STOP COUNT");
    if (v[2] < 1 || v[2] != static_cast<double>(static_cast<std::size_t>(v[2]))) {
        throw qdw::ValidationError(std::string(name) + " COUNT must be a positive integer");
    }
    return Grid{v[0], v[1], static_cast<std::size_t>(v[2])};
}

void write_csv_header(std::ostream& out, const json& resolved, const std::string& columns) {
    out << "# " << resolved.dump() << "\n" << columns << "\n";
}

int cmd_classify(const StateFlags& sf, const ProtocolFlags& pf, const std::string& config_path,
                 const std::string& output) {
    const json config = config_path.empty() ? json::object() : load_config_file(config_path);
    const auto params = sf.resolve(config);
    const auto cfg = pf.resolve(config);
    qdw::WitnessInputs inputs;
    inputs.lambda = params.lambda;
    if (params.family == qdw::Family::QC) inputs.theta = params.theta;
    const auto result = cfg.mode == qdw::Mode::Simulated ? qdw::classify_simulated(params, cfg)
                                                         : qdw::classify(qdw::make_state(params), cfg, inputs);
    json j = result;
    j["state"] = params;
    Output out(output);
    out.stream() << j.dump(2) << "\n";
    out.finish();
    return kOk;
}

struct SweepFlags {
    std::string quantity = "Td";
    std::vector<double> lambda_range{0.0, 1.0, 11};
    std::vector<double> theta_range{0.0, kPi / 2, 11};
    std::string along;
    std::size_t points = 20;
};

int cmd_sweep(const StateFlags& sf, const ProtocolFlags& pf, const SweepFlags& sw, const std::string& config_path,
              const std::string& output) {
    const json config = config_path.empty() ? json::object() : load_config_file(config_path);
    const auto cfg = pf.resolve(config);
    const qdw::Family family = sf.family_opt->count() ? qdw::family_from_string(sf.family) : qdw::Family::QC;

    enum class Quantity { T, Td, Growth, All } q;
    if (sw.quantity == "T") q = Quantity::T;
    else if (sw.quantity == "Td") q = Quantity::Td;
    else if (sw.quantity == "growth" || sw.quantity == "Growth") q = Quantity::Growth;
    else if (sw.quantity == "all") q = Quantity::All;
    else throw qdw::ValidationError("unknown quantity '" + sw.quantity + "' (expected T, Td, growth or all)");

    std::vector<std::pair<double, double>> points;
    if (sw.along == "zero-line") {
        if (family != qdw::Family::QC) throw qdw::ValidationError("the zero line is defined for the qc family");
        if (sw.points < 1) throw qdw::ValidationError("--points must be positive");
        // theta strictly inside (pi/4, pi/2)
        for (std::size_t i = 1; i <= sw.points; ++i) {
            const double t = kPi / 4 + (kPi / 4) * static_cast<double>(i) / static_cast<double>(sw.points + 1);
            points.emplace_back(qdw::zero_line_lambda(t), t);
        }
    } else if (sw.along.empty()) {
        const auto lambdas = grid_from(sw.lambda_range, "--lambda-range").values(0.0, 1.0, "lambda");
        std::vector<double> thetas{0.0};
        if (family == qdw::Family::QC) thetas = grid_from(sw.theta_range, "--theta-range").values(0.0, kPi / 2, "theta");
        for (double l : lambdas)
            for (double t : thetas) points.emplace_back(l, t);
    } else {
        throw qdw::ValidationError("unknown --along value '" + sw.along + "' (expected zero-line)");
    }

    json resolved{{"command", "sweep"},
                  {"family", std::string(qdw::to_string(family))},
                  {"quantity", sw.quantity},
                  {"phi", cfg.phi},
                  {"hwp_angle", cfg.hwp_angle},
                  {"lambda_range", sw.lambda_range},
                  {"theta_range", sw.theta_range},
                  {"along", sw.along},
                  {"points", points.size()}};

    // rows are computed into a buffer and written in grid order
    std::ostringstream rows;
    const qdw::HalfWavePlate plate{cfg.hwp_angle};
    for (const auto& [l, t] : points) {
        const auto rho = qdw::make_state({family, l, family == qdw::Family::QC ? t : 0.0});
        rows << format_number(l) << ',' << format_number(t) << ',' << format_number(cfg.phi);
        if (q == Quantity::T || q == Quantity::All) rows << ',' << format_number(qdw::discord_T(rho).value);
        if (q == Quantity::Td || q == Quantity::All) rows << ',' << format_number(qdw::witness_Td(rho, cfg.phi).value);
        if (q == Quantity::Growth || q == Quantity::All)
            rows << ',' << format_number(qdw::witness_growth(rho, plate, cfg.phi).value);
        rows << '\n';
    }
    Output out(output);
    write_csv_header(out.stream(), resolved,
                     q == Quantity::All ? "lambda,theta,phi,T,Td,growth" : "lambda,theta,phi,value");
    out.stream() << rows.str();
    out.finish();
    return kOk;
}

int cmd_phase_scan(const StateFlags& sf, std::vector<double> phis, const std::string& config_path,
                   const std::string& output) {
    const json config = config_path.empty() ? json::object() : load_config_file(config_path);
    const auto params = sf.resolve(config);
    if (phis.empty()) phis = {kPi / 4, kPi / 2, kPi};
    const auto rho = qdw::make_state(params);
    json resolved{{"command", "phase-scan"}, {"state", params}, {"phis", phis}};
    std::ostringstream rows;
    for (double phi : phis) rows << format_number(phi) << ',' << format_number(qdw::witness_Td(rho, phi).value) << '\n';
    Output out(output);
    write_csv_header(out.stream(), resolved, "phi,Td");
    out.stream() << rows.str();
    out.finish();
    return kOk;
}

int cmd_state(const StateFlags& sf, const std::string& config_path, const std::string& output) {
    const json config = config_path.empty() ? json::object() : load_config_file(config_path);
    const auto params = sf.resolve(config);
    json j{{"params", params}, {"state", qdw::to_json_value(qdw::make_state(params))}};
    Output out(output);
    out.stream() << j.dump(2) << "\n";
    out.finish();
    return kOk;
}

int cmd_simulate_tomography(const StateFlags& sf, std::uint64_t shots, std::uint64_t seed, bool system_only,
                            const std::string& config_path, const std::string& output) {
    const json config = config_path.empty() ? json::object() : load_config_file(config_path);
    const auto params = sf.resolve(config);
    const auto rho = qdw::make_state(params);
    const auto record = system_only ? qdw::simulate_counts(qdw::partial_trace(rho, 0), qdw::default_settings(1), shots, seed)
                                    : qdw::simulate_counts(rho, qdw::default_settings(2), shots, seed);
    Output out(output);
    out.stream() << json(record).dump(2) << "\n";
    out.finish();
    return kOk;
}

int cmd_reconstruct(const std::string& input, std::size_t bootstrap, std::uint64_t bootstrap_seed,
                    const std::string& output) {
    std::ifstream in(input);
    if (!in) throw qdw::ValidationError("cannot read tomography record '" + input + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw qdw::ValidationError("tomography record: " + std::string(e.what()));
    }
    const auto record = j.get<qdw::TomographyRecord>();
    const auto rec = qdw::reconstruct(record, bootstrap, bootstrap_seed);
    json result{{"estimate", qdw::to_json_value(rec.estimate)},
                {"std_errors", rec.std_errors},
                {"bootstrap_samples", rec.bootstrap_samples}};
    Output out(output);
    out.stream() << result.dump(2) << "\n";
    out.finish();
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-distance witnesses of discord and classical correlations in two-qubit states"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; explicit flags take precedence");
        sub->add_option("-o,--output", output, "Write to this file instead of standard output");
    };

    StateFlags state_flags;
    ProtocolFlags protocol_flags;
    SweepFlags sweep_flags;
    std::vector<double> phis;
    std::uint64_t tomo_shots = 10000;
    std::uint64_t tomo_seed = 0;
    bool system_only = false;
    std::string record_path;
    std::size_t bootstrap = qdw::kDefaultBootstrapSamples;
    std::uint64_t bootstrap_seed = 0;

    auto* classify = app.add_subcommand("classify", "Run the two-stage classification and print JSON");
    state_flags.add(*classify);
    protocol_flags.add(*classify, true);
    add_common(classify);

    StateFlags sweep_state;
    ProtocolFlags sweep_protocol;
    auto* sweep = app.add_subcommand("sweep", "Evaluate a witness over a (lambda, theta) grid and print CSV");
    sweep_state.family_opt = sweep->add_option("--family", sweep_state.family, "State family (default qc)");
    sweep_protocol.add(*sweep, false);
    sweep->add_option("--quantity", sweep_flags.quantity, "T, Td, growth or all");
    sweep->add_option("--lambda-range", sweep_flags.lambda_range, "START STOP COUNT")->expected(3);
    sweep->add_option("--theta-range", sweep_flags.theta_range, "START STOP COUNT")->expected(3);
    sweep->add_option("--along", sweep_flags.along, "Sample a curve instead of a grid: zero-line");
    sweep->add_option("--points", sweep_flags.points, "Number of samples for --along");
    add_common(sweep);

    StateFlags scan_state;
    auto* scan = app.add_subcommand("phase-scan", "Evaluate T_d for a list of phase-gate angles and print CSV");
    scan_state.add(*scan);
    scan->add_option("--phis", phis, "Comma-separated phases (default pi/4,pi/2,pi)")->delimiter(',');
    add_common(scan);

    StateFlags build_state;
    auto* state = app.add_subcommand("state", "Print a family state as JSON");
    build_state.add(*state);
    add_common(state);

    StateFlags tomo_state;
    auto* tomo = app.add_subcommand("simulate-tomography", "Simulate tomography counts for a family state");
    tomo_state.add(*tomo);
    tomo->add_option("--shots", tomo_shots, "Shots per measurement setting");
    tomo->add_option("--seed", tomo_seed, "Seed");
    tomo->add_flag("--system-only", system_only, "Measure only the system marginal (one-qubit design)");
    add_common(tomo);

    auto* recon = app.add_subcommand("reconstruct", "Reconstruct a state from a tomography record");
    recon->add_option("--input", record_path, "Tomography record JSON")->required();
    recon->add_option("--bootstrap", bootstrap, "Bootstrap replicas");
    recon->add_option("--bootstrap-seed", bootstrap_seed, "Bootstrap seed");
    recon->add_option("-o,--output", output, "Write to this file instead of standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidInput;
    }

    try {
        if (*classify) return cmd_classify(state_flags, protocol_flags, config_path, output);
        if (*sweep) return cmd_sweep(sweep_state, sweep_protocol, sweep_flags, config_path, output);
        if (*scan) return cmd_phase_scan(scan_state, phis, config_path, output);
        if (*state) return cmd_state(build_state, config_path, output);
        if (*tomo) return cmd_simulate_tomography(tomo_state, tomo_shots, tomo_seed, system_only, config_path, output);
        if (*recon) return cmd_reconstruct(record_path, bootstrap, bootstrap_seed, output);
    } catch (const qdw::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const qdw::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kOk;
}
