// Two-stage classification of a system/environment state as quantum
// correlated (QC), classically correlated (CC) or factorized (F).
//
// Stage 1 compares the system marginals evolved from the state and from its
// eigenbasis-dephased copy; a positive distance means nonzero discord.
// Otherwise stage 2 compares the state with a locally rotated copy before and
// after the evolution; growth of their distance means classical correlations.
//
// In simulated mode every state the lab would measure is replaced by a
// tomographic estimate from finite counts, and each witness is accepted only
// when its bootstrap bias-corrected value exceeds threshold_sigma bootstrap
// standard deviations.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdw/channels.hpp"
#include "qdw/errors.hpp"
#include "qdw/linalg.hpp"
#include "qdw/random.hpp"
#include "qdw/states.hpp"
#include "qdw/tomography.hpp"
#include "qdw/witness.hpp"

namespace qdw {

enum class Mode { Exact, Simulated };

inline std::string_view to_string(Mode m) { return m == Mode::Exact ? "exact" : "simulated"; }

inline Mode mode_from_string(std::string_view s) {
    if (s == "exact") return Mode::Exact;
    if (s == "simulated") return Mode::Simulated;
    throw ValidationError("unknown mode '" + std::string(s) + "' (expected exact or simulated)");
}

enum class Verdict { QC, CC, F };

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::QC: return "QC";
    case Verdict::CC: return "CC";
    case Verdict::F: return "F";
    }
    return "?";
}

struct ProtocolConfig {
    double phi = std::numbers::pi;
    double hwp_angle = std::numbers::pi / 8;
    Mode mode = Mode::Exact;
    std::uint64_t shots = 100000;
    std::size_t bootstrap_samples = kDefaultBootstrapSamples;
    double threshold_sigma = 3.0;
    double exact_epsilon = 1e-9;
    std::uint64_t seed = 0;
    std::vector<double> retry_phis;  // extra stage-1 phases tried in order when phi does not fire
    bool emit_states = false;

    void validate() const {
        if (!(threshold_sigma > 0.0)) throw ValidationError("threshold_sigma must be positive");
        if (!(exact_epsilon > 0.0)) throw ValidationError("exact_epsilon must be positive");
        if (!std::isfinite(phi) || !std::isfinite(hwp_angle)) throw ValidationError("angles must be finite");
        for (double p : retry_phis)
            if (!std::isfinite(p)) throw ValidationError("retry phases must be finite");
        if (mode == Mode::Simulated) {
            if (shots == 0) throw ValidationError("shots must be positive");
            if (bootstrap_samples < 2) throw ValidationError("bootstrap_samples must be at least 2");
        }
    }
};

/// A witness value together with the rule that was applied to it.
struct WitnessEstimate {
    WitnessReport report;
    double uncertainty = 0.0;  // bootstrap standard deviation (0 in exact mode)
    double bias = 0.0;         // bootstrap bias estimate (0 in exact mode)
    double threshold = 0.0;
    bool fired = false;

    double corrected_value() const { return report.value - bias; }
};

struct NamedState {
    std::string name;
    DensityMatrix state;
};

struct ClassificationResult {
    Verdict verdict = Verdict::F;
    WitnessEstimate td_report;
    std::optional<WitnessEstimate> growth_report;  // absent when stage 1 fires
    bool degenerate_basis = false;
    ProtocolConfig thresholds_used;
    std::optional<std::vector<NamedState>> intermediate_states;
};

namespace detail {

// Stream indices for derive_seed(config.seed, .).
enum SeedStream : std::uint64_t {
    kJointTomography = 0,
    kStageOneMarginals = 1,
    kStageTwoMarginals = 2,
    kStageOneBootstrap = 3,
    kStageTwoBootstrap = 4,
};

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
    return derive_seed(derive_seed(master, stream), index);
}

struct BootstrapSummary {
    double mean = 0.0;
    double stddev = 0.0;
};

inline BootstrapSummary summarize(const std::vector<double>& xs) {
    BootstrapSummary s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return s;
}

class SimulatedLab {
public:
    SimulatedLab(const ProtocolConfig& cfg) : cfg_(cfg), one_(default_settings(1)), two_(default_settings(2)) {}

    DensityMatrix joint(const DensityMatrix& rho, std::uint64_t seed) const {
        return point_estimate(simulate_counts(rho, two_, cfg_.shots, seed));
    }

    DensityMatrix marginal(const DensityMatrix& rho_s, std::uint64_t seed) const {
        return point_estimate(simulate_counts(rho_s, one_, cfg_.shots, seed));
    }

private:
    const ProtocolConfig& cfg_;
    std::vector<MeasurementSetting> one_;
    std::vector<MeasurementSetting> two_;
};

inline WitnessEstimate exact_decision(WitnessReport report, double epsilon) {
    WitnessEstimate e{std::move(report)};
    e.threshold = epsilon;
    e.fired = e.report.value > epsilon;
    return e;
}

inline WitnessEstimate bootstrap_decision(WitnessReport report, double plug_in, const std::vector<double>& replicas,
                                          const ProtocolConfig& cfg) {
    const auto s = summarize(replicas);
    WitnessEstimate e{std::move(report)};
    e.uncertainty = s.stddev;
    e.bias = s.mean - plug_in;
    e.threshold = std::max(cfg.threshold_sigma * s.stddev, cfg.exact_epsilon);
    e.fired = e.corrected_value() > e.threshold;
    return e;
}

inline ClassificationResult classify_exact(const DensityMatrix& rho, const ProtocolConfig& cfg,
                                           const WitnessInputs& inputs) {
    ClassificationResult out;
    out.thresholds_used = cfg;
    const Projector proj = system_eigenprojector(rho);
    out.degenerate_basis = proj.degenerate_source();

    std::vector<NamedState> states;
    std::vector<double> phis{cfg.phi};
    phis.insert(phis.end(), cfg.retry_phis.begin(), cfg.retry_phis.end());
    for (std::size_t i = 0; i < phis.size(); ++i) {
        const auto pair = evolve_dephased_pair(rho, proj, phis[i]);
        WitnessInputs in = inputs;
        in.phi = phis[i];
        auto est = exact_decision(WitnessReport{trace_distance(pair.dephased_evolved, pair.evolved),
                                                WitnessKind::DiscordWitness, in, proj.degenerate_source()},
                                  cfg.exact_epsilon);
        if (i == 0 || est.fired) {
            out.td_report = est;
            states = {{"system_initial", partial_trace(rho, 0)},
                      {"system_evolved", pair.evolved},
                      {"system_dephased_evolved", pair.dephased_evolved}};
        }
        if (est.fired) break;
    }

    if (out.td_report.fired) {
        out.verdict = Verdict::QC;
    } else {
        const HalfWavePlate plate{cfg.hwp_angle};
        const auto g = growth_marginals(rho, plate.unitary(), cfg.phi);
        WitnessInputs in = inputs;
        in.phi = cfg.phi;
        in.hwp_angle = cfg.hwp_angle;
        out.growth_report = exact_decision(
            WitnessReport{growth_value(g), WitnessKind::CorrelationWitness, in, proj.degenerate_source()},
            cfg.exact_epsilon);
        out.verdict = out.growth_report->fired ? Verdict::CC : Verdict::F;
        states.push_back({"system_rotated_initial", g.rotated_initial});
        states.push_back({"system_rotated_evolved", g.rotated_evolved});
    }
    if (cfg.emit_states) out.intermediate_states = std::move(states);
    return out;
}

inline ClassificationResult classify_simulated_state(const DensityMatrix& rho, const ProtocolConfig& cfg,
                                                     const WitnessInputs& inputs) {
    ClassificationResult out;
    out.thresholds_used = cfg;
    const SimulatedLab lab(cfg);

    // Eigenbasis of the system from tomography of the joint state.
    const DensityMatrix joint_est = lab.joint(rho, stream_seed(cfg.seed, kJointTomography));
    const Projector proj = system_eigenprojector(joint_est);
    out.degenerate_basis = proj.degenerate_source();

    std::vector<NamedState> states;
    std::vector<double> phis{cfg.phi};
    phis.insert(phis.end(), cfg.retry_phis.begin(), cfg.retry_phis.end());
    for (std::size_t i = 0; i < phis.size(); ++i) {
        const double phi = phis[i];
        const auto truth = evolve_dephased_pair(rho, proj, phi);
        const DensityMatrix ev = lab.marginal(truth.evolved, stream_seed(cfg.seed, kStageOneMarginals, 2 * i));
        const DensityMatrix dev =
            lab.marginal(truth.dephased_evolved, stream_seed(cfg.seed, kStageOneMarginals, 2 * i + 1));
        const double measured = trace_distance(dev, ev);

        // Parametric bootstrap of the whole stage with the joint estimate as truth,
        // including re-estimation of the dephasing basis.
        const double plug_in = witness_Td(joint_est, proj, phi).value;
        std::vector<double> replicas;
        replicas.reserve(cfg.bootstrap_samples);
        const std::uint64_t base = derive_seed(stream_seed(cfg.seed, kStageOneBootstrap), i);
        for (std::size_t b = 0; b < cfg.bootstrap_samples; ++b) {
            const Projector p_b = system_eigenprojector(lab.joint(joint_est, stream_seed(base, 0, b)));
            const auto pair_b = evolve_dephased_pair(joint_est, p_b, phi);
            replicas.push_back(trace_distance(lab.marginal(pair_b.dephased_evolved, stream_seed(base, 1, b)),
                                              lab.marginal(pair_b.evolved, stream_seed(base, 2, b))));
        }

        WitnessInputs in = inputs;
        in.phi = phi;
        auto est = bootstrap_decision(
            WitnessReport{measured, WitnessKind::DiscordWitness, in, proj.degenerate_source()}, plug_in, replicas, cfg);
        if (i == 0 || est.fired) {
            out.td_report = est;
            states = {{"system_initial", partial_trace(joint_est, 0)},
                      {"system_evolved", ev},
                      {"system_dephased_evolved", dev}};
        }
        if (est.fired) break;
    }

    if (out.td_report.fired) {
        out.verdict = Verdict::QC;
    } else {
        const UnitaryOp v = HalfWavePlate{cfg.hwp_angle}.unitary();
        auto measure = [&](const GrowthMarginals& g, std::uint64_t seed) {
            return GrowthMarginals{lab.marginal(g.initial, derive_seed(seed, 0)),
                                   lab.marginal(g.rotated_initial, derive_seed(seed, 1)),
                                   lab.marginal(g.evolved, derive_seed(seed, 2)),
                                   lab.marginal(g.rotated_evolved, derive_seed(seed, 3))};
        };
        const GrowthMarginals measured = measure(growth_marginals(rho, v, cfg.phi),
                                                 stream_seed(cfg.seed, kStageTwoMarginals));
        const GrowthMarginals model = growth_marginals(joint_est, v, cfg.phi);
        std::vector<double> replicas;
        replicas.reserve(cfg.bootstrap_samples);
        for (std::size_t b = 0; b < cfg.bootstrap_samples; ++b) {
            replicas.push_back(growth_value(measure(model, stream_seed(cfg.seed, kStageTwoBootstrap, b))));
        }
        WitnessInputs in = inputs;
        in.phi = cfg.phi;
        in.hwp_angle = cfg.hwp_angle;
        out.growth_report = bootstrap_decision(
            WitnessReport{growth_value(measured), WitnessKind::CorrelationWitness, in, proj.degenerate_source()},
            growth_value(model), replicas, cfg);
        out.verdict = out.growth_report->fired ? Verdict::CC : Verdict::F;
        states.push_back({"system_rotated_initial", measured.rotated_initial});
        states.push_back({"system_rotated_evolved", measured.rotated_evolved});
    }
    if (cfg.emit_states) out.intermediate_states = std::move(states);
    return out;
}

} // namespace detail

/// Runs the two-stage procedure on a known state. In simulated mode the state
/// is only accessed through simulated tomography.
inline ClassificationResult classify(const DensityMatrix& rho_se, const ProtocolConfig& config,
                                     const WitnessInputs& inputs = {}) {
    config.validate();
    if (rho_se.dims() != std::vector<std::size_t>{2, 2}) {
        throw ValidationError("classify: expected a 4x4 state with dims [2, 2]");
    }
    return config.mode == Mode::Exact ? detail::classify_exact(rho_se, config, inputs)
                                      : detail::classify_simulated_state(rho_se, config, inputs);
}

/// Prepares a family state and classifies it through simulated tomography.
inline ClassificationResult classify_simulated(const FamilyParams& params, const ProtocolConfig& config) {
    if (config.mode != Mode::Simulated) throw ValidationError("classify_simulated requires simulated mode");
    params.validate();
    WitnessInputs in;
    in.lambda = params.lambda;
    if (params.family == Family::QC) in.theta = params.theta;
    return classify(make_state(params), config, in);
}

} // namespace qdw
