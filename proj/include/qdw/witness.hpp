// Trace-distance figures of merit for system/environment correlations.
//
//   discord quantifier   T     = 1/2 || D(rho) - rho ||_1
//   local discord witness T_d  = 1/2 || Tr_E U D(rho) U^+ - Tr_E U rho U^+ ||_1
//   correlation witness  dT_u  = 1/2 || Tr_E U rho_u U^+ - Tr_E U rho U^+ ||_1
//                               - 1/2 || Tr_E rho_u - Tr_E rho ||_1
//
// D is the dephasing in the eigenbasis of the system marginal, U the phase
// gate and rho_u = (V (x) 1) rho (V (x) 1)^+ for a local system unitary V.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "qdw/channels.hpp"
#include "qdw/errors.hpp"
#include "qdw/linalg.hpp"

namespace qdw {

enum class WitnessKind { DiscordQuantifier, DiscordWitness, CorrelationWitness };

inline std::string_view to_string(WitnessKind k) {
    switch (k) {
    case WitnessKind::DiscordQuantifier: return "DiscordQuantifier";
    case WitnessKind::DiscordWitness: return "DiscordWitness";
    case WitnessKind::CorrelationWitness: return "CorrelationWitness";
    }
    return "?";
}

/// Parameters the value was computed for. Fields the witness itself does not
/// know (the family weights) are filled in by callers that do.
struct WitnessInputs {
    std::optional<double> lambda;
    std::optional<double> theta;
    std::optional<double> phi;
    std::optional<double> hwp_angle;
};

struct WitnessReport {
    double value = 0.0;
    WitnessKind kind = WitnessKind::DiscordQuantifier;
    WitnessInputs inputs;
    bool degenerate_basis = false;
};

/// Tolerance for the runtime agreement of the two forms of the discord quantifier.
inline constexpr double kDiscordFormTolerance = 1e-9;

/// 1/2 ||D(rho) - rho||_1, cross-checked against ||P rho P - {P, rho}/2||_1
/// with P lifted to P (x) 1.
inline WitnessReport discord_T(const DensityMatrix& rho_se, const WitnessInputs& inputs = {}) {
    const Projector proj = system_eigenprojector(rho_se);
    const DensityMatrix dephased = dephase(rho_se, proj);
    const double t = trace_distance(dephased, rho_se);

    const ComplexMatrix p = kron(proj.matrix(), ComplexMatrix::identity(2));
    const auto& m = rho_se.matrix();
    const ComplexMatrix anti = p * m + m * p;
    const double alt = trace_norm(p * m * p - 0.5 * anti);
    if (std::abs(alt - t) > kDiscordFormTolerance) {
        throw NumericalError("discord_T: dephasing and anticommutator forms disagree (" + std::to_string(t) +
                             " vs " + std::to_string(alt) + ")");
    }
    return WitnessReport{t, WitnessKind::DiscordQuantifier, inputs, proj.degenerate_source()};
}

/// System marginals after the phase gate, for the state and its dephased copy.
struct DephasedPair {
    DensityMatrix evolved;           // Tr_E U rho U^+
    DensityMatrix dephased_evolved;  // Tr_E U D(rho) U^+
    Projector projector;
};

inline DephasedPair evolve_dephased_pair(const DensityMatrix& rho_se, const Projector& proj, double phi) {
    return DephasedPair{partial_trace(phase_gate_evolve(rho_se, phi), 0),
                        partial_trace(phase_gate_evolve(dephase(rho_se, proj), phi), 0), proj};
}

inline WitnessReport witness_Td(const DensityMatrix& rho_se, const Projector& proj, double phi,
                                WitnessInputs inputs = {}) {
    const auto pair = evolve_dephased_pair(rho_se, proj, phi);
    inputs.phi = phi;
    return WitnessReport{trace_distance(pair.dephased_evolved, pair.evolved), WitnessKind::DiscordWitness, inputs,
                         proj.degenerate_source()};
}

/// Local discord witness using the eigenprojector of the exact system marginal.
inline WitnessReport witness_Td(const DensityMatrix& rho_se, double phi, WitnessInputs inputs = {}) {
    return witness_Td(rho_se, system_eigenprojector(rho_se), phi, std::move(inputs));
}

/// The four system marginals entering the correlation witness.
struct GrowthMarginals {
    DensityMatrix initial;          // Tr_E rho
    DensityMatrix rotated_initial;  // Tr_E rho_u
    DensityMatrix evolved;          // Tr_E U rho U^+
    DensityMatrix rotated_evolved;  // Tr_E U rho_u U^+
};

inline GrowthMarginals growth_marginals(const DensityMatrix& rho_se, const UnitaryOp& v, double phi) {
    const DensityMatrix rotated = apply_local_system(rho_se, v);
    return GrowthMarginals{partial_trace(rho_se, 0), partial_trace(rotated, 0),
                           partial_trace(phase_gate_evolve(rho_se, phi), 0),
                           partial_trace(phase_gate_evolve(rotated, phi), 0)};
}

/// T_u(t) - T_u(0) from four marginals.
inline double growth_value(const GrowthMarginals& g) {
    return trace_distance(g.rotated_evolved, g.evolved) - trace_distance(g.rotated_initial, g.initial);
}

inline WitnessReport witness_growth(const DensityMatrix& rho_se, const UnitaryOp& v, double phi,
                                    WitnessInputs inputs = {}) {
    inputs.phi = phi;
    return WitnessReport{growth_value(growth_marginals(rho_se, v, phi)), WitnessKind::CorrelationWitness, inputs,
                         false};
}

inline WitnessReport witness_growth(const DensityMatrix& rho_se, const HalfWavePlate& plate, double phi,
                                    WitnessInputs inputs = {}) {
    inputs.hwp_angle = plate.alpha;
    return witness_growth(rho_se, plate.unitary(), phi, std::move(inputs));
}

/// lambda (cos 2 theta - 1) - cos 2 theta. Vanishes exactly where the QC family
/// is invisible to the phi = pi local witness.
inline double zero_line_residual(double lambda, double theta) {
    const double c = std::cos(2.0 * theta);
    return lambda * (c - 1.0) - c;
}

/// The lambda on the zero line for a given theta in (pi/4, pi/2].
inline double zero_line_lambda(double theta) {
    const double c = std::cos(2.0 * theta);
    return c / (c - 1.0);
}

} // namespace qdw
