// Parameterized polarization (system) / momentum (environment) states:
// classically correlated, discordant and factorized families.
#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "qdw/errors.hpp"
#include "qdw/linalg.hpp"

namespace qdw {

enum class Family { CC, QC, F };

inline std::string_view to_string(Family f) {
    switch (f) {
    case Family::CC: return "CC";
    case Family::QC: return "QC";
    case Family::F: return "F";
    }
    return "?";
}

/// Accepts "CC"/"QC"/"F" in any letter case.
inline Family family_from_string(std::string_view s) {
    std::string up(s);
    for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (up == "CC") return Family::CC;
    if (up == "QC") return Family::QC;
    if (up == "F") return Family::F;
    throw ValidationError("unknown state family '" + std::string(s) + "' (expected CC, QC or F)");
}

struct FamilyParams {
    Family family = Family::QC;
    double lambda = 0.5;
    double theta = 0.0;  // radians, QC only

    void validate() const {
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw ValidationError("lambda must lie in [0, 1], got " + std::to_string(lambda));
        }
        if (family == Family::QC) {
            if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
                throw ValidationError("theta must lie in [0, pi/2], got " + std::to_string(theta));
            }
        } else if (theta != 0.0) {
            throw ValidationError("theta is only meaningful for the QC family");
        }
    }
};

/// cos(theta)|H> + sin(theta)|V>
inline std::array<complex, 2> theta_ket(double theta) {
    return {complex{std::cos(theta), 0.0}, complex{std::sin(theta), 0.0}};
}

namespace detail {

inline void require_weight(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ValidationError("lambda must lie in [0, 1], got " + std::to_string(lambda));
    }
}

inline ComplexMatrix ket_projector(const std::array<complex, 2>& ket) { return ComplexMatrix::projector(ket); }

inline const ComplexMatrix& env_zero() {
    static const ComplexMatrix m = ComplexMatrix::diagonal({1.0, 0.0});
    return m;
}
inline const ComplexMatrix& env_one() {
    static const ComplexMatrix m = ComplexMatrix::diagonal({0.0, 1.0});
    return m;
}

} // namespace detail

/// lambda |H><H| (x) |0><0| + (1 - lambda) |V><V| (x) |1><1|
inline DensityMatrix make_cc(double lambda) {
    detail::require_weight(lambda);
    return DensityMatrix(ComplexMatrix::diagonal({lambda, 0.0, 0.0, 1.0 - lambda}), {2, 2});
}

/// lambda |H><H| (x) |0><0| + (1 - lambda) |theta><theta| (x) |1><1|
inline DensityMatrix make_qc(double lambda, double theta) {
    detail::require_weight(lambda);
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
        throw ValidationError("theta must lie in [0, pi/2], got " + std::to_string(theta));
    }
    const ComplexMatrix h = detail::ket_projector(theta_ket(0.0));
    const ComplexMatrix t = detail::ket_projector(theta_ket(theta));
    ComplexMatrix m = lambda * kron(h, detail::env_zero()) + (1.0 - lambda) * kron(t, detail::env_one());
    return DensityMatrix(std::move(m), {2, 2});
}

/// (lambda |H><H| + (1 - lambda) |V><V|) (x) 1/2
inline DensityMatrix make_f(double lambda) {
    detail::require_weight(lambda);
    const double a = 0.5 * lambda;
    const double b = 0.5 * (1.0 - lambda);
    return DensityMatrix(ComplexMatrix::diagonal({a, a, b, b}), {2, 2});
}

inline DensityMatrix make_state(const FamilyParams& p) {
    p.validate();
    switch (p.family) {
    case Family::CC: return make_cc(p.lambda);
    case Family::QC: return make_qc(p.lambda, p.theta);
    case Family::F: return make_f(p.lambda);
    }
    throw ValidationError("unknown family");
}

} // namespace qdw
