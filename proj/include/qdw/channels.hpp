// Operations on 2x2 system/environment states: eigenbasis dephasing of the
// system, the conditional phase gate, and local system unitaries.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "qdw/errors.hpp"
#include "qdw/linalg.hpp"

namespace qdw {

/// A validated unitary matrix.
class UnitaryOp {
public:
    static constexpr double kTolerance = 1e-9;

    explicit UnitaryOp(ComplexMatrix m) : matrix_(std::move(m)) {
        if (!matrix_.is_unitary(kTolerance)) throw ValidationError("UnitaryOp: matrix is not unitary within 1e-9");
    }

    static UnitaryOp identity(std::size_t n) { return UnitaryOp(ComplexMatrix::identity(n)); }

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.rows(); }
    UnitaryOp inverse() const { return UnitaryOp(matrix_.adjoint()); }

private:
    ComplexMatrix matrix_;
};

/// Rank-one projector on the system qubit.
class Projector {
public:
    explicit Projector(ComplexMatrix m, bool degenerate_source = false)
        : matrix_(std::move(m)), degenerate_source_(degenerate_source) {
        if (matrix_.rows() != 2 || !matrix_.is_square()) throw ValidationError("Projector: must be 2x2");
        if (!matrix_.is_hermitian(kStateTolerance)) throw ValidationError("Projector: not Hermitian");
        if (!(matrix_ * matrix_).approx_equal(matrix_, kStateTolerance)) {
            throw ValidationError("Projector: not idempotent");
        }
        if (std::abs(matrix_.trace() - 1.0) > kStateTolerance) throw ValidationError("Projector: rank is not one");
    }

    static Projector onto(std::span<const complex> ket, bool degenerate_source = false) {
        return Projector(ComplexMatrix::projector(ket), degenerate_source);
    }

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    bool degenerate_source() const noexcept { return degenerate_source_; }
    ComplexMatrix complement() const { return ComplexMatrix::identity(2) - matrix_; }

private:
    ComplexMatrix matrix_;
    bool degenerate_source_;
};

/// 1 (x) |0><0| + Diag(e^{i phi}, 1) (x) |1><1|: a polarization phase applied in
/// environment channel 1 only.
struct PhaseGate {
    double phi = std::numbers::pi;

    UnitaryOp unitary() const {
        ComplexMatrix u = ComplexMatrix::identity(4);
        u(1, 1) = std::polar(1.0, phi);  // |H>|1>
        return UnitaryOp(std::move(u));
    }
};

/// [[cos 2a, sin 2a], [sin 2a, -cos 2a]]
struct HalfWavePlate {
    double alpha = std::numbers::pi / 8;

    UnitaryOp unitary() const {
        const double c = std::cos(2.0 * alpha);
        const double s = std::sin(2.0 * alpha);
        return UnitaryOp(ComplexMatrix(2, 2, {c, s, s, -c}));
    }
};

namespace detail {

inline void require_qubit_pair(const DensityMatrix& rho, const char* op) {
    if (rho.dims() != std::vector<std::size_t>{2, 2}) {
        throw ValidationError(std::string(op) + ": expected a 4x4 state with dims [2, 2]");
    }
}

inline DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& u) {
    return DensityMatrix(conjugate_by(u, rho.matrix()), rho.dims());
}

} // namespace detail

/// Projector onto the leading eigenvector of the system marginal. A degenerate
/// marginal falls back to |H><H| and marks the projector.
inline Projector system_eigenprojector(const DensityMatrix& rho_se) {
    detail::require_qubit_pair(rho_se, "system_eigenprojector");
    const auto eig = herm_eig(partial_trace(rho_se, 0).matrix());
    if (eig.degeneracy_flag) {
        return Projector(ComplexMatrix::diagonal({1.0, 0.0}), true);
    }
    return Projector::onto(eig.eigenvector(0));
}

/// (P (x) 1) rho (P (x) 1) + ((1 - P) (x) 1) rho ((1 - P) (x) 1)
inline DensityMatrix dephase(const DensityMatrix& rho_se, const Projector& proj) {
    detail::require_qubit_pair(rho_se, "dephase");
    const ComplexMatrix id = ComplexMatrix::identity(2);
    const ComplexMatrix p = kron(proj.matrix(), id);
    const ComplexMatrix q = kron(proj.complement(), id);
    const auto& m = rho_se.matrix();
    return DensityMatrix(p * m * p + q * m * q, rho_se.dims());
}

inline DensityMatrix phase_gate_evolve(const DensityMatrix& rho_se, double phi) {
    detail::require_qubit_pair(rho_se, "phase_gate_evolve");
    return detail::evolve(rho_se, PhaseGate{phi}.unitary().matrix());
}

/// (V (x) 1) rho (V^dagger (x) 1); leaves the environment marginal unchanged.
inline DensityMatrix apply_local_system(const DensityMatrix& rho_se, const UnitaryOp& v) {
    detail::require_qubit_pair(rho_se, "apply_local_system");
    if (v.dim() != 2) throw ValidationError("apply_local_system: system unitary must be 2x2");
    return detail::evolve(rho_se, kron(v.matrix(), ComplexMatrix::identity(2)));
}

} // namespace qdw
