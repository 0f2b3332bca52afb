// Dense complex linear algebra for the small (2x2, 4x4) operators that appear
// in two-qubit system/environment models.
//
// Everything here is a value type. Matrices are row-major; for a bipartite
// operator the composite index of (s, e) is s * dim_e + e, i.e. the system
// factor comes first.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdw/errors.hpp"

namespace qdw {

using complex = std::complex<double>;

/// Tolerance for Hermiticity, unit trace and positivity of states.
inline constexpr double kStateTolerance = 1e-9;

/// Spectral gap below which two eigenvalues count as degenerate.
inline constexpr double kDegeneracyGap = 1e-9;

class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, complex{0.0, 0.0}) {
        if (rows == 0 || cols == 0) {
            throw ValidationError("ComplexMatrix: dimensions must be positive");
        }
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows == 0 || cols == 0) {
            throw ValidationError("ComplexMatrix: dimensions must be positive");
        }
        if (entries_.size() != rows * cols) {
            throw ValidationError("ComplexMatrix: expected " + std::to_string(rows * cols) +
                                  " entries, got " + std::to_string(entries_.size()));
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    static ComplexMatrix diagonal(std::initializer_list<double> values) {
        return diagonal(std::span<const double>(values.begin(), values.size()));
    }

    // |v><v|
    static ComplexMatrix projector(std::span<const complex> ket) {
        const std::size_t n = ket.size();
        ComplexMatrix m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = ket[r] * std::conj(ket[c]);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    std::span<const complex> entries() const noexcept { return entries_; }

    complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    complex trace() const {
        require_square("trace");
        complex t{0.0, 0.0};
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "+");
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "-");
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
        return *this;
    }

    ComplexMatrix& operator*=(complex s) {
        for (auto& e : entries_) e *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
    friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) {
            throw ValidationError("ComplexMatrix: inner dimensions do not match for product");
        }
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const complex x = a(r, k);
                if (x == complex{0.0, 0.0}) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += x * b(k, c);
            }
        return out;
    }

    /// Largest entrywise modulus of (this - other); shapes must agree.
    double max_abs_diff(const ComplexMatrix& o) const {
        require_same_shape(o, "max_abs_diff");
        double worst = 0.0;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            worst = std::max(worst, std::abs(entries_[i] - o.entries_[i]));
        return worst;
    }

    bool approx_equal(const ComplexMatrix& o, double tol) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && max_abs_diff(o) <= tol;
    }

    /// max |a_ij - conj(a_ji)|
    double hermiticity_defect() const {
        require_square("hermiticity_defect");
        double worst = 0.0;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = r; c < cols_; ++c)
                worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        return worst;
    }

    bool is_hermitian(double tol = kStateTolerance) const {
        return is_square() && hermiticity_defect() <= tol;
    }

    bool is_unitary(double tol) const {
        return is_square() && (adjoint() * (*this)).approx_equal(identity(rows_), tol);
    }

    bool operator==(const ComplexMatrix&) const = default;

private:
    void require_square(const char* op) const {
        if (!is_square()) throw ValidationError(std::string("ComplexMatrix::") + op + ": matrix is not square");
    }
    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw ValidationError(std::string("ComplexMatrix ") + op + ": shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<complex> entries_;
};

/// Kronecker product; composite row index is s * b.rows() + e.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const complex x = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
        }
    return out;
}

/// U m U^dagger
inline ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& m) {
    return u * m * u.adjoint();
}

struct HermEigResult {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
    bool degeneracy_flag = false;

    std::vector<complex> eigenvector(std::size_t k) const {
        std::vector<complex> v(eigenvectors.rows());
        for (std::size_t r = 0; r < v.size(); ++r) v[r] = eigenvectors(r, k);
        return v;
    }
};

namespace detail {

// Makes the first component with modulus above 1e-9 real and positive.
inline void fix_phase(ComplexMatrix& vecs, std::size_t col) {
    for (std::size_t r = 0; r < vecs.rows(); ++r) {
        const complex x = vecs(r, col);
        if (std::abs(x) > 1e-9) {
            const complex phase = std::conj(x) / std::abs(x);
            for (std::size_t k = 0; k < vecs.rows(); ++k) vecs(k, col) *= phase;
            return;
        }
    }
}

inline void normalize_column(ComplexMatrix& vecs, std::size_t col) {
    double n2 = 0.0;
    for (std::size_t r = 0; r < vecs.rows(); ++r) n2 += std::norm(vecs(r, col));
    const double inv = 1.0 / std::sqrt(n2);
    for (std::size_t r = 0; r < vecs.rows(); ++r) vecs(r, col) *= inv;
}

inline HermEigResult eig_2x2(const ComplexMatrix& h) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const complex b = h(0, 1);
    const double mean = 0.5 * (a + d);
    const double half_gap = std::hypot(0.5 * (a - d), std::abs(b));
    const double hi = mean + half_gap;
    const double lo = mean - half_gap;

    ComplexMatrix vecs(2, 2);
    if (half_gap == 0.0) {
        vecs = ComplexMatrix::identity(2);
    } else {
        // (h - lambda) v = 0 from whichever row is better conditioned.
        for (std::size_t k = 0; k < 2; ++k) {
            const double lam = k == 0 ? hi : lo;
            const complex r0x = b, r0y = lam - a;        // from row 0: v = (b, lam - a)
            const complex r1x = lam - d, r1y = std::conj(b);  // from row 1: v = (lam - d, b*)
            if (std::norm(r0x) + std::norm(r0y) >= std::norm(r1x) + std::norm(r1y)) {
                vecs(0, k) = r0x;
                vecs(1, k) = r0y;
            } else {
                vecs(0, k) = r1x;
                vecs(1, k) = r1y;
            }
            normalize_column(vecs, k);
        }
    }
    return HermEigResult{{hi, lo}, std::move(vecs), false};
}

// Cyclic complex Jacobi; stops when the off-diagonal Frobenius norm drops below 1e-12.
inline HermEigResult eig_jacobi(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    ComplexMatrix a = h;
    ComplexMatrix v = ComplexMatrix::identity(n);
    constexpr int kMaxSweeps = 100;
    constexpr double kOffTolerance = 1e-12;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (r != c) s += std::norm(a(r, c));
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < kMaxSweeps && off_norm() > kOffTolerance; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const complex phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // G = diag(1, conj(phase)) on (p, q) followed by a real rotation.
                ComplexMatrix g = ComplexMatrix::identity(n);
                g(p, p) = c;
                g(p, q) = s;
                g(q, p) = -s * std::conj(phase);
                g(q, q) = c * std::conj(phase);
                a = g.adjoint() * a * g;
                v = v * g;
            }
    }
    if (off_norm() > kOffTolerance) {
        throw NumericalError("herm_eig: Jacobi iteration did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    HermEigResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

} // namespace detail

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are returned in
/// descending order; each eigenvector has its first non-negligible component
/// real and positive so results are reproducible.
inline HermEigResult herm_eig(const ComplexMatrix& h) {
    if (!h.is_square()) throw ValidationError("herm_eig: matrix is not square");
    if (h.hermiticity_defect() > kStateTolerance) {
        throw ValidationError("herm_eig: matrix is not Hermitian within 1e-9");
    }
    HermEigResult res;
    if (h.rows() == 1) {
        res.eigenvalues = {h(0, 0).real()};
        res.eigenvectors = ComplexMatrix::identity(1);
    } else if (h.rows() == 2) {
        res = detail::eig_2x2(h);
    } else {
        res = detail::eig_jacobi(h);
    }
    for (std::size_t k = 0; k < res.eigenvalues.size(); ++k) detail::fix_phase(res.eigenvectors, k);
    for (std::size_t k = 0; k + 1 < res.eigenvalues.size(); ++k)
        if (res.eigenvalues[k] - res.eigenvalues[k + 1] < kDegeneracyGap) res.degeneracy_flag = true;
    return res;
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
inline double trace_norm(const ComplexMatrix& h) {
    const auto eig = herm_eig(h);
    double s = 0.0;
    for (double x : eig.eigenvalues) s += std::abs(x);
    return s;
}

/// A validated quantum state with subsystem dimensions (system first).
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m) : DensityMatrix(std::move(m), {}) {}

    DensityMatrix(ComplexMatrix m, std::vector<std::size_t> dims) : matrix_(std::move(m)), dims_(std::move(dims)) {
        if (!matrix_.is_square()) throw ValidationError("DensityMatrix: matrix is not square");
        if (dims_.empty()) dims_ = {matrix_.rows()};
        const std::size_t prod =
            std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>{});
        if (prod != matrix_.rows() || std::find(dims_.begin(), dims_.end(), 0u) != dims_.end()) {
            throw ValidationError("DensityMatrix: subsystem dimensions do not multiply to the matrix size");
        }
        const double herm = matrix_.hermiticity_defect();
        if (herm > kStateTolerance) {
            throw ValidationError("DensityMatrix: not Hermitian (defect " + std::to_string(herm) + ")");
        }
        const complex tr = matrix_.trace();
        if (std::abs(tr - 1.0) > kStateTolerance) {
            throw ValidationError("DensityMatrix: trace " + std::to_string(tr.real()) + " differs from 1");
        }
        const auto eig = herm_eig(matrix_);
        if (eig.eigenvalues.back() < -kStateTolerance) {
            throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(eig.eigenvalues.back()));
        }
    }

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t dim() const noexcept { return matrix_.rows(); }
    bool is_bipartite() const noexcept { return dims_.size() == 2; }

    const complex& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

    bool approx_equal(const DensityMatrix& o, double tol) const {
        return dims_ == o.dims_ && matrix_.approx_equal(o.matrix_, tol);
    }

private:
    ComplexMatrix matrix_;
    std::vector<std::size_t> dims_;
};

/// Marginal of a bipartite state; keep = 0 keeps the system, 1 the environment.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep) {
    if (!rho.is_bipartite()) throw ValidationError("partial_trace: state must have exactly two subsystems");
    if (keep > 1) throw ValidationError("partial_trace: keep must be 0 (system) or 1 (environment)");
    const std::size_t ds = rho.dims()[0];
    const std::size_t de = rho.dims()[1];
    const auto& m = rho.matrix();
    if (keep == 0) {
        ComplexMatrix out(ds, ds);
        for (std::size_t i = 0; i < ds; ++i)
            for (std::size_t j = 0; j < ds; ++j)
                for (std::size_t e = 0; e < de; ++e) out(i, j) += m(i * de + e, j * de + e);
        return DensityMatrix(std::move(out));
    }
    ComplexMatrix out(de, de);
    for (std::size_t i = 0; i < de; ++i)
        for (std::size_t j = 0; j < de; ++j)
            for (std::size_t s = 0; s < ds; ++s) out(i, j) += m(s * de + i, s * de + j);
    return DensityMatrix(std::move(out));
}

/// Half the trace norm of the difference; lies in [0, 1].
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw ValidationError("trace_distance: dimension mismatch");
    return 0.5 * trace_norm(a.matrix() - b.matrix());
}

} // namespace qdw
