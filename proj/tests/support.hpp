// Random state generators shared by the property tests.
#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "qdw/channels.hpp"
#include "qdw/linalg.hpp"

namespace qdw::testing {

inline ComplexMatrix ginibre(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = complex{g(rng), g(rng)};
    return m;
}

/// Mixed state from a Ginibre matrix, G G^+ / Tr.
inline DensityMatrix random_state(std::size_t n, std::mt19937_64& rng, std::vector<std::size_t> dims = {}) {
    const ComplexMatrix g = ginibre(n, rng);
    ComplexMatrix m = g * g.adjoint();
    m *= complex{1.0 / m.trace().real(), 0.0};
    // Remove rounding asymmetry.
    m = (m + m.adjoint()) * complex{0.5, 0.0};
    return DensityMatrix(std::move(m), std::move(dims));
}

inline DensityMatrix random_pair_state(std::mt19937_64& rng) { return random_state(4, rng, {2, 2}); }

/// Random Hermitian matrix with entries of order one.
inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    const ComplexMatrix g = ginibre(n, rng);
    return (g + g.adjoint()) * complex{0.5, 0.0};
}

/// Haar-ish unitary from Gram-Schmidt on a Ginibre matrix.
inline UnitaryOp random_unitary(std::size_t n, std::mt19937_64& rng) {
    ComplexMatrix m = ginibre(n, rng);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t k = 0; k < c; ++k) {
            complex dot{0.0, 0.0};
            for (std::size_t r = 0; r < n; ++r) dot += std::conj(m(r, k)) * m(r, c);
            for (std::size_t r = 0; r < n; ++r) m(r, c) -= dot * m(r, k);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) norm += std::norm(m(r, c));
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) m(r, c) /= norm;
    }
    return UnitaryOp(std::move(m));
}

} // namespace qdw::testing
