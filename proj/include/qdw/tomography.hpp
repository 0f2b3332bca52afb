// Simulated projective tomography of one- and two-qubit states.
//
// Counts are drawn from a multinomial per measurement setting. Reconstruction
// is linear inversion in the Pauli basis followed by projection onto the
// closest density matrix; error bars come from a parametric bootstrap that
// resamples counts from the point estimate.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qdw/errors.hpp"
#include "qdw/linalg.hpp"
#include "qdw/random.hpp"

namespace qdw {

struct MeasurementSetting {
    std::string label;
    std::vector<ComplexMatrix> projectors;

    std::size_t dim() const { return projectors.empty() ? 0 : projectors.front().rows(); }
};

/// Outcome probabilities (or frequencies), one row per setting.
using OutcomeTable = std::vector<std::vector<double>>;

struct TomographyRecord {
    std::vector<MeasurementSetting> settings;
    std::vector<std::vector<std::uint64_t>> counts;
    std::uint64_t shots_per_setting = 0;
    std::uint64_t seed = 0;
};

struct ReconstructedState {
    DensityMatrix estimate;
    std::vector<double> std_errors;  // row-major, one per matrix entry
    std::size_t bootstrap_samples = 0;  // zero for noiseless reconstructions

    double mean_std_error() const {
        if (std_errors.empty()) return 0.0;
        double s = 0.0;
        for (double e : std_errors) s += e;
        return s / static_cast<double>(std_errors.size());
    }
};

inline constexpr std::size_t kDefaultBootstrapSamples = 200;

namespace detail {

inline constexpr double kCompletenessTolerance = 1e-12;
inline constexpr double kProbabilityDrift = 1e-9;

struct QubitBasis {
    const char* label;
    std::array<complex, 2> first;
    std::array<complex, 2> second;
};

inline const std::array<QubitBasis, 3>& qubit_bases() {
    static const double r = std::numbers::sqrt2 / 2.0;
    static const std::array<QubitBasis, 3> bases{{
        {"HV", {complex{1, 0}, complex{0, 0}}, {complex{0, 0}, complex{1, 0}}},
        {"DA", {complex{r, 0}, complex{r, 0}}, {complex{r, 0}, complex{-r, 0}}},
        {"RL", {complex{r, 0}, complex{0, r}}, {complex{r, 0}, complex{0, -r}}},
    }};
    return bases;
}

// I, X, Y, Z
inline const std::array<ComplexMatrix, 4>& paulis() {
    static const std::array<ComplexMatrix, 4> p{
        ComplexMatrix::identity(2),
        ComplexMatrix(2, 2, {0, 1, 1, 0}),
        ComplexMatrix(2, 2, {0, complex{0, -1}, complex{0, 1}, 0}),
        ComplexMatrix(2, 2, {1, 0, 0, -1}),
    };
    return p;
}

inline std::vector<ComplexMatrix> pauli_basis(std::size_t n_qubits) {
    std::vector<ComplexMatrix> basis{ComplexMatrix::identity(1)};
    for (std::size_t q = 0; q < n_qubits; ++q) {
        std::vector<ComplexMatrix> next;
        next.reserve(basis.size() * 4);
        for (const auto& b : basis)
            for (const auto& p : paulis()) next.push_back(kron(b, p));
        basis = std::move(next);
    }
    return basis;
}

inline std::size_t qubit_count(std::size_t dim) {
    if (dim == 2) return 1;
    if (dim == 4) return 2;
    throw ValidationError("tomography supports one or two qubits only");
}

inline std::vector<std::size_t> qubit_dims(std::size_t dim) {
    return qubit_count(dim) == 1 ? std::vector<std::size_t>{2} : std::vector<std::size_t>{2, 2};
}

inline void validate_settings(std::span<const MeasurementSetting> settings) {
    if (settings.empty()) throw ValidationError("tomography: no measurement settings");
    const std::size_t dim = settings.front().dim();
    qubit_count(dim);
    for (const auto& s : settings) {
        if (s.projectors.empty()) throw ValidationError("setting '" + s.label + "' has no projectors");
        ComplexMatrix sum(dim, dim);
        for (const auto& p : s.projectors) {
            if (p.rows() != dim || !p.is_square()) {
                throw ValidationError("setting '" + s.label + "' mixes projector dimensions");
            }
            sum += p;
        }
        if (!sum.approx_equal(ComplexMatrix::identity(dim), kCompletenessTolerance)) {
            throw ValidationError("setting '" + s.label + "' projectors do not sum to the identity");
        }
    }
}

// Sequential conditional binomials.
inline std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs, std::uint64_t shots,
                                                     std::mt19937_64& rng) {
    std::vector<std::uint64_t> out(probs.size(), 0);
    std::uint64_t remaining = shots;
    double mass = 1.0;
    for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
        const double p = mass > 0.0 ? std::clamp(probs[i] / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<long long> draw(static_cast<long long>(remaining), p);
        const auto k = static_cast<std::uint64_t>(draw(rng));
        out[i] = k;
        remaining -= k;
        mass -= probs[i];
    }
    if (!probs.empty()) out.back() += remaining;
    return out;
}

// Dense least squares via normal equations and partial pivoting.
inline std::vector<double> solve_least_squares(const std::vector<std::vector<double>>& a,
                                               const std::vector<double>& b) {
    const std::size_t k = a.front().size();
    std::vector<std::vector<double>> m(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) m[i][j] += a[r][i] * a[r][j];
            m[i][k] += a[r][i] * b[r];
        }
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(m[i][i]));
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) <= 1e-10 * std::max(scale, 1.0)) {
            throw ValidationError("tomography: measurement design is not informationally complete");
        }
        std::swap(m[piv], m[col]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c <= k; ++c) m[r][c] -= f * m[col][c];
        }
    }
    std::vector<double> x(k);
    for (std::size_t i = 0; i < k; ++i) x[i] = m[i][k] / m[i][i];
    return x;
}

} // namespace detail

/// {HV, DA, RL} for one qubit; all nine ordered pairs for two qubits, with
/// outcome index a * 2 + b for outcomes a (system) and b (environment).
inline std::vector<MeasurementSetting> default_settings(int n_qubits) {
    const auto& bases = detail::qubit_bases();
    std::vector<MeasurementSetting> out;
    if (n_qubits == 1) {
        for (const auto& b : bases) {
            out.push_back({b.label, {ComplexMatrix::projector(b.first), ComplexMatrix::projector(b.second)}});
        }
        return out;
    }
    if (n_qubits == 2) {
        for (const auto& s : bases)
            for (const auto& e : bases) {
                MeasurementSetting m{std::string(s.label) + "-" + e.label, {}};
                for (const auto* ks : {&s.first, &s.second})
                    for (const auto* ke : {&e.first, &e.second})
                        m.projectors.push_back(kron(ComplexMatrix::projector(*ks), ComplexMatrix::projector(*ke)));
                out.push_back(std::move(m));
            }
        return out;
    }
    throw ValidationError("default_settings: only 1 or 2 qubits are supported");
}

/// Looks a setting up by label among the default one- and two-qubit designs.
inline MeasurementSetting setting_by_label(const std::string& label) {
    for (int n : {1, 2})
        for (auto& s : default_settings(n))
            if (s.label == label) return s;
    throw ValidationError("unknown measurement setting label '" + label + "'");
}

/// Born-rule probabilities Tr[P rho] per setting. Drift beyond 1e-9 outside
/// [0, 1] or away from unit sum is rejected; smaller drift is clamped and renormalized.
inline OutcomeTable outcome_probabilities(const DensityMatrix& rho, std::span<const MeasurementSetting> settings) {
    detail::validate_settings(settings);
    if (settings.front().dim() != rho.dim()) {
        throw ValidationError("tomography: state dimension does not match the measurement settings");
    }
    OutcomeTable table;
    table.reserve(settings.size());
    for (const auto& s : settings) {
        std::vector<double> probs;
        double total = 0.0;
        for (const auto& p : s.projectors) {
            const double x = (p * rho.matrix()).trace().real();
            if (x < -detail::kProbabilityDrift || x > 1.0 + detail::kProbabilityDrift) {
                throw ValidationError("tomography: outcome probability " + std::to_string(x) + " outside [0, 1]");
            }
            probs.push_back(std::clamp(x, 0.0, 1.0));
            total += probs.back();
        }
        if (std::abs(total - 1.0) > detail::kProbabilityDrift) {
            throw ValidationError("tomography: outcome probabilities of '" + s.label + "' do not sum to one");
        }
        for (auto& x : probs) x /= total;
        table.push_back(std::move(probs));
    }
    return table;
}

/// One multinomial draw of `shots` outcomes per setting. Setting i uses an
/// engine seeded with seed + i, so the result does not depend on evaluation order.
inline TomographyRecord simulate_counts(const DensityMatrix& rho, std::vector<MeasurementSetting> settings,
                                        std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw ValidationError("simulate_counts: shots must be positive");
    const OutcomeTable probs = outcome_probabilities(rho, settings);
    TomographyRecord rec{std::move(settings), {}, shots, seed};
    rec.counts.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        std::mt19937_64 rng(seed + i);
        rec.counts.push_back(detail::sample_multinomial(probs[i], shots, rng));
    }
    return rec;
}

/// Hermitian, unit-trace least-squares solution of Tr[P_k rho] = f_k. The
/// result need not be positive.
inline ComplexMatrix linear_inversion(std::span<const MeasurementSetting> settings, const OutcomeTable& freqs) {
    detail::validate_settings(settings);
    if (freqs.size() != settings.size()) throw ValidationError("linear_inversion: one frequency row per setting");
    const std::size_t dim = settings.front().dim();
    const auto basis = detail::pauli_basis(detail::qubit_count(dim));
    const double inv_dim = 1.0 / static_cast<double>(dim);

    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t s = 0; s < settings.size(); ++s) {
        if (freqs[s].size() != settings[s].projectors.size()) {
            throw ValidationError("linear_inversion: frequency row size does not match setting '" +
                                  settings[s].label + "'");
        }
        for (std::size_t k = 0; k < settings[s].projectors.size(); ++k) {
            const auto& p = settings[s].projectors[k];
            std::vector<double> row;
            row.reserve(basis.size() - 1);
            for (std::size_t j = 1; j < basis.size(); ++j) row.push_back((p * basis[j]).trace().real() * inv_dim);
            a.push_back(std::move(row));
            // Identity coefficient is pinned to 1 (unit trace).
            b.push_back(freqs[s][k] - p.trace().real() * inv_dim);
        }
    }
    const auto coeffs = detail::solve_least_squares(a, b);
    ComplexMatrix rho = ComplexMatrix::identity(dim) * complex{inv_dim, 0.0};
    for (std::size_t j = 1; j < basis.size(); ++j) rho += basis[j] * complex{coeffs[j - 1] * inv_dim, 0.0};
    return rho;
}

/// Closest density matrix in the 2-norm: shift the spectrum to unit trace,
/// then zero negative eigenvalues from the bottom up, spreading their mass
/// evenly over the ones that remain.
inline DensityMatrix project_to_physical(const ComplexMatrix& h, std::vector<std::size_t> dims = {}) {
    const auto eig = herm_eig(h);
    const std::size_t n = eig.eigenvalues.size();
    double tr = 0.0;
    for (double x : eig.eigenvalues) tr += x;
    if (std::abs(tr - 1.0) > 0.1) {
        throw ValidationError("project_to_physical: trace " + std::to_string(tr) + " is too far from 1");
    }
    std::vector<double> mu = eig.eigenvalues;
    for (double& x : mu) x += (1.0 - tr) / static_cast<double>(n);

    std::vector<double> lam(n, 0.0);
    double acc = 0.0;
    std::size_t keep = n;
    while (keep > 0 && mu[keep - 1] + acc / static_cast<double>(keep) < 0.0) {
        acc += mu[keep - 1];
        --keep;
    }
    for (std::size_t j = 0; j < keep; ++j) lam[j] = mu[j] + acc / static_cast<double>(keep);

    bool unchanged = true;
    for (std::size_t j = 0; j < n; ++j) unchanged = unchanged && lam[j] == eig.eigenvalues[j];
    if (unchanged && h.hermiticity_defect() == 0.0) return DensityMatrix(h, std::move(dims));

    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (lam[k] == 0.0) continue;
        out += ComplexMatrix::projector(eig.eigenvector(k)) * complex{lam[k], 0.0};
    }
    return DensityMatrix(std::move(out), std::move(dims));
}

inline OutcomeTable frequencies(const TomographyRecord& record) {
    if (record.shots_per_setting == 0) throw ValidationError("tomography record: shots must be positive");
    if (record.counts.size() != record.settings.size()) {
        throw ValidationError("tomography record: one count row per setting expected");
    }
    OutcomeTable f;
    for (std::size_t s = 0; s < record.counts.size(); ++s) {
        std::uint64_t total = 0;
        std::vector<double> row;
        for (auto c : record.counts[s]) {
            total += c;
            row.push_back(static_cast<double>(c) / static_cast<double>(record.shots_per_setting));
        }
        if (total != record.shots_per_setting) {
            throw ValidationError("tomography record: counts of '" + record.settings[s].label +
                                  "' do not sum to the shot budget");
        }
        f.push_back(std::move(row));
    }
    return f;
}

/// Linear inversion plus physical projection, without error bars.
inline DensityMatrix point_estimate(const TomographyRecord& record) {
    const auto f = frequencies(record);
    return project_to_physical(linear_inversion(record.settings, f), detail::qubit_dims(record.settings.front().dim()));
}

/// Noiseless reconstruction from exact outcome probabilities.
inline ReconstructedState reconstruct_exact(std::span<const MeasurementSetting> settings, const OutcomeTable& probs) {
    const std::size_t dim = settings.empty() ? 0 : settings.front().dim();
    DensityMatrix est = project_to_physical(linear_inversion(settings, probs), detail::qubit_dims(dim));
    return ReconstructedState{std::move(est), std::vector<double>(dim * dim, 0.0), 0};
}

/// Point estimate plus per-entry bootstrap standard errors. Replicate b is
/// simulated from the estimate with seed derive_seed(bootstrap_seed, b).
inline ReconstructedState reconstruct(const TomographyRecord& record,
                                      std::size_t bootstrap_samples = kDefaultBootstrapSamples,
                                      std::uint64_t bootstrap_seed = 0) {
    if (bootstrap_samples < 2) throw ValidationError("reconstruct: need at least two bootstrap samples");
    DensityMatrix est = point_estimate(record);
    const std::size_t n = est.dim() * est.dim();
    std::vector<double> sum_re(n, 0.0), sum_im(n, 0.0), sq_re(n, 0.0), sq_im(n, 0.0);
    for (std::size_t b = 0; b < bootstrap_samples; ++b) {
        const auto rep = simulate_counts(est, record.settings, record.shots_per_setting,
                                         derive_seed(bootstrap_seed, b));
        const auto rep_est = point_estimate(rep);
        const auto entries = rep_est.matrix().entries();
        for (std::size_t i = 0; i < n; ++i) {
            sum_re[i] += entries[i].real();
            sum_im[i] += entries[i].imag();
            sq_re[i] += entries[i].real() * entries[i].real();
            sq_im[i] += entries[i].imag() * entries[i].imag();
        }
    }
    const double bs = static_cast<double>(bootstrap_samples);
    std::vector<double> err(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double var_re = (sq_re[i] - sum_re[i] * sum_re[i] / bs) / (bs - 1.0);
        const double var_im = (sq_im[i] - sum_im[i] * sum_im[i] / bs) / (bs - 1.0);
        err[i] = std::sqrt(std::max(0.0, var_re) + std::max(0.0, var_im));
    }
    return ReconstructedState{std::move(est), std::move(err), bootstrap_samples};
}

} // namespace qdw
