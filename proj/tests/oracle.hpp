// Brute-force reference for the witness values. Every operator is written out
// as an explicit 4x4 matrix and spectra come from Eigen's self-adjoint solver,
// so nothing here shares code with the library's own linear algebra.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace oracle {

using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;
using cd = std::complex<double>;

inline M2 ket_projector(double theta) {
    Eigen::Vector2cd v(std::cos(theta), std::sin(theta));
    return v * v.adjoint();
}

inline M4 qc(double lambda, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    M4 m = M4::Zero();
    m(0, 0) = lambda;                    // |H,0><H,0|
    m(1, 1) = (1.0 - lambda) * c * c;    // |H,1><H,1|
    m(1, 3) = m(3, 1) = (1.0 - lambda) * c * s;
    m(3, 3) = (1.0 - lambda) * s * s;    // |V,1><V,1|
    return m;
}

inline M4 cc(double lambda) {
    M4 m = M4::Zero();
    m(0, 0) = lambda;
    m(3, 3) = 1.0 - lambda;
    return m;
}

inline M4 f(double lambda) {
    M4 m = M4::Zero();
    m(0, 0) = m(1, 1) = lambda / 2.0;
    m(2, 2) = m(3, 3) = (1.0 - lambda) / 2.0;
    return m;
}

// Sum over the environment index of the 4x4 matrix (rows s*2+e).
inline M2 trace_env(const M4& m) {
    M2 out = M2::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
    return out;
}

template <typename Mat>
double half_trace_norm(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline M4 lift(const M2& a) {
    M4 m = M4::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            m(2 * i, 2 * j) = a(i, j);
            m(2 * i + 1, 2 * j + 1) = a(i, j);
        }
    return m;
}

inline M2 leading_projector(const M2& rho_s) {
    Eigen::SelfAdjointEigenSolver<M2> es(rho_s);
    Eigen::Vector2cd v = es.eigenvectors().col(1);  // ascending order in Eigen
    return v * v.adjoint();
}

inline M4 dephase(const M4& rho) {
    const M4 p = lift(leading_projector(trace_env(rho)));
    const M4 q = M4::Identity() - p;
    return p * rho * p + q * rho * q;
}

inline M4 phase_gate(double phi) {
    M4 u = M4::Identity();
    u(1, 1) = std::polar(1.0, phi);
    return u;
}

inline M2 hwp(double alpha) {
    M2 v;
    v << std::cos(2 * alpha), std::sin(2 * alpha), std::sin(2 * alpha), -std::cos(2 * alpha);
    return v;
}

inline double discord(const M4& rho) { return half_trace_norm<M4>(dephase(rho) - rho); }

inline double local_witness(const M4& rho, double phi) {
    const M4 u = phase_gate(phi);
    return half_trace_norm<M2>(trace_env(u * (dephase(rho) - rho) * u.adjoint()));
}

inline double growth(const M4& rho, const M2& v, double phi) {
    const M4 u = phase_gate(phi);
    const M4 vl = lift(v);
    const M4 rot = vl * rho * vl.adjoint();
    return half_trace_norm<M2>(trace_env(u * rot * u.adjoint()) - trace_env(u * rho * u.adjoint())) -
           half_trace_norm<M2>(trace_env(rot) - trace_env(rho));
}

} // namespace oracle
