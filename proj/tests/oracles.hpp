// oracles.hpp — Test-only reference implementations kept independent of the
// library code paths they check: explicit tensor-product assembly, brute-force
// partial traces, matrix-exponential displacement operators, and a dense
// tensor-space build of the effective Hamiltonian.

#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "omcav/evolution.hpp"
#include "omcav/model.hpp"

namespace oracles {

using omcav::cdouble;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Basis layout: index = (field * MIRROR_DIM + mirror) * 2 + atom, atom 0 = e.
inline constexpr int MIRROR_DIM = 3;  // one level above anything the dynamics may reach

inline Eigen::Index tensor_index(int field, int mirror, int atom) {
    return (static_cast<Eigen::Index>(field) * MIRROR_DIM + mirror) * 2 + atom;
}

// The full tripartite wavefunction as a dense vector.
inline VectorXcd tensor_state(const omcav::TripartiteState& s) {
    const int nf = s.n_max() + 1;
    VectorXcd psi = VectorXcd::Zero(static_cast<Eigen::Index>(nf) * MIRROR_DIM * 2);
    for (int n = 0; n < nf; ++n) {
        psi[tensor_index(n, 0, 0)] += s.l[n] * s.a[n];
        psi[tensor_index(n, 0, 1)] += s.l[n] * s.b[n];
        if (n >= 1) psi[tensor_index(n - 1, 1, 0)] += s.l[n] * s.c[n];
    }
    return psi;
}

inline MatrixXcd rho_atom_bruteforce(const VectorXcd& psi, int nf) {
    MatrixXcd rho = MatrixXcd::Zero(2, 2);
    for (int n = 0; n < nf; ++n)
        for (int m = 0; m < MIRROR_DIM; ++m)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    rho(a, b) += psi[tensor_index(n, m, a)] * std::conj(psi[tensor_index(n, m, b)]);
    return rho;
}

inline MatrixXcd rho_mirror_bruteforce(const VectorXcd& psi, int nf) {
    MatrixXcd rho = MatrixXcd::Zero(MIRROR_DIM, MIRROR_DIM);
    for (int n = 0; n < nf; ++n)
        for (int a = 0; a < 2; ++a)
            for (int m1 = 0; m1 < MIRROR_DIM; ++m1)
                for (int m2 = 0; m2 < MIRROR_DIM; ++m2)
                    rho(m1, m2) +=
                        psi[tensor_index(n, m1, a)] * std::conj(psi[tensor_index(n, m2, a)]);
    return rho;
}

inline MatrixXcd rho_field_bruteforce(const VectorXcd& psi, int nf) {
    MatrixXcd rho = MatrixXcd::Zero(nf, nf);
    for (int m = 0; m < MIRROR_DIM; ++m)
        for (int a = 0; a < 2; ++a)
            for (int n1 = 0; n1 < nf; ++n1)
                for (int n2 = 0; n2 < nf; ++n2)
                    rho(n1, n2) +=
                        psi[tensor_index(n1, m, a)] * std::conj(psi[tensor_index(n2, m, a)]);
    return rho;
}

// Joint mirror-atom reduced state (6x6), for the pure-state Schmidt check.
inline MatrixXcd rho_mirror_atom_bruteforce(const VectorXcd& psi, int nf) {
    MatrixXcd rho = MatrixXcd::Zero(MIRROR_DIM * 2, MIRROR_DIM * 2);
    for (int n = 0; n < nf; ++n)
        for (int m1 = 0; m1 < MIRROR_DIM; ++m1)
            for (int a1 = 0; a1 < 2; ++a1)
                for (int m2 = 0; m2 < MIRROR_DIM; ++m2)
                    for (int a2 = 0; a2 < 2; ++a2)
                        rho(m1 * 2 + a1, m2 * 2 + a2) += psi[tensor_index(n, m1, a1)] *
                                                         std::conj(psi[tensor_index(n, m2, a2)]);
    return rho;
}

// exp(alpha a+ - alpha* a) on a dim-dimensional truncation, via the
// eigendecomposition of the Hermitian generator.
inline MatrixXcd displacement_expm(cdouble alpha, int dim) {
    MatrixXcd k = MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        k(n + 1, n) = alpha * std::sqrt(n + 1.0);
        k(n, n + 1) = -std::conj(alpha) * std::sqrt(n + 1.0);
    }
    const MatrixXcd h = cdouble(0.0, 1.0) * k;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    MatrixXcd phases = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) phases(i, i) = std::polar(1.0, -es.eigenvalues()[i]);
    return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

// ---------------- dense tensor-space effective Hamiltonian ------------------

struct TensorOps {
    MatrixXcd exchange;   // f(N) a+ b sigma- + a f(N) b+ sigma+
    MatrixXcd stark;      // the Omega^2 bracket (order-dependent)
    MatrixXcd kerr;       // (a+ a)^2
};

// Operator strings applied entry-by-entry in the product basis; matrix
// elements come straight from ladder actions rather than from the block
// builder, so this is an independent route.
inline TensorOps tensor_heff_ops(const omcav::SystemParams& p, int field_dim) {
    const Eigen::Index dim = static_cast<Eigen::Index>(field_dim) * MIRROR_DIM * 2;
    TensorOps ops{MatrixXcd::Zero(dim, dim), MatrixXcd::Zero(dim, dim),
                  MatrixXcd::Zero(dim, dim)};
    for (int n = 0; n < field_dim; ++n) {
        for (int m = 0; m < MIRROR_DIM; ++m) {
            // f(N) a+ b sigma-  : |n;m;e> -> sqrt(n+1) f(n+1) sqrt(m) |n+1;m-1;g>
            if (n + 1 < field_dim && m >= 1)
                ops.exchange(tensor_index(n + 1, m - 1, 1), tensor_index(n, m, 0)) +=
                    omcav::coupling_sn(p.coupling, n + 1) * std::sqrt(static_cast<double>(m));
            // a f(N) b+ sigma+ : |n;m;g> -> sqrt(n) f(n) sqrt(m+1) |n-1;m+1;e>
            if (n >= 1 && m + 1 < MIRROR_DIM)
                ops.exchange(tensor_index(n - 1, m + 1, 0), tensor_index(n, m, 1)) +=
                    omcav::coupling_sn(p.coupling, n) * std::sqrt(m + 1.0);
            for (int a = 0; a < 2; ++a) {
                const double sz = (a == 0) ? 1.0 : -1.0;
                const double pe = (a == 0) ? 1.0 : 0.0;
                const auto i = tensor_index(n, m, a);
                if (p.eff_order == omcav::EffOrder::first_order) {
                    ops.stark(i, i) += n * sz - pe;
                } else {
                    const double nf2 = omcav::coupling_nf2(p.coupling, n);
                    const double up = omcav::coupling_nf2(p.coupling, n + 1);
                    ops.stark(i, i) += nf2 * sz + (up - nf2) * pe;
                }
                ops.kerr(i, i) += static_cast<double>(n) * n;
            }
        }
    }
    return ops;
}

inline MatrixXcd tensor_heff(const omcav::SystemParams& p, int field_dim) {
    const TensorOps ops = tensor_heff_ops(p, field_dim);
    return p.g_hz * p.omega_hz / p.omega_m_hz * ops.exchange -
           p.omega_hz * p.omega_hz / p.omega_m_hz * ops.stark -
           p.g_hz * p.g_hz / p.omega_m_hz * ops.kerr;
}

// Random normalized amplitude vector.
inline VectorXcd random_amplitudes(int size, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    VectorXcd v(size);
    for (int i = 0; i < size; ++i) v[i] = cdouble(g(rng), g(rng));
    return v / v.norm();
}

} // namespace oracles
