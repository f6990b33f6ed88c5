// observables.hpp — Reduced density matrices, von Neumann entropies, and
// photon-counting statistics.

#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "omcav/model.hpp"

namespace omcav {

// Atom reduced state on {|e>, |g>}.
inline DensityMatrix reduced_rho_atom(const TripartiteState& s) {
    double p_ee = 0.0, p_gg = 0.0;
    cdouble coh{0.0, 0.0};
    for (int n = 0; n <= s.n_max(); ++n) {
        const double w = std::norm(s.l[n]);
        p_ee += w * (std::norm(s.a[n]) + std::norm(s.c[n]));
        p_gg += w * std::norm(s.b[n]);
        coh += w * s.a[n] * std::conj(s.b[n]);
    }
    DensityMatrix rho;
    rho.entries.resize(2, 2);
    rho.entries << p_ee, coh, std::conj(coh), p_gg;
    return rho;
}

// Mirror reduced state on {|0>, |1>}.
inline DensityMatrix reduced_rho_mirror(const TripartiteState& s) {
    double p0 = 0.0, p1 = 0.0;
    cdouble coh{0.0, 0.0};
    for (int n = 0; n <= s.n_max(); ++n) {
        const double w = std::norm(s.l[n]);
        p0 += w * (std::norm(s.a[n]) + std::norm(s.b[n]));
        p1 += w * std::norm(s.c[n]);
        if (n + 1 <= s.n_max())
            coh += s.l[n] * std::conj(s.l[n + 1]) * s.a[n] * std::conj(s.c[n + 1]);
    }
    DensityMatrix rho;
    rho.entries.resize(2, 2);
    rho.entries << p0, coh, std::conj(coh), p1;
    return rho;
}

// Field reduced state, a rank <= 3 mixture of the channel vectors.
inline DensityMatrix reduced_rho_field(const TripartiteState& s) {
    const FieldChannels ch = field_channels(s);
    DensityMatrix rho;
    rho.entries = ch.e0 * ch.e0.adjoint() + ch.g0 * ch.g0.adjoint() + ch.e1 * ch.e1.adjoint();
    return rho;
}

enum class EntropyBase { nat, two };

// Von Neumann entropy -Tr[rho ln rho]. Eigenvalues inside [-1e-10, 0) are
// truncation noise and are clipped to zero; anything below -1e-8 is rejected.
inline double svne(const DensityMatrix& rho, EntropyBase base = EntropyBase::nat) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries, Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double p = es.eigenvalues()[i];
        if (p < -1e-8) throw numerical_error("svne: density matrix has a negative eigenvalue");
        p = std::clamp(p, 0.0, 1.0);
        if (p > 0.0) h -= p * std::log(p);
    }
    return base == EntropyBase::two ? h / std::numbers::ln2 : h;
}

struct PhotonStats {
    double mean_n = 0.0;
    double var_n = 0.0;
    double mandel_q = 0.0;  // 0 by convention when mean_n == 0
    double inversion = 0.0;
};

inline PhotonStats photon_stats(const TripartiteState& s) {
    double m1 = 0.0, m2 = 0.0, inv = 0.0;
    for (int n = 0; n <= s.n_max(); ++n) {
        const double w = std::norm(s.l[n]);
        double pn = w * (std::norm(s.a[n]) + std::norm(s.b[n]));
        inv += w * (std::norm(s.a[n]) - std::norm(s.b[n]) + std::norm(s.c[n]));
        if (n + 1 <= s.n_max()) pn += std::norm(s.l[n + 1]) * std::norm(s.c[n + 1]);
        m1 += n * pn;
        m2 += static_cast<double>(n) * n * pn;
    }
    PhotonStats st;
    st.mean_n = m1;
    st.var_n = m2 - m1 * m1;
    st.mandel_q = (m1 > 0.0) ? st.var_n / m1 - 1.0 : 0.0;
    st.inversion = inv;
    return st;
}

} // namespace omcav
