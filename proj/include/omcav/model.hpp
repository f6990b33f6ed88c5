// model.hpp — System parameters, intensity-dependent coupling families, initial
// field states, Fock truncation policy, and the tripartite wavefunction.
//
// The joint state lives in the span of the families |n;0;e>, |n;0;g> and
// |n-1;1;e> (field photon number; mirror phonon 0/1; atom e/g). It is stored
// as initial field weights l_n together with per-n amplitude triples
// (A_n, B_n, C_n), with C_0 identically zero.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omcav/errors.hpp"

namespace omcav {

using cdouble = std::complex<double>;

// ------------------------------ coupling f(N) -------------------------------

enum class CouplingForm { constant, sqrt_n, inv_sqrt_n, kappa_deformed };

struct CouplingKind {
    CouplingForm form = CouplingForm::constant;
    double kappa = 0.0;   // only meaningful for kappa_deformed, in [0, 1]

    static CouplingKind constant() { return {CouplingForm::constant, 0.0}; }
    static CouplingKind sqrt_n() { return {CouplingForm::sqrt_n, 0.0}; }
    static CouplingKind inv_sqrt_n() { return {CouplingForm::inv_sqrt_n, 0.0}; }
    static CouplingKind kappa_deformed(double k) { return {CouplingForm::kappa_deformed, k}; }
};

// f(n) for n >= 1 (n = 0 allowed except for the inverse-square-root family).
inline double eval_coupling(const CouplingKind& kind, long n) {
    switch (kind.form) {
        case CouplingForm::constant: return 1.0;
        case CouplingForm::sqrt_n: return std::sqrt(static_cast<double>(n));
        case CouplingForm::inv_sqrt_n:
            if (n == 0) throw std::domain_error("eval_coupling: f(0) undefined for inv_sqrt_n; use coupling_sn");
            return 1.0 / std::sqrt(static_cast<double>(n));
        case CouplingForm::kappa_deformed: return std::sqrt(1.0 + kind.kappa * static_cast<double>(n));
    }
    throw std::logic_error("eval_coupling: unknown coupling form");
}

// s(n) = sqrt(n) f(n), the combination entering every exchange matrix element.
// Finite for all families; zero at n = 0 since the lowering operator kills |0>.
inline double coupling_sn(const CouplingKind& kind, long n) {
    if (n == 0) return 0.0;
    if (kind.form == CouplingForm::inv_sqrt_n) return 1.0;
    return std::sqrt(static_cast<double>(n)) * eval_coupling(kind, n);
}

// n f(n)^2 with the operator-ordering convention that the product vanishes on
// the vacuum. Used by the unapproximated effective Hamiltonian.
inline double coupling_nf2(const CouplingKind& kind, long n) {
    if (n == 0) return 0.0;
    if (kind.form == CouplingForm::inv_sqrt_n) return 1.0;
    const double f = eval_coupling(kind, n);
    return static_cast<double>(n) * f * f;
}

// --------------------------------- parameters -------------------------------

enum class EffOrder { first_order, full };

struct SystemParams {
    double omega_m_hz = 1e9;   // mirror frequency
    double g_hz = 1e6;         // optomechanical coupling G
    double omega_hz = 1e6;     // field-atom coupling Omega
    CouplingKind coupling{};
    double phi = 0.5 * std::numbers::pi;  // atom superposition angle, cos(phi) on |e>
    EffOrder eff_order = EffOrder::first_order;

    // Dimensionless time: tau = t / t_unit.
    double t_unit_s() const {
        if (g_hz <= 0.0)
            throw std::domain_error("SystemParams: tau-based interfaces require G > 0");
        return omega_m_hz / (g_hz * g_hz);
    }

    // Throws on hard violations; returns non-fatal warnings.
    std::vector<std::string> validate() const {
        if (!(omega_m_hz > 0.0)) throw std::invalid_argument("SystemParams: omega_m must be > 0");
        if (g_hz < 0.0) throw std::invalid_argument("SystemParams: G must be >= 0");
        if (omega_hz < 0.0) throw std::invalid_argument("SystemParams: Omega must be >= 0");
        if (coupling.form == CouplingForm::kappa_deformed &&
            (coupling.kappa < 0.0 || coupling.kappa > 1.0))
            throw std::invalid_argument("SystemParams: kappa must lie in [0, 1]");
        std::vector<std::string> warnings;
        const double strong = 10.0 * std::max(g_hz, omega_hz);
        if (omega_m_hz < strong)
            warnings.push_back("omega_m < 10*max(G, Omega): outside the validity regime of the "
                               "effective Hamiltonian");
        return warnings;
    }
};

// ------------------------------- initial field ------------------------------

enum class FieldKind { coherent, photon_added, custom };

struct FieldInitialState {
    FieldKind kind = FieldKind::coherent;
    cdouble alpha{0.0, 0.0};
    int added_photons = 0;                 // m for photon_added
    std::vector<cdouble> amplitudes{};     // custom only

    static FieldInitialState coherent(cdouble a) { return {FieldKind::coherent, a, 0, {}}; }
    static FieldInitialState photon_added(cdouble a, int m) {
        if (m < 0) throw std::invalid_argument("FieldInitialState: m must be >= 0");
        return {FieldKind::photon_added, a, m, {}};
    }
    static FieldInitialState custom(std::vector<cdouble> amps) {
        return {FieldKind::custom, {0.0, 0.0}, 0, std::move(amps)};
    }
};

// Smallest truncation order whose Poisson tail mass falls below epsilon_trunc,
// plus the photon-adding shift and a fixed safety margin of 10. Never below 16.
inline int choose_truncation(double alpha_abs, int m_added, double epsilon_trunc) {
    if (!(epsilon_trunc > 0.0 && epsilon_trunc < 1.0))
        throw std::invalid_argument("choose_truncation: epsilon_trunc must lie in (0, 1)");
    if (m_added < 0) throw std::invalid_argument("choose_truncation: m_added must be >= 0");
    const double lam = alpha_abs * alpha_abs;
    int n_tail = 0;
    if (lam > 0.0) {
        double cum = 0.0;
        int n = 0;
        while (1.0 - cum >= epsilon_trunc) {
            cum += std::exp(-lam + n * std::log(lam) - std::lgamma(n + 1.0));
            n_tail = n;
            ++n;
            if (n > 2'000'000) throw std::invalid_argument("choose_truncation: alpha too large");
        }
    }
    return std::max(16, n_tail + m_added + 10);
}

namespace detail {

// Truncated coherent expansion, built in the log domain so any |alpha| is safe.
inline Eigen::VectorXcd coherent_vector(cdouble alpha, int n_max) {
    Eigen::VectorXcd l = Eigen::VectorXcd::Zero(n_max + 1);
    const double a = std::abs(alpha);
    if (a == 0.0) {
        l[0] = 1.0;
        return l;
    }
    const double th = std::arg(alpha);
    for (int n = 0; n <= n_max; ++n) {
        const double mag = std::exp(-0.5 * a * a + n * std::log(a) - 0.5 * std::lgamma(n + 1.0));
        l[n] = std::polar(mag, n * th);
    }
    return l;
}

} // namespace detail

// Normalized field weights l_0..l_{n_max}. Photon-added states are produced by
// applying the raising operator to the truncated coherent vector and
// renormalizing; the analytic normalization constant is only used as a test
// oracle elsewhere.
inline Eigen::VectorXcd build_initial_weights(const FieldInitialState& init, int n_max,
                                              double epsilon_trunc = 1e-12) {
    if (n_max < 0) throw std::invalid_argument("build_initial_weights: n_max must be >= 0");
    Eigen::VectorXcd l;
    switch (init.kind) {
        case FieldKind::coherent:
        case FieldKind::photon_added: {
            const int m = (init.kind == FieldKind::photon_added) ? init.added_photons : 0;
            l = detail::coherent_vector(init.alpha, n_max);
            // Tail mass that truncation discards, accounting for the ladder shift.
            double head = 0.0;
            for (int n = 0; n <= n_max - m; ++n) head += std::norm(l[n]);
            if (1.0 - head > epsilon_trunc)
                throw std::invalid_argument(
                    "build_initial_weights: truncated tail mass exceeds epsilon_trunc; "
                    "increase n_max (see choose_truncation)");
            for (int j = 0; j < m; ++j) {
                for (int n = n_max; n >= 1; --n) l[n] = std::sqrt(static_cast<double>(n)) * l[n - 1];
                l[0] = 0.0;
            }
            break;
        }
        case FieldKind::custom: {
            const auto& amps = init.amplitudes;
            double total = 0.0, head = 0.0;
            for (std::size_t n = 0; n < amps.size(); ++n) {
                total += std::norm(amps[n]);
                if (n <= static_cast<std::size_t>(n_max)) head += std::norm(amps[n]);
            }
            if (total <= 0.0)
                throw std::invalid_argument("build_initial_weights: custom amplitudes have zero norm");
            if ((total - head) / total > epsilon_trunc)
                throw std::invalid_argument(
                    "build_initial_weights: custom amplitudes carry more than epsilon_trunc mass "
                    "beyond n_max; increase n_max");
            l = Eigen::VectorXcd::Zero(n_max + 1);
            for (std::size_t n = 0; n < amps.size() && n <= static_cast<std::size_t>(n_max); ++n)
                l[n] = amps[n];
            break;
        }
    }
    const double nrm = l.norm();
    if (nrm <= 0.0) throw std::invalid_argument("build_initial_weights: zero norm after truncation");
    return l / nrm;
}

// ------------------------------ tripartite state ----------------------------

struct TripartiteState {
    Eigen::VectorXcd l;   // initial field weights, length n_max + 1
    Eigen::VectorXcd a;   // amplitudes on |n;0;e>
    Eigen::VectorXcd b;   // amplitudes on |n;0;g>
    Eigen::VectorXcd c;   // amplitudes on |n-1;1;e>; c[0] stays 0
    double tau = 0.0;

    int n_max() const { return static_cast<int>(l.size()) - 1; }

    double norm() const {
        double s = 0.0;
        for (Eigen::Index n = 0; n < l.size(); ++n)
            s += std::norm(l[n]) * (std::norm(a[n]) + std::norm(b[n]) + std::norm(c[n]));
        return std::sqrt(s);
    }
};

inline TripartiteState initial_state(const Eigen::VectorXcd& weights, double phi) {
    TripartiteState s;
    s.l = weights;
    s.a = Eigen::VectorXcd::Constant(weights.size(), std::cos(phi));
    s.b = Eigen::VectorXcd::Constant(weights.size(), std::sin(phi));
    s.c = Eigen::VectorXcd::Zero(weights.size());
    s.tau = 0.0;
    return s;
}

// Field amplitude vectors conditioned on the mirror-atom channel. The reduced
// field state is the rank-3 mixture e0 e0+ + g0 g0+ + e1 e1+.
struct FieldChannels {
    Eigen::VectorXcd e0;  // atom e, mirror 0: l_n A_n
    Eigen::VectorXcd g0;  // atom g, mirror 0: l_n B_n
    Eigen::VectorXcd e1;  // atom e, mirror 1: l_{n+1} C_{n+1} on field index n
};

inline FieldChannels field_channels(const TripartiteState& s) {
    const auto n = s.l.size();
    FieldChannels ch;
    ch.e0 = s.l.cwiseProduct(s.a);
    ch.g0 = s.l.cwiseProduct(s.b);
    ch.e1 = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) ch.e1[k] = s.l[k + 1] * s.c[k + 1];
    return ch;
}

// ------------------------------- density matrix -----------------------------

struct DensityMatrix {
    Eigen::MatrixXcd entries;

    Eigen::Index dim() const { return entries.rows(); }
};

// Hermiticity / trace / positivity checks at the library-wide tolerances.
inline void validate_density(const DensityMatrix& rho, double herm_tol = 1e-12,
                             double trace_tol = 1e-10, double eig_tol = 1e-10) {
    const auto& m = rho.entries;
    if (m.rows() != m.cols()) throw numerical_error("validate_density: matrix not square");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        throw numerical_error("validate_density: not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > trace_tol || std::abs(m.trace().imag()) > trace_tol)
        throw numerical_error("validate_density: trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -eig_tol)
        throw numerical_error("validate_density: negative eigenvalue");
}

} // namespace omcav
