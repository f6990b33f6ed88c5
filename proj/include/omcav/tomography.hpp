// tomography.hpp — Homodyne quadrature distributions computed directly from
// states or density matrices, tomographic entropy, quadrature moments, and the
// two squeezing detectors.
//
// Conventions: X_theta = (a e^{-i theta} + a+ e^{i theta})/sqrt(2), so the
// vacuum quadrature variance is 1/2 and <n|X,theta> = psi_n(X) e^{i n theta}
// with psi_n the normalized Hermite functions.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "omcav/model.hpp"
#include "omcav/numeric.hpp"
#include "omcav/observables.hpp"

namespace omcav {

// psi_0..psi_{n_max} at x. The recurrence runs on mantissas with the Gaussian
// exponent tracked separately, so extreme x neither underflows the seed nor
// overflows the climb back into the classical region.
inline Eigen::VectorXd hermite_functions(int n_max, double x) {
    Eigen::VectorXd out(n_max + 1);
    double scale_log = -0.5 * x * x;
    double m0 = std::pow(std::numbers::pi, -0.25);
    out[0] = m0 * std::exp(scale_log);
    if (n_max == 0) return out;
    double m1 = std::sqrt(2.0) * x * m0;
    out[1] = m1 * std::exp(scale_log);
    for (int n = 1; n < n_max; ++n) {
        const double m2 =
            x * std::sqrt(2.0 / (n + 1.0)) * m1 - std::sqrt(n / (n + 1.0)) * m0;
        m0 = m1;
        m1 = m2;
        if (std::abs(m1) > 1e250) {
            m0 *= 1e-250;
            m1 *= 1e-250;
            scale_log += 250.0 * std::numbers::ln10;
        }
        out[n + 1] = m1 * std::exp(scale_log);
    }
    return out;
}

inline double hermite_function(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite_function: n must be >= 0");
    return hermite_functions(n, x)[n];
}

// ------------------------------ tomogram values -----------------------------

// w(X, theta) for a pure field state with Fock amplitudes c.
inline double pure_state_tomogram(const Eigen::VectorXcd& c, double X, double theta) {
    if (std::abs(c.squaredNorm() - 1.0) > 1e-10)
        throw std::invalid_argument("pure_state_tomogram: amplitudes not normalized");
    const Eigen::VectorXd psi = hermite_functions(static_cast<int>(c.size()) - 1, X);
    cdouble acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < c.size(); ++n)
        acc += c[n] * std::polar(psi[n], -theta * static_cast<double>(n));
    return std::norm(acc);
}

// w(X, theta) = <X,theta| rho |X,theta> for a general field density matrix.
inline double mixed_state_tomogram(const DensityMatrix& rho_f, double X, double theta) {
    const auto dim = rho_f.dim();
    const Eigen::VectorXd psi = hermite_functions(static_cast<int>(dim) - 1, X);
    Eigen::VectorXcd g(dim);
    for (Eigen::Index n = 0; n < dim; ++n)
        g[n] = std::polar(psi[n], theta * static_cast<double>(n));
    const cdouble val = (g.adjoint() * rho_f.entries * g)(0);
    if (std::abs(val.imag()) > 1e-6 || val.real() < -1e-6)
        throw numerical_error("mixed_state_tomogram: density matrix is not a valid state");
    return std::max(val.real(), 0.0);
}

// Fast path for the evolved tripartite state (rank-3 field mixture).
inline double state_tomogram(const TripartiteState& s, double X, double theta) {
    const FieldChannels ch = field_channels(s);
    const Eigen::VectorXd psi = hermite_functions(s.n_max(), X);
    cdouble ae{0.0, 0.0}, ag{0.0, 0.0}, am{0.0, 0.0};
    for (Eigen::Index n = 0; n < psi.size(); ++n) {
        const cdouble ph = std::polar(psi[n], -theta * static_cast<double>(n));
        ae += ch.e0[n] * ph;
        ag += ch.g0[n] * ph;
        am += ch.e1[n] * ph;
    }
    return std::norm(ae) + std::norm(ag) + std::norm(am);
}

// ------------------------------- sampled grids ------------------------------

struct Tomogram {
    Eigen::VectorXd theta_axis;  // [0, pi); the other half follows by reflection
    Eigen::VectorXd x_axis;
    Eigen::MatrixXd values;      // rows: theta, cols: X
    double source_tau = 0.0;
};

inline Eigen::VectorXd default_tomogram_theta_axis(int points = 181) {
    Eigen::VectorXd th(points);
    for (int j = 0; j < points; ++j) th[j] = std::numbers::pi * j / points;
    return th;
}

inline Eigen::VectorXd default_tomogram_x_axis(double alpha_abs, int points = 2001) {
    const double r = std::numbers::sqrt2 * alpha_abs + 6.0;
    return linspace(-r, r, points);
}

inline Tomogram compute_tomogram(const TripartiteState& s, const Eigen::VectorXd& theta_axis,
                                 const Eigen::VectorXd& x_axis) {
    const FieldChannels ch = field_channels(s);
    const int nm = s.n_max();
    Eigen::MatrixXd psi(x_axis.size(), nm + 1);
    for (Eigen::Index i = 0; i < x_axis.size(); ++i)
        psi.row(i) = hermite_functions(nm, x_axis[i]).transpose();

    Tomogram t;
    t.theta_axis = theta_axis;
    t.x_axis = x_axis;
    t.source_tau = s.tau;
    t.values.resize(theta_axis.size(), x_axis.size());
    Eigen::VectorXcd ue(nm + 1), ug(nm + 1), um(nm + 1);
    for (Eigen::Index j = 0; j < theta_axis.size(); ++j) {
        for (int n = 0; n <= nm; ++n) {
            const cdouble ph = std::polar(1.0, -theta_axis[j] * n);
            ue[n] = ch.e0[n] * ph;
            ug[n] = ch.g0[n] * ph;
            um[n] = ch.e1[n] * ph;
        }
        t.values.row(j) = ((psi * ue).cwiseAbs2() + (psi * ug).cwiseAbs2() +
                           (psi * um).cwiseAbs2())
                              .transpose();
    }
    return t;
}

// --------------------------- entropy and moments ----------------------------

// S(theta) = -Int w ln w dX by composite Simpson. The slice must be normalized.
inline double tomographic_entropy(const Eigen::VectorXd& slice, const Eigen::VectorXd& x_axis) {
    if (slice.size() != x_axis.size() || slice.size() < 3)
        throw std::invalid_argument("tomographic_entropy: slice and axis sizes mismatch");
    const double h = x_axis[1] - x_axis[0];
    if (std::abs(simpson_uniform(slice, h) - 1.0) > 1e-6)
        throw std::invalid_argument("tomographic_entropy: slice is not normalized");
    Eigen::VectorXd integrand(slice.size());
    for (Eigen::Index i = 0; i < slice.size(); ++i)
        integrand[i] = (slice[i] > 1e-300) ? -slice[i] * std::log(slice[i]) : 0.0;
    return simpson_uniform(integrand, h);
}

inline double quadrature_moment(const Eigen::VectorXd& slice, const Eigen::VectorXd& x_axis,
                                int k) {
    if (k < 1) throw std::invalid_argument("quadrature_moment: k must be >= 1");
    const double h = x_axis[1] - x_axis[0];
    Eigen::VectorXd integrand(slice.size());
    for (Eigen::Index i = 0; i < slice.size(); ++i)
        integrand[i] = std::pow(x_axis[i], k) * slice[i];
    return simpson_uniform(integrand, h);
}

inline double quadrature_variance(const Eigen::VectorXd& slice, const Eigen::VectorXd& x_axis) {
    const double m1 = quadrature_moment(slice, x_axis, 1);
    return quadrature_moment(slice, x_axis, 2) - m1 * m1;
}

inline double eur_reference() { return std::log(std::numbers::pi) + 1.0; }  // ln(pi e)

// S(theta) + S(theta + pi/2) - ln(pi e); nonnegative for any valid state.
inline double eur_margin(double s_theta, double s_theta_perp) {
    return s_theta + s_theta_perp - eur_reference();
}

struct SqueezingFlags {
    bool entropic = false;
    bool quadrature = false;
};

// Strict-threshold detectors: entropy below (1/2) ln(pi e), variance below the
// vacuum value 1/2. No tolerance band.
inline SqueezingFlags squeezing_flags(double s_theta, double variance) {
    return {s_theta < 0.5 * eur_reference(), variance < 0.5};
}

} // namespace omcav
