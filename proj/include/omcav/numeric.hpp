// numeric.hpp — Small shared numerics: grids, composite quadrature, float formatting.

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omcav/errors.hpp"

namespace omcav {

inline Eigen::VectorXd linspace(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
    Eigen::VectorXd x(n);
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) x[i] = a + h * i;
    x[n - 1] = b;
    return x;
}

// Composite Simpson on a uniform grid. Falls back to a trapezoid on the last
// interval when the point count is even.
inline double simpson_uniform(const Eigen::VectorXd& y, double h) {
    const auto n = y.size();
    if (n < 3) throw std::invalid_argument("simpson_uniform: need at least 3 points");
    const auto m = (n % 2 == 1) ? n : n - 1;
    double s = y[0] + y[m - 1];
    for (Eigen::Index i = 1; i < m - 1; i += 2) s += 4.0 * y[i];
    for (Eigen::Index i = 2; i < m - 1; i += 2) s += 2.0 * y[i];
    s *= h / 3.0;
    if (m != n) s += 0.5 * h * (y[n - 2] + y[n - 1]);
    return s;
}

inline double trapezoid_uniform(const Eigen::VectorXd& y, double h) {
    const auto n = y.size();
    if (n < 2) throw std::invalid_argument("trapezoid_uniform: need at least 2 points");
    double s = 0.5 * (y[0] + y[n - 1]);
    for (Eigen::Index i = 1; i < n - 1; ++i) s += y[i];
    return s * h;
}

namespace detail {

template <typename F>
std::complex<double> adaptive_simpson_rec(const F& f, double a, double b,
                                          std::complex<double> fa, std::complex<double> fm,
                                          std::complex<double> fb, std::complex<double> whole,
                                          double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const std::complex<double> flm = f(lm), frm = f(rm);
    const std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const std::complex<double> delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw numerical_error("adaptive_simpson: no convergence at requested tolerance");
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature for complex-valued integrands.
template <typename F>
std::complex<double> adaptive_simpson(const F& f, double a, double b, double tol,
                                      int max_depth = 40) {
    const std::complex<double> fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Round-trip decimal formatting (17 significant digits).
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace omcav
