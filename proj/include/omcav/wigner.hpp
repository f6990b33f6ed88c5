// wigner.hpp — Field Wigner function via the displaced-number-state series,
// phase-space grids, the Radon transform used to cross-check tomograms, and a
// direct position-integral oracle.
//
// Convention: W(alpha) with alpha = alpha1 + i alpha2 = (q + i p)/sqrt(2),
// normalized so the plane integral over d(alpha1) d(alpha2) is 1 and
// |W| <= 2/pi everywhere.

#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "omcav/model.hpp"
#include "omcav/numeric.hpp"
#include "omcav/observables.hpp"
#include "omcav/tomography.hpp"

namespace omcav {

namespace detail {

struct SignedLog {
    double sign = 0.0;
    double log_abs = -std::numeric_limits<double>::infinity();
};

// log |L_m^{(a)}(x)| and its sign, by the degree recurrence with rescaling.
// The raw recurrence keeps the dominant solution in front, which is what makes
// it usable far outside the oscillatory region.
inline SignedLog assoc_laguerre_log(int m, int a, double x) {
    if (m == 0) return {1.0, 0.0};
    double scale = 0.0;
    double p0 = 1.0, p1 = 1.0 + a - x;
    for (int j = 1; j < m; ++j) {
        const double p2 = ((2.0 * j + 1.0 + a - x) * p1 - (j + a) * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
        if (std::abs(p1) > 1e250 || std::abs(p0) > 1e250) {
            p0 *= 1e-250;
            p1 *= 1e-250;
            scale += 250.0 * std::numbers::ln10;
        }
    }
    if (p1 == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
    return {p1 > 0.0 ? 1.0 : -1.0, std::log(std::abs(p1)) + scale};
}

} // namespace detail

// <n|D(alpha)|m>, evaluated from the two-branch associated-Laguerre closed form
// with all factorial and power factors accumulated in the log domain.
inline cdouble displaced_number_element(int n, int m, cdouble alpha) {
    if (n < 0 || m < 0) throw std::invalid_argument("displaced_number_element: n, m must be >= 0");
    const double x = std::norm(alpha);
    if (x == 0.0) return (n == m) ? 1.0 : 0.0;
    if (n >= m) {
        const int k = n - m;
        const auto lag = detail::assoc_laguerre_log(m, k, x);
        const double lg = -0.5 * x + 0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) +
                          0.5 * k * std::log(x) + lag.log_abs;
        return lag.sign * std::polar(std::exp(lg), k * std::arg(alpha));
    }
    const int k = m - n;
    const auto lag = detail::assoc_laguerre_log(n, k, x);
    const double lg = -0.5 * x + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) +
                      0.5 * k * std::log(x) + lag.log_abs;
    return lag.sign * std::polar(std::exp(lg), k * std::arg(-std::conj(alpha)));
}

namespace detail {

// Mantissa/exponent pair kept inside a safe range so products never overflow.
struct Scaled {
    double m = 0.0;
    long e = 0;
};

inline void renorm(Scaled& s) {
    if (s.m == 0.0) return;
    int ex = 0;
    s.m = std::frexp(s.m, &ex);
    s.e += ex;
}

// y[n] = <n| D+(alpha) |u> for n = 0..n_rows, i.e. the overlaps of u with the
// displaced number basis. Runs one raw Laguerre recurrence per diagonal
// n - k = const of <n|D(-alpha)|k>, carrying the prefactor multiplicatively;
// every emitted element is assembled with ldexp, so no transcendental calls
// appear in the inner loop.
inline Eigen::VectorXcd displaced_overlaps(const Eigen::VectorXcd& u, cdouble alpha,
                                           int n_rows) {
    const cdouble beta = -alpha;
    const double x = std::norm(beta);
    const int n_cols = static_cast<int>(u.size()) - 1;  // highest occupied Fock index
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_rows + 1);
    if (x == 0.0) {
        for (int n = 0; n <= std::min(n_cols, n_rows); ++n) y[n] = u[n];
        return y;
    }
    const double lx = std::log(x);
    const double arg_up = std::arg(beta);
    const double arg_dn = std::arg(-std::conj(beta));
    const int d_cap = static_cast<int>(2.0 * std::sqrt((n_cols + 1.0) * x)) + 60;

    // family = 0: n = k + d (rows below the diagonal); family = 1: k = j + d.
    for (int family = 0; family < 2; ++family) {
        const int d_lo = (family == 0) ? 0 : 1;
        const int d_hi = (family == 0) ? std::min(n_rows, d_cap) : std::min(n_cols, d_cap);
        for (int d = d_lo; d <= d_hi; ++d) {
            const int len = (family == 0) ? std::min(n_cols, n_rows - d) : std::min(n_cols - d, n_rows);
            if (len < 0) break;
            const cdouble phase = std::polar(1.0, d * ((family == 0) ? arg_up : arg_dn));
            const double lp0 = -0.5 * x + 0.5 * d * lx - 0.5 * std::lgamma(d + 1.0);
            Scaled pref{std::exp(lp0 - std::floor(lp0 / std::numbers::ln2) * std::numbers::ln2),
                        static_cast<long>(std::floor(lp0 / std::numbers::ln2))};
            double l0 = 1.0, l1 = 1.0 + d - x;
            long le = 0;
            auto emit = [&](int j, double lag) {
                const double elem = std::ldexp(pref.m * lag, pref.e + le);
                if (elem == 0.0) return;
                if (family == 0)
                    y[j + d] += elem * phase * u[j];
                else
                    y[j] += elem * phase * u[j + d];
            };
            emit(0, l0);
            if (len >= 1) {
                renorm(pref);
                pref.m *= std::sqrt(1.0 / (1.0 + d));
                emit(1, l1);
                for (int j = 1; j < len; ++j) {
                    const double l2 = ((2.0 * j + 1.0 + d - x) * l1 - (j + d) * l0) / (j + 1.0);
                    l0 = l1;
                    l1 = l2;
                    if (std::abs(l1) > 1e140) {
                        l0 = std::ldexp(l0, -480);
                        l1 = std::ldexp(l1, -480);
                        le += 480;
                    } else if (std::abs(l1) < 1e-140 && std::abs(l0) < 1e-140 && l1 != 0.0) {
                        l0 = std::ldexp(l0, 480);
                        l1 = std::ldexp(l1, 480);
                        le -= 480;
                    }
                    renorm(pref);
                    pref.m *= std::sqrt((j + 1.0) / (j + 1.0 + d));
                    emit(j + 1, l1);
                }
            }
        }
    }
    return y;
}

// Alternating series over the displaced basis with the convergence rule: stop
// once two successive partial sums change by less than 1e-12.
inline double alternating_sum(const Eigen::VectorXd& terms) {
    double s = 0.0;
    double d_prev = std::numeric_limits<double>::infinity();
    for (Eigen::Index n = 0; n < terms.size(); ++n) {
        const double d = (n % 2 == 0) ? terms[n] : -terms[n];
        s += d;
        if (n >= 2 && std::abs(d) < 1e-12 && d_prev < 1e-12) break;
        d_prev = std::abs(d);
    }
    return s;
}

inline double wigner_point(const FieldChannels& ch, cdouble alpha, int cutoff) {
    const Eigen::VectorXcd ye = displaced_overlaps(ch.e0, alpha, cutoff);
    const Eigen::VectorXcd yg = displaced_overlaps(ch.g0, alpha, cutoff);
    const Eigen::VectorXcd ym = displaced_overlaps(ch.e1, alpha, cutoff);
    const Eigen::VectorXd terms =
        ye.cwiseAbs2() + yg.cwiseAbs2() + ym.cwiseAbs2();
    return 2.0 / std::numbers::pi * alternating_sum(terms);
}

} // namespace detail

// W(alpha) of the field reduced state. The rank-3 channel form keeps every
// series term exactly real. cutoff < 0 selects the default cap 4 * n_max.
inline double wigner_at(const TripartiteState& s, cdouble alpha, int cutoff = -1) {
    if (cutoff < 0) cutoff = 4 * s.n_max();
    if (cutoff < s.n_max())
        throw std::invalid_argument("wigner_at: cutoff must be at least n_max");
    return detail::wigner_point(field_channels(s), alpha, cutoff);
}

// W(alpha) for an arbitrary field density matrix, assembled entry-by-entry
// from displaced_number_element. Checks the imaginary residue that the general
// double sum accumulates.
inline double wigner_of_density(const DensityMatrix& rho_f, cdouble alpha, int cutoff) {
    const auto dim = rho_f.dim();
    cdouble acc{0.0, 0.0};
    cdouble d_prev{1.0, 0.0};
    Eigen::VectorXcd row(dim);
    for (int n = 0; n <= cutoff; ++n) {
        for (Eigen::Index k = 0; k < dim; ++k)
            row[k] = displaced_number_element(n, static_cast<int>(k), -alpha);
        const cdouble term = (row.transpose() * rho_f.entries * row.conjugate())(0);
        const cdouble d = (n % 2 == 0) ? term : -term;
        acc += d;
        if (n >= 2 && std::abs(d) < 1e-12 && std::abs(d_prev) < 1e-12) break;
        d_prev = d;
    }
    const double w = 2.0 / std::numbers::pi * acc.real();
    if (std::abs(2.0 / std::numbers::pi * acc.imag()) > 1e-6)
        throw numerical_error("wigner_of_density: imaginary residue above 1e-6");
    return w;
}

// ------------------------------- sampled grid --------------------------------

struct WignerGrid {
    Eigen::VectorXd alpha1_axis;
    Eigen::VectorXd alpha2_axis;
    Eigen::MatrixXd values;  // values(i, j) = W(alpha1[i] + i alpha2[j])
    int series_cutoff = 0;

    double spacing() const { return alpha1_axis[1] - alpha1_axis[0]; }
};

inline double default_wigner_radius(double alpha_abs) { return alpha_abs + 5.0; }

// Symmetric square grid; rows are evaluated in parallel.
inline WignerGrid compute_wigner_grid(const TripartiteState& s, double radius, double spacing,
                                      int cutoff = -1, int workers = 0) {
    if (cutoff < 0) cutoff = 4 * s.n_max();
    const int half = static_cast<int>(std::round(radius / spacing));
    const int npts = 2 * half + 1;
    WignerGrid grid;
    grid.alpha1_axis = linspace(-half * spacing, half * spacing, npts);
    grid.alpha2_axis = grid.alpha1_axis;
    grid.values.resize(npts, npts);
    grid.series_cutoff = cutoff;

    const FieldChannels ch = field_channels(s);
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, npts));

    std::atomic<int> next_row{0};
    auto work = [&]() {
        for (;;) {
            const int i = next_row.fetch_add(1);
            if (i >= npts) return;
            for (int j = 0; j < npts; ++j) {
                const cdouble a(grid.alpha1_axis[i], grid.alpha2_axis[j]);
                grid.values(i, j) = detail::wigner_point(ch, a, cutoff);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return grid;
}

inline double grid_integral(const WignerGrid& g) {
    const double h = g.spacing();
    double s = 0.0;
    for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
        const double wi = (i == 0 || i == g.values.rows() - 1) ? 0.5 : 1.0;
        for (Eigen::Index j = 0; j < g.values.cols(); ++j) {
            const double wj = (j == 0 || j == g.values.cols() - 1) ? 0.5 : 1.0;
            s += wi * wj * g.values(i, j);
        }
    }
    return s * h * h;
}

// Integral of max(0, -W): a scalar summary of how much negativity the state carries.
inline double negativity_volume(const WignerGrid& g) {
    const double h = g.spacing();
    double s = 0.0;
    for (Eigen::Index i = 0; i < g.values.rows(); ++i)
        for (Eigen::Index j = 0; j < g.values.cols(); ++j)
            s += std::max(0.0, -g.values(i, j));
    return s * h * h;
}

namespace detail {

inline double bilinear(const WignerGrid& g, double a1, double a2) {
    const double h = g.spacing();
    const double lo1 = g.alpha1_axis[0], lo2 = g.alpha2_axis[0];
    const double fi = (a1 - lo1) / h, fj = (a2 - lo2) / h;
    const auto n1 = g.alpha1_axis.size(), n2 = g.alpha2_axis.size();
    if (fi < 0.0 || fj < 0.0 || fi > n1 - 1.0 || fj > n2 - 1.0) return 0.0;
    const auto i = std::min(static_cast<Eigen::Index>(fi), n1 - 2);
    const auto j = std::min(static_cast<Eigen::Index>(fj), n2 - 2);
    const double t = fi - i, u = fj - j;
    return (1 - t) * (1 - u) * g.values(i, j) + t * (1 - u) * g.values(i + 1, j) +
           (1 - t) * u * g.values(i, j + 1) + t * u * g.values(i + 1, j + 1);
}

} // namespace detail

// Line integrals of the Wigner grid along q cos(theta) + p sin(theta) = X,
// scaled so the result is directly comparable to tomogram slices.
inline Eigen::VectorXd radon_slice(const WignerGrid& g, double theta,
                                   const Eigen::VectorXd& x_values) {
    const double h = g.spacing();
    const double r1 = g.alpha1_axis[g.alpha1_axis.size() - 1];
    const double r2 = g.alpha2_axis[g.alpha2_axis.size() - 1];
    const double reach = std::min(r1, r2);
    const double span = std::hypot(r1, r2);
    const double c = std::cos(theta), s = std::sin(theta);
    const int n_steps = static_cast<int>(std::ceil(2.0 * span / h)) + 1;

    Eigen::VectorXd out(x_values.size());
    Eigen::VectorXd line(n_steps);
    for (Eigen::Index ix = 0; ix < x_values.size(); ++ix) {
        const double d = x_values[ix] / std::numbers::sqrt2;
        if (std::abs(d) > reach)
            throw std::invalid_argument("radon_slice: X outside the grid support");
        for (int k = 0; k < n_steps; ++k) {
            const double u = -span + k * (2.0 * span / (n_steps - 1));
            line[k] = detail::bilinear(g, d * c - u * s, d * s + u * c);
        }
        out[ix] = trapezoid_uniform(line, 2.0 * span / (n_steps - 1)) / std::numbers::sqrt2;
    }
    return out;
}

// Direct evaluation of the position-representation integral
//   W(p, q) = (1/pi) Int dq' <q+q'| rho |q-q'> e^{-2 i p q'},
// rescaled to the alpha convention used by wigner_at. Test oracle; adaptive
// quadrature with failure reported rather than silently degraded.
inline double wigner_direct_oracle(const DensityMatrix& rho_f, double p, double q) {
    const auto dim = rho_f.dim();
    const double reach = std::sqrt(2.0 * static_cast<double>(dim) + 1.0) + std::abs(q) + 8.0;
    auto integrand = [&](double qp) -> cdouble {
        const Eigen::VectorXd left = hermite_functions(static_cast<int>(dim) - 1, q + qp);
        const Eigen::VectorXd right = hermite_functions(static_cast<int>(dim) - 1, q - qp);
        const cdouble val = (left.transpose().cast<cdouble>() * rho_f.entries *
                             right.cast<cdouble>())(0);
        return val * std::polar(1.0, -2.0 * p * qp);
    };
    const cdouble integral = adaptive_simpson(integrand, -reach, reach, 1e-11);
    if (std::abs(integral.imag()) > 1e-8)
        throw numerical_error("wigner_direct_oracle: imaginary residue above tolerance");
    return 2.0 / std::numbers::pi * integral.real();
}

} // namespace omcav
