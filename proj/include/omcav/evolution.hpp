// evolution.hpp — Exact per-n block evolution under the effective Hamiltonian,
// the closed-form amplitude coefficients, and a fixed-step integrator oracle.
//
// The effective dynamics never mixes different photon indices n: the family
// |n;0;e> is fully decoupled (both exchange terms annihilate it) and picks up
// a pure phase, while {|n;0;g>, |n-1;1;e>} evolve under a real-symmetric 2x2
// block. Production evolution therefore uses exact 2x2 exponentials.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "omcav/model.hpp"

namespace omcav {

// ------------------------------ block Hamiltonian ---------------------------

struct BlockHamiltonian {
    int n = 0;
    double e_e = 0.0;        // energy of |n;0;e> (Hz)
    Eigen::Matrix2d gc = Eigen::Matrix2d::Zero();  // on {|n;0;g>, |n-1;1;e>}
    // For n = 0 the block degenerates: only gc(0,0), the energy of |0;0;g>,
    // is meaningful and the second row/column is zero so C_0 stays untouched.
};

inline BlockHamiltonian build_block(const SystemParams& p, int n) {
    if (n < 0) throw std::invalid_argument("build_block: n must be >= 0");
    const double wm = p.omega_m_hz;
    const double g2 = p.g_hz * p.g_hz;
    const double om2 = p.omega_hz * p.omega_hz;
    const double nn = static_cast<double>(n);

    BlockHamiltonian blk;
    blk.n = n;

    double e_e, e_g, e_c;
    if (p.eff_order == EffOrder::first_order) {
        e_e = -(om2 * (nn - 1.0) + g2 * nn * nn) / wm;
        e_g = (om2 * nn - g2 * nn * nn) / wm;
        e_c = (n >= 1) ? -(om2 * (nn - 2.0) + g2 * (nn - 1.0) * (nn - 1.0)) / wm : 0.0;
    } else {
        const double up = coupling_nf2(p.coupling, n + 1);  // (n+1) f(n+1)^2
        const double nf2 = coupling_nf2(p.coupling, n);
        e_e = -(om2 * up + g2 * nn * nn) / wm;
        e_g = (om2 * nf2 - g2 * nn * nn) / wm;
        e_c = (n >= 1) ? -(om2 * nf2 + g2 * (nn - 1.0) * (nn - 1.0)) / wm : 0.0;
    }
    const double s = (n >= 1) ? p.g_hz * p.omega_hz / wm * coupling_sn(p.coupling, n) : 0.0;

    blk.e_e = e_e;
    blk.gc(0, 0) = e_g;
    if (n >= 1) {
        blk.gc(0, 1) = s;
        blk.gc(1, 0) = s;
        blk.gc(1, 1) = e_c;
    }
    return blk;
}

namespace detail {

// exp(-i H t) for the real-symmetric 2x2 block, evaluated exactly.
struct Block2x2Propagator {
    cdouble u00, u01, u11;  // u10 == u01

    Block2x2Propagator(const Eigen::Matrix2d& h, double t) {
        const double mu = 0.5 * (h(0, 0) + h(1, 1));
        const double d = 0.5 * (h(0, 0) - h(1, 1));
        const double s = h(0, 1);
        const double r = std::hypot(d, s);
        const double cb = std::cos(r * t);
        const double sb = (r > 0.0) ? std::sin(r * t) / r : t;
        const cdouble ph = std::polar(1.0, -mu * t);
        u00 = ph * cdouble(cb, -d * sb);
        u01 = ph * cdouble(0.0, -s * sb);
        u11 = ph * cdouble(cb, d * sb);
    }
};

} // namespace detail

// Evolves the state to tau_target (dimensionless). Exact per block; the norm
// and the per-n populations |A_n| are conserved to rounding.
inline TripartiteState propagate(const TripartiteState& state, double tau_target,
                                 const SystemParams& params) {
    if (tau_target < 0.0) throw std::invalid_argument("propagate: tau_target must be >= 0");
    const double dt = (tau_target - state.tau) * params.t_unit_s();
    TripartiteState out = state;
    out.tau = tau_target;
    for (int n = 0; n <= state.n_max(); ++n) {
        const BlockHamiltonian blk = build_block(params, n);
        out.a[n] = state.a[n] * std::polar(1.0, -blk.e_e * dt);
        const detail::Block2x2Propagator u(blk.gc, dt);
        const cdouble bn = state.b[n], cn = state.c[n];
        out.b[n] = u.u00 * bn + u.u01 * cn;
        out.c[n] = u.u01 * bn + u.u11 * cn;
    }
    return out;
}

// ------------------------------ closed forms --------------------------------

enum class CoeffMode { as_printed, rederived };

struct ClosedFormCoeffs {
    int n = 0;
    CoeffMode mode = CoeffMode::rederived;
    double gamma1_hz = 0.0;        // phase rate of A_n
    double gamma2_hz = 0.0;        // common phase rate of B_n, C_n
    double radicand_hz2 = 0.0;     // R^2; can go negative in as_printed mode
    double rate_hz = 0.0;          // R = sqrt(max(radicand, 0))
    cdouble sin_coeff_b{0.0, 0.0}; // coefficient of sin(Rt)/R in B_n
    cdouble sin_coeff_c{0.0, 0.0}; // coefficient of sin(Rt)/R in C_n
    bool complex_rate = false;     // radicand < 0: hyperbolic continuation

    // The printed sin-coefficients normalized by R (analytic continuation when
    // the radicand is negative; infinite when R == 0 exactly).
    cdouble delta_b() const { return sin_coeff_b / rate(); }
    cdouble delta_c() const { return sin_coeff_c / rate(); }
    cdouble rate() const {
        return complex_rate ? cdouble(0.0, std::sqrt(-radicand_hz2)) : cdouble(rate_hz, 0.0);
    }
};

inline ClosedFormCoeffs closed_form_params(const SystemParams& p, int n, CoeffMode mode) {
    if (n < 1) throw std::invalid_argument("closed_form_params: n must be >= 1");
    const double wm = p.omega_m_hz;
    const double g2 = p.g_hz * p.g_hz;
    const double om2 = p.omega_hz * p.omega_hz;
    const double nn = static_cast<double>(n);

    ClosedFormCoeffs c;
    c.n = n;
    c.mode = mode;
    if (mode == CoeffMode::rederived) {
        const BlockHamiltonian blk = build_block(p, n);
        const double mu = 0.5 * (blk.gc(0, 0) + blk.gc(1, 1));
        const double d = 0.5 * (blk.gc(0, 0) - blk.gc(1, 1));
        const double s = blk.gc(0, 1);
        c.gamma1_hz = -blk.e_e;
        c.gamma2_hz = -mu;
        c.radicand_hz2 = d * d + s * s;
        c.rate_hz = std::hypot(d, s);
        c.sin_coeff_b = cdouble(0.0, -d);
        c.sin_coeff_c = cdouble(0.0, -s);
        c.complex_rate = false;
    } else {
        const double sn = coupling_sn(p.coupling, n);
        const double quad = 2.0 * nn * nn - 2.0 * nn + 1.0;
        c.gamma1_hz = (g2 * nn * nn + (nn + 1.0) * om2) / wm;
        c.gamma2_hz = g2 * (nn * nn - nn + 0.5) / wm;
        c.radicand_hz2 = (0.25 * g2 * g2 * quad * quad + g2 * om2 * sn * sn -
                          (g2 * (nn - 1.0) * (nn - 1.0) + om2 * nn) * (g2 * nn * nn - om2 * nn)) /
                         (wm * wm);
        c.complex_rate = c.radicand_hz2 < 0.0;
        c.rate_hz = std::sqrt(std::max(c.radicand_hz2, 0.0));
        c.sin_coeff_b = cdouble(0.0, -(g2 * (nn - 0.5) - om2 * nn) / wm);
        c.sin_coeff_c = cdouble(0.0, -p.g_hz * p.omega_hz * sn / wm);
    }
    return c;
}

struct AmplitudeTriple {
    cdouble a{0.0, 0.0};
    cdouble b{0.0, 0.0};
    cdouble c{0.0, 0.0};
    bool complex_rate = false;  // set when the printed radicand went negative
};

inline AmplitudeTriple evaluate_closed_form(const ClosedFormCoeffs& cf, double phi, double t) {
    double cb, sb;
    if (cf.complex_rate) {
        const double r = std::sqrt(-cf.radicand_hz2);
        cb = std::cosh(r * t);
        sb = (r > 0.0) ? std::sinh(r * t) / r : t;
    } else {
        cb = std::cos(cf.rate_hz * t);
        sb = (cf.rate_hz > 0.0) ? std::sin(cf.rate_hz * t) / cf.rate_hz : t;
    }
    const cdouble ph2 = std::polar(1.0, cf.gamma2_hz * t);
    AmplitudeTriple out;
    out.a = std::cos(phi) * std::polar(1.0, cf.gamma1_hz * t);
    out.b = std::sin(phi) * (cb + cf.sin_coeff_b * sb) * ph2;
    out.c = std::sin(phi) * cf.sin_coeff_c * sb * ph2;
    out.complex_rate = cf.complex_rate;
    return out;
}

// (A_n, B_n, C_n) at time t (seconds) for the initial conditions
// A_n(0) = cos(phi), B_n(0) = sin(phi), C_n(0) = 0.
inline AmplitudeTriple closed_form_coeffs(const SystemParams& p, int n, double t,
                                          CoeffMode mode) {
    return evaluate_closed_form(closed_form_params(p, n, mode), p.phi, t);
}

// ----------------------------- integrator oracle ----------------------------

// Classical fixed-step RK4 on the coupled amplitude equations, used as an
// independent check on the exact block propagation. The block-diagonal phases
// are factored out exactly and the integrator tracks only the exchange terms,
// so the O(steps^-4) error reflects the tripartite dynamics rather than the
// fast Kerr phases.
inline TripartiteState ode_oracle(const TripartiteState& state0, const SystemParams& params,
                                  double tau_target, long steps) {
    if (steps < 1) throw std::invalid_argument("ode_oracle: steps must be >= 1");
    if (tau_target < 0.0) throw std::invalid_argument("ode_oracle: tau_target must be >= 0");
    const double total_t = (tau_target - state0.tau) * params.t_unit_s();
    const double h = total_t / static_cast<double>(steps);

    TripartiteState out = state0;
    out.tau = tau_target;
    for (int n = 0; n <= state0.n_max(); ++n) {
        const BlockHamiltonian blk = build_block(params, n);
        const double s = blk.gc(0, 1);
        const double delta = blk.gc(0, 0) - blk.gc(1, 1);
        const cdouble step_ph = std::polar(1.0, delta * h);
        const cdouble half_ph = std::polar(1.0, 0.5 * delta * h);

        cdouble bt = state0.b[n], ct = state0.c[n];
        cdouble ph = 1.0;  // exp(i delta sigma) at the current step
        for (long j = 0; j < steps; ++j) {
            if (j % 256 == 0) ph = std::polar(1.0, delta * h * static_cast<double>(j));
            const cdouble pm = ph * half_ph;
            const cdouble pe = ph * step_ph;
            const cdouble is{0.0, -s};
            const cdouble k1b = is * ph * ct, k1c = is * std::conj(ph) * bt;
            const cdouble k2b = is * pm * (ct + 0.5 * h * k1c);
            const cdouble k2c = is * std::conj(pm) * (bt + 0.5 * h * k1b);
            const cdouble k3b = is * pm * (ct + 0.5 * h * k2c);
            const cdouble k3c = is * std::conj(pm) * (bt + 0.5 * h * k2b);
            const cdouble k4b = is * pe * (ct + h * k3c);
            const cdouble k4c = is * std::conj(pe) * (bt + h * k3b);
            bt += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
            ct += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
            ph = pe;
        }
        out.a[n] = state0.a[n] * std::polar(1.0, -blk.e_e * total_t);
        out.b[n] = bt * std::polar(1.0, -blk.gc(0, 0) * total_t);
        out.c[n] = ct * std::polar(1.0, -blk.gc(1, 1) * total_t);
    }
    return out;
}

} // namespace omcav
