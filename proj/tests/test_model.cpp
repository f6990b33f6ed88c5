#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "omcav/model.hpp"

using Catch::Approx;
using namespace omcav;

TEST_CASE("coupling families evaluate to their closed forms") {
    REQUIRE(eval_coupling(CouplingKind::constant(), 7) == 1.0);
    REQUIRE(eval_coupling(CouplingKind::kappa_deformed(1.0), 3) == Approx(2.0).margin(1e-15));
    REQUIRE(eval_coupling(CouplingKind::inv_sqrt_n(), 4) == Approx(0.5).margin(1e-15));
    REQUIRE(eval_coupling(CouplingKind::sqrt_n(), 9) == Approx(3.0).margin(1e-15));
    REQUIRE_THROWS_AS(eval_coupling(CouplingKind::inv_sqrt_n(), 0), std::domain_error);
}

TEST_CASE("the product form sqrt(n) f(n) is finite everywhere") {
    for (long n : {0L, 1L, 2L, 100L}) {
        REQUIRE(std::isfinite(coupling_sn(CouplingKind::inv_sqrt_n(), n)));
        if (n >= 1) REQUIRE(coupling_sn(CouplingKind::inv_sqrt_n(), n) == 1.0);
    }
    REQUIRE(coupling_sn(CouplingKind::sqrt_n(), 0) == 0.0);
    REQUIRE(coupling_sn(CouplingKind::sqrt_n(), 4) == Approx(4.0).margin(1e-15));
}

TEST_CASE("kappa = 0 deformation reduces to the constant coupling exactly") {
    const auto kd = CouplingKind::kappa_deformed(0.0);
    for (long n = 1; n <= 10000; ++n) {
        REQUIRE(eval_coupling(kd, n) == 1.0);
        REQUIRE(coupling_sn(kd, n) == coupling_sn(CouplingKind::constant(), n));
    }
}

TEST_CASE("truncation order tracks the Poisson tail") {
    REQUIRE(choose_truncation(0.0, 0, 1e-12) == 16);

    const int n = choose_truncation(5.0, 0, 1e-12);
    // Brute-force tail sums: the pre-margin order must be minimal.
    const double lam = 25.0;
    auto tail_beyond = [&](int cut) {
        double cum = 0.0;
        for (int k = 0; k <= cut; ++k)
            cum += std::exp(-lam + k * std::log(lam) - std::lgamma(k + 1.0));
        return 1.0 - cum;
    };
    REQUIRE(tail_beyond(n - 10) < 1e-12);
    REQUIRE(tail_beyond(n - 11) >= 1e-12);

    REQUIRE(choose_truncation(5.0, 2, 1e-12) == n + 2);
    REQUIRE_THROWS_AS(choose_truncation(1.0, 0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(choose_truncation(1.0, 0, 1.5), std::invalid_argument);
}

TEST_CASE("coherent weights match the analytic expansion") {
    const auto l0 = build_initial_weights(FieldInitialState::coherent({0.0, 0.0}), 16);
    REQUIRE(std::abs(l0[0] - cdouble(1.0, 0.0)) < 1e-15);
    REQUIRE(l0.tail(16).norm() == 0.0);

    const int n_max = choose_truncation(1.0, 0, 1e-12);
    const auto l = build_initial_weights(FieldInitialState::coherent({1.0, 0.0}), n_max);
    REQUIRE(std::abs(l[2] - std::exp(-0.5) / std::sqrt(2.0)) < 1e-12);
    REQUIRE(std::abs(l.norm() - 1.0) < 1e-12);
}

TEST_CASE("weights are normalized for any admissible alpha") {
    for (double a : {0.3, 1.0, 5.0, 8.0}) {
        const int n_max = choose_truncation(a, 2, 1e-12);
        for (int m : {0, 1, 2}) {
            const auto l =
                build_initial_weights(FieldInitialState::photon_added({a, 0.4 * a}, m), n_max);
            REQUIRE(std::abs(l.norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("adding zero photons reproduces the coherent state") {
    const cdouble alpha{1.7, -0.6};
    const int n_max = choose_truncation(std::abs(alpha), 0, 1e-12);
    const auto lc = build_initial_weights(FieldInitialState::coherent(alpha), n_max);
    const auto lp = build_initial_weights(FieldInitialState::photon_added(alpha, 0), n_max);
    REQUIRE((lc - lp).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single photon added to vacuum is the one-photon state") {
    const auto l = build_initial_weights(FieldInitialState::photon_added({0.0, 0.0}, 1), 16);
    REQUIRE(std::abs(l[1] - cdouble(1.0, 0.0)) < 1e-15);
    REQUIRE(std::abs(l[0]) == 0.0);
}

TEST_CASE("ladder construction carries the analytic normalization") {
    // |<alpha| a^m a+^m |alpha>| = m! L_m(-x) with x = |alpha|^2.
    const cdouble alpha{1.3, 0.0};
    const double x = std::norm(alpha);
    const int n_max = choose_truncation(std::abs(alpha), 3, 1e-12);
    auto lag_neg = [&](int m) {
        const double y = -x;
        if (m == 1) return 1.0 - y;
        if (m == 2) return (y * y - 4.0 * y + 2.0) / 2.0;
        return (-y * y * y + 9.0 * y * y - 18.0 * y + 6.0) / 6.0;
    };
    for (int m : {1, 2, 3}) {
        Eigen::VectorXcd v = build_initial_weights(FieldInitialState::coherent(alpha), n_max);
        for (int j = 0; j < m; ++j) {
            for (int n = n_max; n >= 1; --n) v[n] = std::sqrt(static_cast<double>(n)) * v[n - 1];
            v[0] = 0.0;
        }
        const double expected = std::tgamma(m + 1.0) * lag_neg(m);
        REQUIRE(v.squaredNorm() == Approx(expected).epsilon(1e-10));
        // Same direction as the library construction.
        const auto lib = build_initial_weights(FieldInitialState::photon_added(alpha, m), n_max);
        REQUIRE((lib - v / v.norm()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("weight construction rejects bad inputs") {
    REQUIRE_THROWS_AS(build_initial_weights(FieldInitialState::custom({{0.0, 0.0}}), 16),
                      std::invalid_argument);
    // alpha = 5 needs roughly 60 Fock levels; 20 cannot hold the tail.
    REQUIRE_THROWS_AS(build_initial_weights(FieldInitialState::coherent({5.0, 0.0}), 20),
                      std::invalid_argument);
    // Custom list with most of its mass beyond the truncation.
    std::vector<cdouble> amps(30, {0.0, 0.0});
    amps[25] = 1.0;
    REQUIRE_THROWS_AS(build_initial_weights(FieldInitialState::custom(amps), 16),
                      std::invalid_argument);
}

TEST_CASE("initial state is a normalized product state") {
    const auto l = build_initial_weights(FieldInitialState::coherent({2.0, 0.0}),
                                         choose_truncation(2.0, 0, 1e-12));
    const TripartiteState s = initial_state(l, 0.7);
    REQUIRE(std::abs(s.norm() - 1.0) < 1e-12);
    REQUIRE(s.c.norm() == 0.0);
    REQUIRE(s.tau == 0.0);
}

TEST_CASE("parameter validation separates errors from regime warnings") {
    SystemParams p;
    REQUIRE(p.validate().empty());
    p.omega_m_hz = 5e6;  // below 10 * max(G, Omega)
    REQUIRE(p.validate().size() == 1);
    p.omega_m_hz = -1.0;
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    p.omega_m_hz = 1e9;
    p.coupling = CouplingKind::kappa_deformed(1.5);
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    p.coupling = CouplingKind::constant();
    p.g_hz = 0.0;
    REQUIRE_THROWS_AS(p.t_unit_s(), std::domain_error);
}

TEST_CASE("density matrix checks catch invalid inputs") {
    DensityMatrix rho;
    rho.entries = Eigen::MatrixXcd::Zero(2, 2);
    rho.entries(0, 0) = 0.25;
    rho.entries(1, 1) = 0.75;
    REQUIRE_NOTHROW(validate_density(rho));
    rho.entries(0, 1) = cdouble(0.1, 0.0);
    REQUIRE_THROWS_AS(validate_density(rho), numerical_error);
    rho.entries(0, 1) = 0.0;
    rho.entries(0, 0) = 0.5;
    REQUIRE_THROWS_AS(validate_density(rho), numerical_error);  // trace 1.25
}
