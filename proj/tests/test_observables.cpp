#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "omcav/evolution.hpp"
#include "omcav/model.hpp"
#include "omcav/observables.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace omcav;

namespace {

SystemParams base_params(double phi) {
    SystemParams p;
    p.omega_m_hz = 1e9;
    p.g_hz = 1e6;
    p.omega_hz = 1e6;
    p.phi = phi;
    return p;
}

TripartiteState evolved_coherent(double alpha, double phi, double tau,
                                 const SystemParams& p, double eps = 1e-12) {
    const int n_max = choose_truncation(alpha, 0, eps);
    const auto l = build_initial_weights(FieldInitialState::coherent({alpha, 0.0}), n_max, eps);
    return propagate(initial_state(l, phi), tau, p);
}

double entropy_of(const Eigen::MatrixXcd& m) {
    DensityMatrix rho;
    rho.entries = m;
    return svne(rho);
}

} // namespace

TEST_CASE("atom reduced state") {
    SystemParams p = base_params(0.25 * std::numbers::pi);

    SECTION("initial product state projects onto (|e> + |g>)/sqrt(2)") {
        const TripartiteState s = evolved_coherent(1.3, 0.25 * std::numbers::pi, 0.0, p);
        const DensityMatrix rho = reduced_rho_atom(s);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                REQUIRE(std::abs(rho.entries(i, j) - cdouble(0.5, 0.0)) < 1e-12);
    }
    SECTION("phi = pi/2 kills the coherences at all times") {
        p.phi = 0.5 * std::numbers::pi;
        for (double tau : {0.4, 2.0, 7.7}) {
            const TripartiteState s = evolved_coherent(1.0, p.phi, tau, p);
            REQUIRE(std::abs(reduced_rho_atom(s).entries(0, 1)) < 1e-16);
        }
    }
}

TEST_CASE("mirror reduced state") {
    SystemParams p = base_params(0.5 * std::numbers::pi);

    SECTION("mirror starts in its ground state") {
        const TripartiteState s = evolved_coherent(2.0, p.phi, 0.0, p);
        const DensityMatrix rho = reduced_rho_mirror(s);
        REQUIRE(std::abs(rho.entries(0, 0) - cdouble(1.0, 0.0)) < 1e-12);
        REQUIRE(std::abs(rho.entries(1, 1)) < 1e-14);
    }
    SECTION("phi = pi/2 gives atom and mirror identical spectra") {
        for (double tau : {0.9, 3.3, 8.1}) {
            const TripartiteState s = evolved_coherent(1.0, p.phi, tau, p);
            const DensityMatrix ra = reduced_rho_atom(s);
            const DensityMatrix rm = reduced_rho_mirror(s);
            REQUIRE(std::abs(ra.entries(0, 0).real() - rm.entries(1, 1).real()) < 1e-12);
            REQUIRE(std::abs(ra.entries(1, 1).real() - rm.entries(0, 0).real()) < 1e-12);
        }
    }
}

TEST_CASE("field reduced state") {
    SystemParams p = base_params(0.5 * std::numbers::pi);

    SECTION("initial coherent field is a rank-1 projector") {
        const TripartiteState s = evolved_coherent(1.5, p.phi, 0.0, p);
        const DensityMatrix rho = reduced_rho_field(s);
        for (int n = 0; n <= s.n_max(); ++n)
            for (int m = 0; m <= s.n_max(); ++m)
                REQUIRE(std::abs(rho.entries(n, m) - s.l[n] * std::conj(s.l[m])) < 1e-12);
    }
    SECTION("phi = 0 keeps the field pure under evolution") {
        const TripartiteState s = evolved_coherent(1.5, 0.0, 4.2, p);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced_rho_field(s).entries,
                                                           Eigen::EigenvaluesOnly);
        const auto ev = es.eigenvalues();
        REQUIRE(ev[ev.size() - 1] == Approx(1.0).margin(1e-12));
        REQUIRE(std::abs(ev[ev.size() - 2]) < 1e-12);
    }
}

TEST_CASE("reduced matrices match the brute-force partial trace") {
    SystemParams p = base_params(0.5 * std::numbers::pi);

    SECTION("evolved coherent state") {
        const TripartiteState s = evolved_coherent(1.0, p.phi, 2.0, p);
        const auto psi = oracles::tensor_state(s);
        const int nf = s.n_max() + 1;
        REQUIRE((reduced_rho_atom(s).entries - oracles::rho_atom_bruteforce(psi, nf))
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
        const auto rm = oracles::rho_mirror_bruteforce(psi, nf);
        REQUIRE(std::abs(rm(2, 2)) == 0.0);  // nothing leaks to the second phonon level
        REQUIRE((reduced_rho_mirror(s).entries - rm.topLeftCorner(2, 2)).cwiseAbs().maxCoeff() <
                1e-12);
        REQUIRE((reduced_rho_field(s).entries - oracles::rho_field_bruteforce(psi, nf))
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
    }
    SECTION("random custom field at modest truncation") {
        p.phi = 0.7;
        p.coupling = CouplingKind::kappa_deformed(0.4);
        const int n_max = 12;
        const auto amps = oracles::random_amplitudes(n_max + 1, 41);
        std::vector<cdouble> av(amps.data(), amps.data() + amps.size());
        const auto l = build_initial_weights(FieldInitialState::custom(av), n_max, 1e-9);
        const TripartiteState s = propagate(initial_state(l, p.phi), 1.7, p);
        const auto psi = oracles::tensor_state(s);
        REQUIRE((reduced_rho_atom(s).entries - oracles::rho_atom_bruteforce(psi, n_max + 1))
                    .cwiseAbs()
                    .maxCoeff() < 1e-10);
        REQUIRE((reduced_rho_mirror(s).entries -
                 oracles::rho_mirror_bruteforce(psi, n_max + 1).topLeftCorner(2, 2))
                    .cwiseAbs()
                    .maxCoeff() < 1e-10);
        REQUIRE((reduced_rho_field(s).entries - oracles::rho_field_bruteforce(psi, n_max + 1))
                    .cwiseAbs()
                    .maxCoeff() < 1e-10);
    }
}

TEST_CASE("entropy") {
    SECTION("pure and maximally mixed reference points") {
        Eigen::MatrixXcd pure = Eigen::MatrixXcd::Zero(2, 2);
        pure(0, 0) = 1.0;
        REQUIRE(entropy_of(pure) == Approx(0.0).margin(1e-15));
        Eigen::MatrixXcd mixed = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
        DensityMatrix rho;
        rho.entries = mixed;
        REQUIRE(svne(rho) == Approx(std::numbers::ln2).margin(1e-14));
        REQUIRE(svne(rho, EntropyBase::two) == Approx(1.0).margin(1e-14));
    }
    SECTION("diag(1/4, 3/4) against a direct evaluation") {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
        m(0, 0) = 0.25;
        m(1, 1) = 0.75;
        const double expected = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
        REQUIRE(entropy_of(m) == Approx(expected).margin(1e-14));
        REQUIRE(expected == Approx(0.5623).margin(5e-5));
    }
    SECTION("clearly negative eigenvalues are rejected") {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
        m(0, 0) = 1.1;
        m(1, 1) = -0.1;
        DensityMatrix rho;
        rho.entries = m;
        REQUIRE_THROWS_AS(svne(rho), numerical_error);
    }
}

TEST_CASE("entropy bounds and identities along the evolution") {
    SystemParams p = base_params(0.5 * std::numbers::pi);
    SECTION("two-level entropies never exceed ln 2") {
        for (double tau = 0.0; tau <= 10.0; tau += 0.5) {
            const TripartiteState s = evolved_coherent(1.0, p.phi, tau, p);
            REQUIRE(svne(reduced_rho_atom(s)) <= std::numbers::ln2 + 1e-12);
            REQUIRE(svne(reduced_rho_mirror(s)) <= std::numbers::ln2 + 1e-12);
        }
    }
    SECTION("phi = pi/2 makes atom and mirror entropies identical") {
        for (double tau = 0.0; tau <= 10.0; tau += 0.7) {
            const TripartiteState s = evolved_coherent(1.0, p.phi, tau, p);
            REQUIRE(std::abs(svne(reduced_rho_atom(s)) - svne(reduced_rho_mirror(s))) < 1e-10);
        }
    }
    SECTION("phi = 0 leaves every subsystem pure") {
        for (double tau : {0.5, 3.0, 9.5}) {
            const TripartiteState s = evolved_coherent(1.0, 0.0, tau, p);
            REQUIRE(svne(reduced_rho_atom(s)) < 1e-10);
            REQUIRE(svne(reduced_rho_mirror(s)) < 1e-10);
            REQUIRE(svne(reduced_rho_field(s)) < 1e-10);
        }
    }
    SECTION("field entropy equals the joint mirror-atom entropy") {
        const TripartiteState s = evolved_coherent(1.0, p.phi, 2.0, p);
        const auto psi = oracles::tensor_state(s);
        const double sf = svne(reduced_rho_field(s));
        const double sam = entropy_of(oracles::rho_mirror_atom_bruteforce(psi, s.n_max() + 1));
        REQUIRE(std::abs(sf - sam) < 1e-8);
    }
}

TEST_CASE("photon statistics") {
    SystemParams p = base_params(0.5 * std::numbers::pi);

    SECTION("coherent input is Poissonian at tau = 0") {
        const TripartiteState s = evolved_coherent(5.0, p.phi, 0.0, p);
        const PhotonStats st = photon_stats(s);
        REQUIRE(st.mean_n == Approx(25.0).margin(1e-10));
        REQUIRE(st.var_n == Approx(25.0).margin(1e-10));
        REQUIRE(std::abs(st.mandel_q) < 1e-12);
        REQUIRE(st.inversion == Approx(-1.0).margin(1e-12));
    }
    SECTION("number state has Q = -1") {
        Eigen::VectorXcd l = Eigen::VectorXcd::Zero(17);
        l[3] = 1.0;
        const TripartiteState s = initial_state(l, 0.0);
        const PhotonStats st = photon_stats(s);
        REQUIRE(st.mean_n == Approx(3.0).margin(1e-14));
        REQUIRE(st.var_n == Approx(0.0).margin(1e-14));
        REQUIRE(st.mandel_q == Approx(-1.0).margin(1e-14));
        REQUIRE(st.inversion == Approx(1.0).margin(1e-14));
    }
    SECTION("vacuum mean is zero with the Q = 0 convention") {
        Eigen::VectorXcd l = Eigen::VectorXcd::Zero(17);
        l[0] = 1.0;
        const PhotonStats st = photon_stats(initial_state(l, 0.3));
        REQUIRE(st.mean_n == 0.0);
        REQUIRE(st.mandel_q == 0.0);
    }
    SECTION("Q matches the brute-force field density matrix") {
        const TripartiteState s = evolved_coherent(1.0, p.phi, 1.0, p);
        const auto rho = oracles::rho_field_bruteforce(oracles::tensor_state(s), s.n_max() + 1);
        double m1 = 0.0, m2 = 0.0;
        for (int n = 0; n <= s.n_max(); ++n) {
            m1 += n * rho(n, n).real();
            m2 += static_cast<double>(n) * n * rho(n, n).real();
        }
        const double q_ref = (m2 - m1 * m1) / m1 - 1.0;
        REQUIRE(photon_stats(s).mandel_q == Approx(q_ref).margin(1e-10));
    }
}
