#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <tmjc/oracle.hpp>

#include "test_support.hpp"

using namespace tmjc;
using test_support::random_couplings;
using test_support::random_state;

TEST_CASE("the assembled Hamiltonian is Hermitian and sector-sparse") {
  std::mt19937_64 gen(501);
  const CouplingConfig cfg = random_couplings(gen);
  const TruncatedHamiltonian h(cfg, 5);
  const Eigen::MatrixXcd& m = h.matrix();
  REQUIRE(h.dimension() == 2 * fock_dimension(5));
  REQUIRE((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);

  // On resonance every matrix element swaps one atomic excitation for one
  // photon; anything else vanishes.
  const int f = fock_dimension(5);
  for (int r = 0; r < 2 * f; ++r)
    for (int c = 0; c < 2 * f; ++c) {
      const bool r_excited = r < f;
      const bool c_excited = c < f;
      const int r_total = fock_label_at(r % f).total();
      const int c_total = fock_label_at(c % f).total();
      const int r_excitation = r_total + (r_excited ? 1 : 0);
      const int c_excitation = c_total + (c_excited ? 1 : 0);
      if (r_excited == c_excited || r_excitation != c_excitation)
        REQUIRE(m(r, c) == Complex(0.0));
    }
}

TEST_CASE("numerically exponentiated evolution is unitary") {
  std::mt19937_64 gen(502);
  const CouplingConfig cfg = random_couplings(gen);
  const TruncatedHamiltonian h(cfg, 6);
  const AtomFieldState in(
      TwoModeState(6, Basis::Mode, random_state(gen, 6, 6).amplitudes() / std::sqrt(2.0)),
      TwoModeState(6, Basis::Mode, random_state(gen, 6, 6).amplitudes() / std::sqrt(2.0)));
  const AtomFieldState out = evolve_exact(in, 3.7, h);
  REQUIRE(std::abs(out.joint_norm() - 1.0) < 1e-12);

  REQUIRE_THROWS_AS(evolve_exact(AtomFieldState::product(AtomLevel::Excited,
                                                         make_basis_state({0, 0}, 4)),
                                 1.0, h),
                    std::invalid_argument);
}

TEST_CASE("an excited atom over the vacuum Rabi-flops at the collective rate") {
  std::mt19937_64 gen(503);
  for (int rep = 0; rep < 6; ++rep) {
    const CouplingConfig cfg = random_couplings(gen);
    const TruncatedHamiltonian h(cfg, 3);
    for (double tau : {0.3, 1.0, std::numbers::pi / 2}) {
      const AtomFieldState out = evolve_exact(
          AtomFieldState::product(AtomLevel::Excited, make_basis_state({0, 0}, 3)), tau, h);
      REQUIRE(std::abs(out.excited().amplitude({0, 0}) - Complex(std::cos(tau))) < 1e-12);
      // The released photon rides the conjugated coupling pair.
      const Complex swing(0.0, -std::sin(tau));
      REQUIRE(std::abs(out.ground().amplitude({1, 0}) - swing * std::conj(cfg.gamma1())) <
              1e-12);
      REQUIRE(std::abs(out.ground().amplitude({0, 1}) - swing * std::conj(cfg.gamma2())) <
              1e-12);
    }
  }
}

TEST_CASE("a detuning term only rephases within excitation sectors") {
  const CouplingConfig cfg(Complex(0.8, 0.1), Complex(-0.3, 0.5));
  const TruncatedHamiltonian bare(cfg, 3);
  const TruncatedHamiltonian detuned(cfg, 3, 2.5);
  const AtomFieldState in =
      AtomFieldState::product(AtomLevel::Excited, make_basis_state({1, 1}, 3));
  const double tau = 1.9;
  const AtomFieldState a = evolve_exact(in, tau, bare);
  const AtomFieldState b = evolve_exact(in, tau, detuned);
  for (int i = 0; i < fock_dimension(3); ++i) {
    REQUIRE(std::abs(std::abs(a.excited().amplitudes()[i]) -
                     std::abs(b.excited().amplitudes()[i])) < 1e-12);
    REQUIRE(std::abs(std::abs(a.ground().amplitudes()[i]) -
                     std::abs(b.ground().amplitudes()[i])) < 1e-12);
  }
}

TEST_CASE("closed-form evolution tracks the brute-force propagator") {
  std::mt19937_64 gen(504);
  std::uniform_real_distribution<double> taus(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int rep = 0; rep < 30; ++rep) {
    const CouplingConfig cfg = random_couplings(gen);
    const double tau = taus(gen);
    AtomFieldState in =
        rep % 3 == 0
            ? AtomFieldState::product(rep % 2 == 0 ? AtomLevel::Excited : AtomLevel::Ground,
                                      make_basis_state(fock_label_at(rep % 15), 8))
            : AtomFieldState(TwoModeState(8, Basis::Mode,
                                          random_state(gen, 8, 4).amplitudes() / std::sqrt(2.0)),
                             TwoModeState(8, Basis::Mode,
                                          random_state(gen, 8, 4).amplitudes() / std::sqrt(2.0)));
    const CrosscheckResult res = crosscheck(in, tau, cfg, 8);
    worst = std::max(worst, res.max_deviation);
  }
  REQUIRE(worst < 1e-9);
}

TEST_CASE("the crosscheck flags an undersized oracle space") {
  const CouplingConfig cfg = CouplingConfig::equal_real();
  const AtomFieldState in =
      AtomFieldState::product(AtomLevel::Excited, make_basis_state({2, 0}, 2));
  // With the top block reachable in one exchange, truncation bites hard.
  const CrosscheckResult res = crosscheck(in, 1.3, cfg, 2);
  REQUIRE(res.max_deviation > 1e-4);

  REQUIRE_THROWS_AS(crosscheck(AtomFieldState::product(AtomLevel::Excited,
                                                       make_basis_state({3, 0}, 3)),
                               1.0, cfg, 2),
                    std::invalid_argument);
}
