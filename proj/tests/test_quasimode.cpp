#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <tmjc/quasimode.hpp>

#include "test_support.hpp"

using namespace tmjc;
using test_support::max_abs_diff;
using test_support::random_couplings;
using test_support::random_state;

TEST_CASE("transform blocks are the per-sector rotation matrices") {
  std::mt19937_64 gen(301);
  const CouplingConfig cfg = random_couplings(gen);
  const BasisTransform t(cfg, 6);
  REQUIRE(t.cutoff() == 6);
  for (int n = 0; n <= 6; ++n) {
    REQUIRE(t.block(n).rows() == n + 1);
    REQUIRE(max_abs_diff(t.block(n), wigner_block(n, cfg.euler())) == 0.0);
    REQUIRE(max_abs_diff(t.block(n) * t.block(n).adjoint(),
                         Eigen::MatrixXcd::Identity(n + 1, n + 1)) < 1e-10);
  }
  REQUIRE_THROWS_AS(t.block(7), std::invalid_argument);
  REQUIRE_THROWS_AS(BasisTransform(cfg, -1), std::invalid_argument);
}

TEST_CASE("the dense transform is block diagonal over photon totals") {
  std::mt19937_64 gen(302);
  const CouplingConfig cfg = random_couplings(gen);
  const BasisTransform t(cfg, 4);
  const Eigen::MatrixXcd full = t.full_matrix();
  REQUIRE(full.rows() == fock_dimension(4));
  for (int r = 0; r < full.rows(); ++r)
    for (int c = 0; c < full.cols(); ++c)
      if (fock_label_at(r).total() != fock_label_at(c).total())
        REQUIRE(full(r, c) == Complex(0.0));
  for (int n = 0; n <= 4; ++n)
    REQUIRE(max_abs_diff(full.block(block_offset(n), block_offset(n), n + 1, n + 1),
                         t.block(n)) == 0.0);

  const Eigen::MatrixXcd partial = t.full_matrix(2);
  REQUIRE(partial.rows() == fock_dimension(2));
  REQUIRE_THROWS_AS(t.full_matrix(5), std::invalid_argument);
}

TEST_CASE("basis changes round trip and preserve block norms") {
  std::mt19937_64 gen(303);
  for (int rep = 0; rep < 10; ++rep) {
    const CouplingConfig cfg = random_couplings(gen);
    const BasisTransform t(cfg, 8);
    const TwoModeState q = random_state(gen, 8, 8, Basis::QuasiMode);

    const TwoModeState m = to_mode_basis(q, t);
    REQUIRE(m.basis() == Basis::Mode);
    REQUIRE(std::abs(m.norm() - 1.0) < 1e-12);
    for (int n = 0; n <= 8; ++n)
      REQUIRE(std::abs(m.block(n).norm() - q.block(n).norm()) < 1e-12);

    const TwoModeState back = to_quasimode_basis(m, t);
    REQUIRE((back.amplitudes() - q.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);

    const TwoModeState mm = random_state(gen, 8, 8, Basis::Mode);
    const TwoModeState round = to_mode_basis(to_quasimode_basis(mm, t), t);
    REQUIRE((round.amplitudes() - mm.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("basis tags are enforced, not assumed") {
  const BasisTransform t(CouplingConfig::equal_real(), 3);
  const TwoModeState m = make_basis_state({1, 0}, 3, Basis::Mode);
  const TwoModeState q = make_basis_state({1, 0}, 3, Basis::QuasiMode);
  REQUIRE_THROWS_AS(to_mode_basis(m, t), std::invalid_argument);
  REQUIRE_THROWS_AS(to_quasimode_basis(q, t), std::invalid_argument);
  REQUIRE_THROWS_AS(to_mode_basis(make_basis_state({0, 0}, 5, Basis::QuasiMode), t),
                    std::invalid_argument);
}

TEST_CASE("a single quasi photon splits across the modes by the couplings") {
  std::mt19937_64 gen(304);
  for (int rep = 0; rep < 5; ++rep) {
    const CouplingConfig cfg = random_couplings(gen);
    const BasisTransform t(cfg, 2);
    const TwoModeState m = to_mode_basis(make_basis_state({1, 0}, 2, Basis::QuasiMode), t);
    REQUIRE(std::abs(m.amplitude({1, 0}) - std::conj(cfg.gamma1())) < 1e-14);
    REQUIRE(std::abs(m.amplitude({0, 1}) - std::conj(cfg.gamma2())) < 1e-14);
  }
  // Equal couplings: the quasi photon sits in the symmetric combination.
  const BasisTransform t(CouplingConfig::equal_real(), 1);
  const TwoModeState m = to_mode_basis(make_basis_state({1, 0}, 1, Basis::QuasiMode), t);
  REQUIRE(std::abs(m.amplitude({1, 0}) - Complex(1.0 / std::sqrt(2.0))) < 1e-14);
  REQUIRE(std::abs(m.amplitude({0, 1}) - Complex(1.0 / std::sqrt(2.0))) < 1e-14);
}

TEST_CASE("joint states transform part by part") {
  std::mt19937_64 gen(305);
  const CouplingConfig cfg = random_couplings(gen);
  const BasisTransform t(cfg, 5);
  const AtomFieldState s(random_state(gen, 5, 4, Basis::Mode),
                         random_state(gen, 5, 5, Basis::Mode));
  const AtomFieldState q = to_quasimode_basis(s, t);
  REQUIRE(q.basis() == Basis::QuasiMode);
  REQUIRE(std::abs(q.joint_norm() - s.joint_norm()) < 1e-12);
  const AtomFieldState back = to_mode_basis(q, t);
  REQUIRE((back.excited().amplitudes() - s.excited().amplitudes()).cwiseAbs().maxCoeff() <
          1e-12);
  REQUIRE((back.ground().amplitudes() - s.ground().amplitudes()).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("density operators rotate by conjugation") {
  std::mt19937_64 gen(306);
  const CouplingConfig cfg = random_couplings(gen);
  const BasisTransform t(cfg, 4);
  const TwoModeState psi = random_state(gen, 4, 4, Basis::Mode);
  const FieldDensityOperator rho = FieldDensityOperator::pure(psi);

  const FieldDensityOperator rq = density_to_basis(rho, t, Basis::QuasiMode);
  REQUIRE(rq.basis() == Basis::QuasiMode);
  REQUIRE(std::abs(rq.trace() - Complex(1.0)) < 1e-12);
  REQUIRE(rq.is_physical());

  // Conjugation agrees with rotating the state first.
  const FieldDensityOperator direct =
      FieldDensityOperator::pure(to_quasimode_basis(psi, t));
  REQUIRE(max_abs_diff(rq.matrix(), direct.matrix()) < 1e-12);

  const FieldDensityOperator back = density_to_basis(rq, t, Basis::Mode);
  REQUIRE(max_abs_diff(back.matrix(), rho.matrix()) < 1e-12);

  // Same-basis request is a no-op.
  const FieldDensityOperator same = density_to_basis(rho, t, Basis::Mode);
  REQUIRE(max_abs_diff(same.matrix(), rho.matrix()) == 0.0);
}
