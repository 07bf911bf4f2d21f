#include <catch2/catch_amalgamated.hpp>

#include <tmjc/fock.hpp>

#include "test_support.hpp"

using namespace tmjc;

TEST_CASE("occupation and angular-momentum labels convert both ways") {
  REQUIRE(schwinger_from_fock({2, 0}) == SchwingerLabel{2, 2});
  REQUIRE(schwinger_from_fock({0, 2}) == SchwingerLabel{2, -2});
  REQUIRE(schwinger_from_fock({1, 0}) == SchwingerLabel{1, 1});
  REQUIRE(schwinger_from_fock({3, 1}) == SchwingerLabel{4, 2});
  REQUIRE(fock_from_schwinger({4, 2}) == ModeFockLabel{3, 1});

  for (int n1 = 0; n1 <= 12; ++n1)
    for (int n2 = 0; n2 + n1 <= 12; ++n2) {
      const ModeFockLabel f{n1, n2};
      REQUIRE(fock_from_schwinger(schwinger_from_fock(f)) == f);
    }
}

TEST_CASE("inconsistent labels are rejected") {
  REQUIRE_FALSE(is_valid(SchwingerLabel{2, 1}));   // parity mismatch
  REQUIRE_FALSE(is_valid(SchwingerLabel{2, -4}));  // |m| > j
  REQUIRE_FALSE(is_valid(ModeFockLabel{-1, 0}));
  REQUIRE_THROWS_AS(fock_from_schwinger({2, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(schwinger_from_fock({-1, 0}), std::invalid_argument);
}

TEST_CASE("enumeration is dense, block-ordered, and invertible") {
  REQUIRE(fock_dimension(0) == 1);
  REQUIRE(fock_dimension(1) == 3);
  REQUIRE(fock_dimension(4) == 15);

  REQUIRE(fock_index({0, 0}) == 0);
  REQUIRE(fock_index({1, 0}) == 1);
  REQUIRE(fock_index({0, 1}) == 2);
  REQUIRE(fock_index({2, 0}) == 3);

  for (int i = 0; i < fock_dimension(12); ++i)
    REQUIRE(fock_index(fock_label_at(i)) == i);

  // Within a block the index ascends with n2, i.e. m descends.
  for (int n = 0; n <= 8; ++n)
    for (int n2 = 0; n2 < n; ++n2)
      REQUIRE(fock_index({n - n2 - 1, n2 + 1}) == fock_index({n - n2, n2}) + 1);
}

TEST_CASE("state vectors guard their labels and expose blocks") {
  TwoModeState s(3, Basis::Mode);
  REQUIRE(s.norm() == 0.0);
  s.set_amplitude({2, 1}, Complex(0.0, 0.5));
  REQUIRE(s.amplitude({2, 1}) == Complex(0.0, 0.5));
  REQUIRE(s.max_occupied_total() == 3);
  REQUIRE_THROWS_AS(s.amplitude({4, 0}), std::invalid_argument);
  REQUIRE_THROWS_AS(s.set_amplitude({2, 2}, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(s.block(4), std::invalid_argument);

  const Eigen::VectorXcd b3 = s.block(3);
  REQUIRE(b3.size() == 4);
  REQUIRE(b3[1] == Complex(0.0, 0.5));

  REQUIRE_THROWS_AS(TwoModeState(2, Basis::Mode, Eigen::VectorXcd::Zero(5)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(TwoModeState(3, Basis::Mode).normalized(), std::invalid_argument);
}

TEST_CASE("re-embedding into another cutoff keeps amplitudes put") {
  TwoModeState s = make_basis_state({1, 1}, 2);
  const TwoModeState grown = s.with_cutoff(5);
  REQUIRE(grown.cutoff() == 5);
  REQUIRE(grown.amplitude({1, 1}) == Complex(1.0));
  REQUIRE(grown.norm() == 1.0);
  const TwoModeState back = grown.with_cutoff(2);
  REQUIRE(back.amplitudes() == s.amplitudes());
  REQUIRE_THROWS_AS(grown.with_cutoff(1), std::invalid_argument);
}

TEST_CASE("basis states are orthonormal under the inner product") {
  const int cutoff = 4;
  for (int i = 0; i < fock_dimension(cutoff); ++i)
    for (int k = 0; k < fock_dimension(cutoff); ++k) {
      const Complex ip = inner_product(make_basis_state(fock_label_at(i), cutoff),
                                       make_basis_state(fock_label_at(k), cutoff));
      REQUIRE(ip == (i == k ? Complex(1.0) : Complex(0.0)));
    }

  REQUIRE_THROWS_AS(inner_product(make_basis_state({0, 0}, 2, Basis::Mode),
                                  make_basis_state({0, 0}, 2, Basis::QuasiMode)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(inner_product(make_basis_state({0, 0}, 2),
                                  make_basis_state({0, 0}, 3)),
                    std::invalid_argument);
}

TEST_CASE("inner product conjugates its left argument") {
  TwoModeState a(1, Basis::Mode);
  a.set_amplitude({1, 0}, Complex(0.0, 1.0));
  TwoModeState b(1, Basis::Mode);
  b.set_amplitude({1, 0}, Complex(1.0, 0.0));
  REQUIRE(inner_product(a, b) == Complex(0.0, -1.0));
}

TEST_CASE("joint states keep their parts aligned") {
  const TwoModeState field = make_basis_state({1, 0}, 3);
  const AtomFieldState s = AtomFieldState::product(AtomLevel::Excited, field);
  REQUIRE(s.excited().amplitude({1, 0}) == Complex(1.0));
  REQUIRE(s.ground().norm() == 0.0);
  REQUIRE(s.part(AtomLevel::Ground).norm() == 0.0);
  REQUIRE(s.joint_norm() == 1.0);

  REQUIRE_THROWS_AS(AtomFieldState(TwoModeState(2, Basis::Mode), TwoModeState(3, Basis::Mode)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(AtomFieldState(TwoModeState(2, Basis::Mode),
                                   TwoModeState(2, Basis::QuasiMode)),
                    std::invalid_argument);
}

TEST_CASE("pure density operators behave like projectors") {
  std::mt19937_64 gen(71);
  const TwoModeState psi = test_support::random_state(gen, 3, 3);
  const FieldDensityOperator rho = FieldDensityOperator::pure(psi);
  REQUIRE(std::abs(rho.trace() - Complex(1.0)) < 1e-12);
  REQUIRE(rho.hermiticity_defect() < 1e-14);
  REQUIRE(rho.min_eigenvalue() > -1e-12);
  REQUIRE(rho.is_physical());
  REQUIRE(std::abs((rho.matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff()) < 1e-12);

  const FieldDensityOperator basis_rho =
      FieldDensityOperator::pure(make_basis_state({1, 1}, 2));
  REQUIRE(basis_rho.element({1, 1}, {1, 1}) == Complex(1.0));
  REQUIRE(std::abs(basis_rho.trace() - Complex(1.0)) == 0.0);

  REQUIRE_THROWS_AS(FieldDensityOperator(2, Basis::Mode, Eigen::MatrixXcd::Zero(3, 3)),
                    std::invalid_argument);
}
