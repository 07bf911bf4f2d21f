#pragma once

#include <random>

#include <Eigen/Dense>

#include <tmjc/tmjc.hpp>

namespace test_support {

using tmjc::Complex;

inline tmjc::CouplingConfig random_couplings(std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Complex g1(n(gen), n(gen));
  Complex g2(n(gen), n(gen));
  if (std::abs(g1) + std::abs(g2) < 1e-6) g1 = 1.0;
  return tmjc::CouplingConfig(g1, g2);
}

inline tmjc::TwoModeState random_state(std::mt19937_64& gen, int cutoff, int max_total,
                                       tmjc::Basis basis = tmjc::Basis::Mode) {
  std::normal_distribution<double> n(0.0, 1.0);
  tmjc::TwoModeState s(cutoff, basis);
  for (int i = 0; i < tmjc::fock_dimension(max_total); ++i)
    s.set_amplitude(tmjc::fock_label_at(i), Complex(n(gen), n(gen)));
  return s.normalized();
}

inline double phase_aligned_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const Complex overlap = b.dot(a);
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a / phase - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace test_support
