#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "evolution.hpp"
#include "fock.hpp"
#include "quasimode.hpp"
#include "wigner.hpp"

namespace tmjc {

enum class BellSign { Plus, Minus };

inline const char* name_of(BellSign s) { return s == BellSign::Plus ? "plus" : "minus"; }

/// Entangled N-photon target sum_k c_k |N-k, k>, held as the coefficient
/// vector over one fixed-total block (k ascending, i.e. m descending).
class TargetState {
 public:
  TargetState(int n_photons, Eigen::VectorXcd coefficients)
      : n_(n_photons), c_(std::move(coefficients)) {
    if (n_ < 1)
      throw std::invalid_argument("TargetState: needs at least one photon");
    if (c_.size() != n_ + 1)
      throw std::invalid_argument("TargetState: " + std::to_string(n_ + 1) +
                                  " coefficients expected, got " + std::to_string(c_.size()));
    if (std::abs(c_.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("TargetState: coefficients are not normalized");
  }

  /// (|N,0> + sign |0,N>) / sqrt(2).
  static TargetState bell(int n_photons, BellSign sign) {
    if (n_photons < 1)
      throw std::invalid_argument("TargetState::bell: needs at least one photon");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_photons + 1);
    c[0] = 1.0 / std::sqrt(2.0);
    c[n_photons] = (sign == BellSign::Plus ? 1.0 : -1.0) / std::sqrt(2.0);
    return TargetState(n_photons, std::move(c));
  }

  int n_photons() const { return n_; }
  const Eigen::VectorXcd& coefficients() const { return c_; }

  TwoModeState as_state(int cutoff) const {
    if (cutoff < n_)
      throw std::invalid_argument("TargetState::as_state: cutoff below photon number");
    TwoModeState s(cutoff, Basis::Mode);
    for (int k = 0; k <= n_; ++k) s.set_amplitude({n_ - k, k}, c_[k]);
    return s;
  }

 private:
  int n_;
  Eigen::VectorXcd c_;
};

/// Mode-basis labels whose amplitude can reach the N-photon block in a
/// single interaction step: the block itself plus the one the atom feeds.
inline std::vector<ModeFockLabel> contributing_fock_set(int n_photons, AtomLevel atom) {
  if (n_photons < 1)
    throw std::invalid_argument("contributing_fock_set: needs at least one photon");
  const int other = atom == AtomLevel::Excited ? n_photons - 1 : n_photons + 1;
  std::vector<ModeFockLabel> out;
  for (int n : {std::min(other, n_photons), std::max(other, n_photons)})
    for (int n2 = 0; n2 <= n; ++n2) out.push_back({n - n2, n2});
  return out;
}

/// Probability that one step of duration tau leaves the field in the target,
/// whatever the atom comes out as. Only two blocks of the initial field can
/// feed the target block: the same block through the atom-keeping branch and
/// the adjacent one through the atom-flipping branch. The field must carry
/// those blocks, so its cutoff must reach N for an excited atom and N+1 for
/// a ground one.
inline double single_step_probability(const TwoModeState& field, AtomLevel atom,
                                      const TargetState& target, double tau,
                                      const CouplingConfig& couplings) {
  if (field.basis() != Basis::Mode)
    throw std::invalid_argument("single_step_probability: field must be mode-basis");
  const int n = target.n_photons();
  const int need = atom == AtomLevel::Excited ? n : n + 1;
  if (field.cutoff() < need)
    throw std::invalid_argument("single_step_probability: field cutoff " +
                                std::to_string(field.cutoff()) + " below required " +
                                std::to_string(need));
  const BasisTransform t(couplings, need);
  const Eigen::VectorXcd& c = target.coefficients();

  if (atom == AtomLevel::Excited) {
    const BranchMatrices same = branch_matrices(n, tau, t);
    const BranchMatrices below = branch_matrices(n - 1, tau, t);
    return std::norm((c.adjoint() * same.C * field.block(n)).value()) +
           std::norm((c.adjoint() * below.S * field.block(n - 1)).value());
  }
  const BranchMatrices same = branch_matrices(n, tau, t);
  const BranchMatrices above = branch_matrices(n + 1, tau, t);
  return std::norm((c.adjoint() * same.Cbar * field.block(n)).value()) +
         std::norm((c.adjoint() * above.Sbar * field.block(n + 1)).value());
}

struct BellStepProbabilities {
  double same_plus = 0.0;
  double same_minus = 0.0;
  double next_plus = 0.0;
  double next_minus = 0.0;
};

/// Bell-state yields of one step starting from |e; N, 0>: the N-photon Bell
/// pair reached with the atom kept excited, and the (N+1)-photon pair
/// reached when the atom drops its excitation.
inline BellStepProbabilities bell_probabilities_from_N00(int n_photons, double tau,
                                                         const CouplingConfig& couplings) {
  if (n_photons < 1)
    throw std::invalid_argument("bell_probabilities_from_N00: needs at least one photon");
  const int n = n_photons;
  const TwoModeState field = make_basis_state({n, 0}, n + 1);
  BellStepProbabilities out;
  out.same_plus = single_step_probability(field, AtomLevel::Excited,
                                          TargetState::bell(n, BellSign::Plus), tau, couplings);
  out.same_minus = single_step_probability(field, AtomLevel::Excited,
                                           TargetState::bell(n, BellSign::Minus), tau, couplings);
  out.next_plus = single_step_probability(field, AtomLevel::Excited,
                                          TargetState::bell(n + 1, BellSign::Plus), tau, couplings);
  out.next_minus = single_step_probability(field, AtomLevel::Excited,
                                           TargetState::bell(n + 1, BellSign::Minus), tau, couplings);
  return out;
}

/// Field state produced by N rounds of excited-atom injection with a ground
/// detection after each round. Every round climbs one quasi-mode-1 rung, so
/// the result is the top quasi Fock state of the N-photon sector; in the
/// mode basis its amplitudes form the m = +j rotation-matrix column,
///   amplitude(N-k, k) = D^{N/2}_{(N-2k)/2, N/2}.
inline TwoModeState conditional_state(int n_photons, const CouplingConfig& couplings) {
  if (n_photons < 1)
    throw std::invalid_argument("conditional_state: needs at least one photon");
  TwoModeState s(n_photons, Basis::Mode);
  for (int k = 0; k <= n_photons; ++k)
    s.set_amplitude({n_photons - k, k},
                    big_D(n_photons, n_photons - 2 * k, n_photons, couplings.euler()));
  return s;
}

/// |<target|conditional state>|^2; insensitive to the overall phase left
/// free by the detections.
inline double conditional_overlap(const TargetState& target, const CouplingConfig& couplings) {
  const int n = target.n_photons();
  Complex a = 0.0;
  for (int k = 0; k <= n; ++k)
    a += std::conj(target.coefficients()[k]) *
         big_D(n, n - 2 * k, n, couplings.euler());
  return std::norm(a);
}

/// Closed form of the Bell-target overlap: only the two stretched rows of
/// the rotation column enter.
inline double conditional_bell_overlap(int n_photons, BellSign sign,
                                       const CouplingConfig& couplings) {
  if (n_photons < 1)
    throw std::invalid_argument("conditional_bell_overlap: needs at least one photon");
  const Complex top = big_D(n_photons, n_photons, n_photons, couplings.euler());
  const Complex bottom = big_D(n_photons, -n_photons, n_photons, couplings.euler());
  return 0.5 * std::norm(sign == BellSign::Plus ? top + bottom : top - bottom);
}

/// Probability that every one of the rounds detects the atom in the ground
/// state: round l starts with l-1 photons already stored, so its flip
/// probability is sin^2(tau_l sqrt(l)).
inline double conditional_success_probability(std::span<const double> taus) {
  double p = 1.0;
  for (std::size_t l = 1; l <= taus.size(); ++l) {
    const double s = std::sin(taus[l - 1] * std::sqrt(static_cast<double>(l)));
    p *= s * s;
  }
  return p;
}

/// Interaction times tau_l = pi / (2 sqrt(l)) that make every ground
/// detection certain, so the conditional scheme succeeds with probability 1.
inline std::vector<double> certain_detection_taus(int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("certain_detection_taus: negative step count");
  std::vector<double> taus(static_cast<std::size_t>(n_steps));
  for (int l = 1; l <= n_steps; ++l)
    taus[static_cast<std::size_t>(l - 1)] =
        std::numbers::pi / (2.0 * std::sqrt(static_cast<double>(l)));
  return taus;
}

struct ConditionalRun {
  TwoModeState field;
  double success_probability = 1.0;
};

/// The conditional scheme run as an actual sequence of joint evolutions and
/// ground detections, not through the closed form. Needs every detection to
/// have nonvanishing probability.
inline ConditionalRun run_conditional_sequence(std::span<const double> taus,
                                               const CouplingConfig& couplings) {
  const int n = static_cast<int>(taus.size());
  TwoModeState field = make_basis_state({0, 0}, n, Basis::Mode);
  if (n == 0) return {std::move(field), 1.0};
  const BasisTransform t(couplings, n);
  double prob = 1.0;
  for (const double tau : taus) {
    const AtomFieldState joint =
        evolve(AtomFieldState::product(AtomLevel::Excited, field), tau, t);
    CollapseResult c = atom_detection_collapse(joint, AtomLevel::Ground);
    field = std::move(c.field);
    prob *= c.probability;
  }
  return {std::move(field), prob};
}

/// Sector weights of the non-conditional scheme, where atoms are injected
/// excited but never detected. The field stays diagonal across fixed-total
/// sectors, so n steps are fully described by the probability of holding 2j
/// photons. Indexing is by 2j = 0 .. n.
struct NonConditionalWeights {
  std::vector<double> tau_list;
  std::vector<double> weights;

  int steps() const { return static_cast<int>(tau_list.size()); }

  double weight(int twice_j) const {
    if (twice_j < 0 || twice_j >= static_cast<int>(weights.size()))
      throw std::invalid_argument("NonConditionalWeights::weight: 2j = " +
                                  std::to_string(twice_j) + " outside 0.." +
                                  std::to_string(weights.size() - 1));
    return weights[static_cast<std::size_t>(twice_j)];
  }

  double sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
};

/// One-dimensional recursion over the sector weights: a step either leaves
/// the photon count alone, with the cosine of the injected atom's rotation,
/// or raises it by one with the matching sine,
///   p_j(n) = cos^2(tau_n sqrt(2j+1)) p_j(n-1) + sin^2(tau_n sqrt(2j)) p_{j-1/2}(n-1).
inline NonConditionalWeights nonconditional_weights(std::span<const double> taus) {
  if (taus.empty())
    throw std::invalid_argument("nonconditional_weights: at least one step required");
  std::vector<double> p{1.0};
  for (const double tau : taus) {
    const int prev = static_cast<int>(p.size());
    std::vector<double> q(static_cast<std::size_t>(prev) + 1, 0.0);
    for (int twoj = 0; twoj <= prev; ++twoj) {
      double w = 0.0;
      if (twoj < prev) {
        const double c = std::cos(tau * std::sqrt(twoj + 1.0));
        w += c * c * p[static_cast<std::size_t>(twoj)];
      }
      if (twoj >= 1 && twoj - 1 < prev) {
        const double s = std::sin(tau * std::sqrt(static_cast<double>(twoj)));
        w += s * s * p[static_cast<std::size_t>(twoj) - 1];
      }
      q[static_cast<std::size_t>(twoj)] = w;
    }
    p = std::move(q);
  }
  return {std::vector<double>(taus.begin(), taus.end()), std::move(p)};
}

/// Probability that projecting the non-conditional field after all steps
/// finds the target: the weight of its photon-number sector times the
/// overlap with that sector's pure state. Unreachable targets (more photons
/// than steps) are rejected rather than reported as zero.
inline double nonconditional_probability(const TargetState& target,
                                         std::span<const double> taus,
                                         const CouplingConfig& couplings) {
  const int n = target.n_photons();
  if (static_cast<int>(taus.size()) < n)
    throw std::invalid_argument("nonconditional_probability: " + std::to_string(taus.size()) +
                                " steps cannot store " + std::to_string(n) + " photons");
  return nonconditional_weights(taus).weight(n) * conditional_overlap(target, couplings);
}

/// The non-conditional scheme run as density-operator evolution with the
/// atom traced out after each injection, for cross-checking the recursion.
inline FieldDensityOperator simulate_nonconditional_density(std::span<const double> taus,
                                                            const CouplingConfig& couplings,
                                                            int cutoff) {
  const int n = static_cast<int>(taus.size());
  if (cutoff < n)
    throw std::invalid_argument("simulate_nonconditional_density: cutoff " +
                                std::to_string(cutoff) + " leaves no headroom for " +
                                std::to_string(n) + " steps");
  FieldDensityOperator rho =
      FieldDensityOperator::pure(make_basis_state({0, 0}, cutoff, Basis::Mode));
  if (n == 0) return rho;
  const BasisTransform t(couplings, cutoff);
  for (const double tau : taus)
    rho = evolve_and_trace_atom(rho, AtomLevel::Excited, tau, t);
  return rho;
}

}  // namespace tmjc
