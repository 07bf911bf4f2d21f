#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "evolution.hpp"
#include "fock.hpp"
#include "quasimode.hpp"
#include "wigner.hpp"

namespace tmjc {

/// Brute-force reference: the Hamiltonian assembled element by element in
/// the bare atom + mode-Fock product basis and exponentiated numerically.
/// It never touches the quasi-mode machinery, so agreement with `evolve` is
/// meaningful. Joint indexing stacks the excited field vector on top of the
/// ground one. Energies are in units of hbar g; on resonance the free part
/// is a constant within each excitation sector and defaults to off.
class TruncatedHamiltonian {
 public:
  TruncatedHamiltonian(const CouplingConfig& couplings, int cutoff,
                       double omega_over_g = 0.0)
      : couplings_(couplings), cutoff_(cutoff), omega_over_g_(omega_over_g) {
    if (cutoff < 1)
      throw std::invalid_argument("TruncatedHamiltonian: cutoff must be at least 1");
    const int f = fock_dimension(cutoff);
    h_ = Eigen::MatrixXcd::Zero(2 * f, 2 * f);
    const Complex g1 = couplings.gamma1();
    const Complex g2 = couplings.gamma2();
    for (int i = 0; i < f; ++i) {
      const ModeFockLabel lab = fock_label_at(i);
      // sigma^- a1^+ and sigma^- a2^+ acting on |e; n1, n2>, truncated when
      // the created photon would leave the space.
      if (lab.total() + 1 <= cutoff) {
        h_(f + fock_index({lab.n1 + 1, lab.n2}), i) +=
            std::conj(g1) * std::sqrt(lab.n1 + 1.0);
        h_(f + fock_index({lab.n1, lab.n2 + 1}), i) +=
            std::conj(g2) * std::sqrt(lab.n2 + 1.0);
      }
      // sigma^+ a1 and sigma^+ a2 acting on |g; n1, n2>.
      if (lab.n1 > 0)
        h_(fock_index({lab.n1 - 1, lab.n2}), f + i) += g1 * std::sqrt(double(lab.n1));
      if (lab.n2 > 0)
        h_(fock_index({lab.n1, lab.n2 - 1}), f + i) += g2 * std::sqrt(double(lab.n2));
      if (omega_over_g != 0.0) {
        h_(i, i) += omega_over_g * (1.0 + lab.total());
        h_(f + i, f + i) += omega_over_g * double(lab.total());
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("TruncatedHamiltonian: eigendecomposition failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
  }

  const CouplingConfig& couplings() const { return couplings_; }
  int cutoff() const { return cutoff_; }
  double omega_over_g() const { return omega_over_g_; }
  int dimension() const { return static_cast<int>(h_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return h_; }
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Eigen::MatrixXcd& eigenvectors() const { return evecs_; }

 private:
  CouplingConfig couplings_;
  int cutoff_;
  double omega_over_g_;
  Eigen::MatrixXcd h_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
};

inline TruncatedHamiltonian build_hamiltonian(const CouplingConfig& couplings, int cutoff,
                                              double omega_over_g = 0.0) {
  return TruncatedHamiltonian(couplings, cutoff, omega_over_g);
}

/// exp(-i H tau) applied through the cached eigendecomposition.
inline AtomFieldState evolve_exact(const AtomFieldState& s, double tau,
                                   const TruncatedHamiltonian& h) {
  if (s.basis() != Basis::Mode)
    throw std::invalid_argument("evolve_exact: joint state must be mode-basis");
  if (s.cutoff() != h.cutoff())
    throw std::invalid_argument("evolve_exact: state cutoff " + std::to_string(s.cutoff()) +
                                " does not match Hamiltonian cutoff " +
                                std::to_string(h.cutoff()));
  const int f = fock_dimension(s.cutoff());
  Eigen::VectorXcd joint(2 * f);
  joint.head(f) = s.excited().amplitudes();
  joint.tail(f) = s.ground().amplitudes();

  const Eigen::VectorXcd modes = h.eigenvectors().adjoint() * joint;
  Eigen::VectorXcd phased(modes.size());
  for (int k = 0; k < modes.size(); ++k)
    phased[k] = modes[k] * std::polar(1.0, -h.eigenvalues()[k] * tau);
  const Eigen::VectorXcd evolved = h.eigenvectors() * phased;

  return AtomFieldState(TwoModeState(s.cutoff(), Basis::Mode, evolved.head(f)),
                        TwoModeState(s.cutoff(), Basis::Mode, evolved.tail(f)));
}

struct CrosscheckResult {
  double max_deviation = 0.0;
  ModeFockLabel worst_label;
  AtomLevel worst_part = AtomLevel::Excited;
};

/// Evolve the same initial joint state once through the closed-form branch
/// pipeline and once through the numerically exponentiated Hamiltonian, and
/// report the largest amplitude discrepancy after aligning global phase.
/// The closed-form side runs with one extra block of cutoff so it never hits
/// the headroom wall; amplitudes it places beyond the oracle's space count
/// toward the deviation, which makes an undersized oracle cutoff visible
/// instead of silently agreed with.
inline CrosscheckResult crosscheck(const AtomFieldState& initial, double tau,
                                   const CouplingConfig& couplings, int cutoff) {
  if (initial.basis() != Basis::Mode)
    throw std::invalid_argument("crosscheck: initial state must be mode-basis");
  if (initial.excited().max_occupied_total() > cutoff ||
      initial.ground().max_occupied_total() > cutoff)
    throw std::invalid_argument("crosscheck: initial state does not fit the oracle cutoff");

  const AtomFieldState start_o(initial.excited().with_cutoff(cutoff),
                               initial.ground().with_cutoff(cutoff));
  const TruncatedHamiltonian h(couplings, cutoff);
  const AtomFieldState psi_o = evolve_exact(start_o, tau, h);

  const AtomFieldState start_a(initial.excited().with_cutoff(cutoff + 1),
                               initial.ground().with_cutoff(cutoff + 1));
  const BasisTransform t(couplings, cutoff + 1);
  const AtomFieldState psi_a = evolve(start_a, tau, t);

  const int f = fock_dimension(cutoff);
  Complex overlap = psi_o.excited().amplitudes().dot(psi_a.excited().amplitudes().head(f)) +
                    psi_o.ground().amplitudes().dot(psi_a.ground().amplitudes().head(f));
  const Complex phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);

  CrosscheckResult res;
  for (AtomLevel part : {AtomLevel::Excited, AtomLevel::Ground}) {
    const Eigen::VectorXcd& va = psi_a.part(part).amplitudes();
    const Eigen::VectorXcd& vo = psi_o.part(part).amplitudes();
    for (int i = 0; i < va.size(); ++i) {
      const Complex reference = i < f ? vo[i] : Complex(0.0);
      const double dev = std::abs(va[i] / phase - reference);
      if (dev > res.max_deviation) {
        res.max_deviation = dev;
        res.worst_label = fock_label_at(i);
        res.worst_part = part;
      }
    }
  }
  return res;
}

}  // namespace tmjc
