#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "fock.hpp"
#include "quasimode.hpp"
#include "wigner.hpp"

namespace tmjc {

/// The resonant interaction couples the atom to quasi-mode 1 only, so one
/// step of duration tau (in units of 1/g) splits into four branch maps on
/// the field, labeled by the atomic transition they dress:
///   EE  |e> -> |e>   multiply by cos(tau sqrt(n1+1))
///   GE  |e> -> |g>   raise n1, multiply by -i sin(tau sqrt(n1+1))
///   EG  |g> -> |e>   lower n1, multiply by -i sin(tau sqrt(n1))
///   GG  |g> -> |g>   multiply by cos(tau sqrt(n1))
/// with n1 the quasi-mode-1 occupation of the source state.
enum class Branch { EE, GE, EG, GG };

/// Probability floor below which conditioning on a detection outcome is
/// treated as conditioning on an impossible event.
inline constexpr double kMinDetectionProbability = 1e-14;

/// Apply one branch map to a quasi-mode-basis field vector. The result is
/// intentionally not normalized; branches are pieces of a unitary, not
/// unitaries themselves. GE needs one unit of headroom and throws when the
/// top total-photon block is occupied.
inline TwoModeState apply_branch_quasimode(Branch br, const TwoModeState& s, double tau) {
  if (s.basis() != Basis::QuasiMode)
    throw std::invalid_argument("apply_branch_quasimode: field must be quasi-mode-basis");
  const int cutoff = s.cutoff();
  TwoModeState out(cutoff, Basis::QuasiMode);
  for (int i = 0; i < s.amplitudes().size(); ++i) {
    const Complex amp = s.amplitudes()[i];
    if (amp == 0.0) continue;
    const ModeFockLabel f = fock_label_at(i);
    switch (br) {
      case Branch::EE:
        out.set_amplitude(f, out.amplitude(f) + amp * std::cos(tau * std::sqrt(f.n1 + 1.0)));
        break;
      case Branch::GG:
        out.set_amplitude(f, out.amplitude(f) + amp * std::cos(tau * std::sqrt(double(f.n1))));
        break;
      case Branch::GE: {
        if (f.total() == cutoff)
          throw std::invalid_argument("apply_branch_quasimode: raising out of the truncated space"
                                      " (total " + std::to_string(f.total()) + " at cutoff " +
                                      std::to_string(cutoff) + ")");
        const ModeFockLabel up{f.n1 + 1, f.n2};
        const Complex factor = Complex(0.0, -1.0) * std::sin(tau * std::sqrt(f.n1 + 1.0));
        out.set_amplitude(up, out.amplitude(up) + amp * factor);
        break;
      }
      case Branch::EG: {
        if (f.n1 == 0) break;  // annihilated
        const ModeFockLabel down{f.n1 - 1, f.n2};
        const Complex factor = Complex(0.0, -1.0) * std::sin(tau * std::sqrt(double(f.n1)));
        out.set_amplitude(down, out.amplitude(down) + amp * factor);
        break;
      }
    }
  }
  return out;
}

/// The four branch maps restricted to fixed-total blocks, conjugated into
/// the mode basis. Rows and columns are block indices (m descending). With
/// D_n the rotation block for 2j = n and nu = j - c the source quasi label:
///   C    (2j+1)x(2j+1)  D_j  diag(cos(tau sqrt(j+nu+1))) D_j^+
///   Cbar (2j+1)x(2j+1)  D_j  diag(cos(tau sqrt(j+nu)))   D_j^+
///   S    (2j+2)x(2j+1)  photon added, -i sin(tau sqrt(j+nu+1)) inside
///   Sbar (2j)x(2j+1)    photon removed, -i sin(tau sqrt(j+nu)) inside
struct BranchMatrices {
  int twice_j = 0;
  double tau = 0.0;
  Eigen::MatrixXcd C;
  Eigen::MatrixXcd Cbar;
  Eigen::MatrixXcd S;
  Eigen::MatrixXcd Sbar;
};

inline BranchMatrices branch_matrices(int twice_j, double tau, const BasisTransform& t) {
  if (twice_j < 0)
    throw std::invalid_argument("branch_matrices: negative 2j");
  if (twice_j > t.cutoff())
    throw std::invalid_argument("branch_matrices: 2j = " + std::to_string(twice_j) +
                                " outside transform cutoff " + std::to_string(t.cutoff()));
  const int dim = twice_j + 1;
  const Eigen::MatrixXcd& Dj = t.block(twice_j);
  // The photon-adding branch lands one block higher, which may sit just past
  // the stored blocks; build that one rotation block on the fly.
  const Eigen::MatrixXcd Dup = twice_j + 1 <= t.cutoff()
                                   ? t.block(twice_j + 1)
                                   : wigner_block(twice_j + 1, t.couplings().euler());

  Eigen::VectorXcd keep_e(dim), keep_g(dim), swap_e(dim);
  for (int c = 0; c < dim; ++c) {
    const double up = std::sqrt(twice_j - c + 1.0);    // sqrt(j + nu + 1)
    const double down = std::sqrt(double(twice_j - c));  // sqrt(j + nu)
    keep_e[c] = std::cos(tau * up);
    keep_g[c] = std::cos(tau * down);
    swap_e[c] = Complex(0.0, -1.0) * std::sin(tau * up);
  }

  BranchMatrices out;
  out.twice_j = twice_j;
  out.tau = tau;
  out.C = Dj * keep_e.asDiagonal() * Dj.adjoint();
  out.Cbar = Dj * keep_g.asDiagonal() * Dj.adjoint();
  out.S = Dup.leftCols(dim) * swap_e.asDiagonal() * Dj.adjoint();

  Eigen::MatrixXcd mid = Eigen::MatrixXcd::Zero(dim - 1 < 0 ? 0 : dim - 1, dim);
  for (int c = 0; c + 1 < dim; ++c)
    mid(c, c) = Complex(0.0, -1.0) * std::sin(tau * std::sqrt(double(twice_j - c)));
  if (twice_j == 0) {
    out.Sbar = Eigen::MatrixXcd::Zero(0, 1);
  } else {
    const Eigen::MatrixXcd& Ddown = t.block(twice_j - 1);
    out.Sbar = Ddown * mid * Dj.adjoint();
  }
  return out;
}

/// Assemble one branch as a dense operator on the full truncated mode-basis
/// space of the transform. The raising branch has empty columns at the top
/// block, mirroring the headroom restriction.
inline Eigen::MatrixXcd branch_operator(Branch br, double tau, const BasisTransform& t) {
  const int cutoff = t.cutoff();
  const int dim = fock_dimension(cutoff);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n <= cutoff; ++n) {
    const BranchMatrices bm = branch_matrices(n, tau, t);
    switch (br) {
      case Branch::EE:
        out.block(block_offset(n), block_offset(n), n + 1, n + 1) = bm.C;
        break;
      case Branch::GG:
        out.block(block_offset(n), block_offset(n), n + 1, n + 1) = bm.Cbar;
        break;
      case Branch::GE:
        if (n < cutoff)
          out.block(block_offset(n + 1), block_offset(n), n + 2, n + 1) = bm.S;
        break;
      case Branch::EG:
        if (n > 0)
          out.block(block_offset(n - 1), block_offset(n), n, n + 1) = bm.Sbar;
        break;
    }
  }
  return out;
}

/// One full interaction step on a joint atom-field state: rotate the field
/// into the quasi-mode basis, apply the four branch maps, rotate back if the
/// input was mode-basis. Needs one block of headroom above the excited part,
/// since the atom can deposit a photon.
inline AtomFieldState evolve(const AtomFieldState& s, double tau, const BasisTransform& t) {
  detail::check_transform_covers("evolve", s.excited(), t);
  if (s.excited().max_occupied_total() >= s.cutoff())
    throw std::invalid_argument("evolve: no headroom; the excited part occupies the top "
                                "total-photon block at cutoff " + std::to_string(s.cutoff()));

  const bool started_in_mode = s.basis() == Basis::Mode;
  const AtomFieldState q = started_in_mode ? to_quasimode_basis(s, t) : s;

  const TwoModeState ee = apply_branch_quasimode(Branch::EE, q.excited(), tau);
  const TwoModeState ge = apply_branch_quasimode(Branch::GE, q.excited(), tau);
  const TwoModeState eg = apply_branch_quasimode(Branch::EG, q.ground(), tau);
  const TwoModeState gg = apply_branch_quasimode(Branch::GG, q.ground(), tau);

  AtomFieldState out(
      TwoModeState(s.cutoff(), Basis::QuasiMode, ee.amplitudes() + eg.amplitudes()),
      TwoModeState(s.cutoff(), Basis::QuasiMode, ge.amplitudes() + gg.amplitudes()));
  return started_in_mode ? to_mode_basis(out, t) : out;
}

/// Field density operator after tracing out the atom of a joint pure state.
inline FieldDensityOperator reduced_field_density(const AtomFieldState& s) {
  const Eigen::VectorXcd& e = s.excited().amplitudes();
  const Eigen::VectorXcd& g = s.ground().amplitudes();
  return FieldDensityOperator(s.cutoff(), s.basis(),
                              e * e.adjoint() + g * g.adjoint());
}

struct CollapseResult {
  TwoModeState field;
  double probability = 0.0;
};

/// Project onto one atomic detection outcome and renormalize the field. The
/// arbitrary post-measurement phase is fixed by making the largest amplitude
/// real and positive, so repeated runs compare bitwise. Conditioning on an
/// outcome of probability below the floor throws.
inline CollapseResult atom_detection_collapse(const AtomFieldState& s, AtomLevel outcome) {
  const Eigen::VectorXcd& v = s.part(outcome).amplitudes();
  const double p = v.squaredNorm();
  if (p < kMinDetectionProbability)
    throw std::runtime_error(std::string("atom_detection_collapse: outcome ") +
                             name_of(outcome) + " has probability " + std::to_string(p) +
                             " below the detection floor");
  Eigen::VectorXcd w = v / std::sqrt(p);
  int k = 0;
  double best = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > best) {
      best = std::abs(w[i]);
      k = i;
    }
  }
  w *= std::polar(1.0, -std::arg(w[k]));
  return {TwoModeState(s.cutoff(), s.basis(), std::move(w)), p};
}

/// One interaction step on a field density operator with the atom injected
/// fresh in `atom_in` and traced out (not detected) afterwards. Works on the
/// mode basis; the two branches starting from `atom_in` are applied as Kraus
/// maps.
inline FieldDensityOperator evolve_and_trace_atom(const FieldDensityOperator& rho,
                                                  AtomLevel atom_in, double tau,
                                                  const BasisTransform& t) {
  if (rho.basis() != Basis::Mode)
    throw std::invalid_argument("evolve_and_trace_atom: density must be mode-basis");
  if (rho.cutoff() != t.cutoff())
    throw std::invalid_argument("evolve_and_trace_atom: density and transform cutoffs differ");
  if (atom_in == AtomLevel::Excited) {
    // Raising needs headroom: the top block must be empty.
    const int dim = rho.dimension();
    const int top = block_offset(rho.cutoff());
    const double boundary =
        rho.matrix().block(top, 0, dim - top, dim).cwiseAbs().maxCoeff();
    if (boundary > 0.0)
      throw std::invalid_argument("evolve_and_trace_atom: top total-photon block occupied, "
                                  "no headroom for the photon-adding branch");
    const Eigen::MatrixXcd Bee = branch_operator(Branch::EE, tau, t);
    const Eigen::MatrixXcd Bge = branch_operator(Branch::GE, tau, t);
    return FieldDensityOperator(rho.cutoff(), Basis::Mode,
                                Bee * rho.matrix() * Bee.adjoint() +
                                    Bge * rho.matrix() * Bge.adjoint());
  }
  const Eigen::MatrixXcd Beg = branch_operator(Branch::EG, tau, t);
  const Eigen::MatrixXcd Bgg = branch_operator(Branch::GG, tau, t);
  return FieldDensityOperator(rho.cutoff(), Basis::Mode,
                              Beg * rho.matrix() * Beg.adjoint() +
                                  Bgg * rho.matrix() * Bgg.adjoint());
}

}  // namespace tmjc
