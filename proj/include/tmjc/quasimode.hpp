#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fock.hpp"
#include "wigner.hpp"

namespace tmjc {

/// Unitary change of basis between mode and quasi-mode Fock states. Total
/// photon number is shared by both ladders, so the transform is block
/// diagonal over the fixed-total blocks; block n is the rotation matrix for
/// 2j = n. Blocks are built once at construction.
class BasisTransform {
 public:
  BasisTransform(const CouplingConfig& couplings, int cutoff)
      : couplings_(couplings), cutoff_(cutoff) {
    if (cutoff < 0) throw std::invalid_argument("BasisTransform: negative cutoff");
    blocks_.reserve(static_cast<std::size_t>(cutoff) + 1);
    for (int n = 0; n <= cutoff; ++n)
      blocks_.push_back(wigner_block(n, couplings.euler()));
  }

  const CouplingConfig& couplings() const { return couplings_; }
  int cutoff() const { return cutoff_; }

  /// Rotation block for one fixed-total sector, indexed by 2j = total.
  const Eigen::MatrixXcd& block(int twice_j) const {
    if (twice_j < 0 || twice_j > cutoff_)
      throw std::invalid_argument("BasisTransform::block: 2j = " + std::to_string(twice_j) +
                                  " outside cutoff " + std::to_string(cutoff_));
    return blocks_[static_cast<std::size_t>(twice_j)];
  }

  /// Dense block-diagonal matrix on the full truncated space, up to the
  /// requested cutoff (defaults to the transform's own).
  Eigen::MatrixXcd full_matrix(int up_to_cutoff = -1) const {
    const int c = up_to_cutoff < 0 ? cutoff_ : up_to_cutoff;
    if (c > cutoff_)
      throw std::invalid_argument("BasisTransform::full_matrix: cutoff exceeds stored blocks");
    const int dim = fock_dimension(c);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n <= c; ++n)
      out.block(block_offset(n), block_offset(n), n + 1, n + 1) = blocks_[n];
    return out;
  }

 private:
  CouplingConfig couplings_;
  int cutoff_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

inline BasisTransform build_transform(const CouplingConfig& couplings, int cutoff) {
  return BasisTransform(couplings, cutoff);
}

namespace detail {

inline void check_transform_covers(const char* who, const TwoModeState& s,
                                   const BasisTransform& t) {
  if (s.cutoff() > t.cutoff())
    throw std::invalid_argument(std::string(who) + ": state cutoff " +
                                std::to_string(s.cutoff()) + " exceeds transform cutoff " +
                                std::to_string(t.cutoff()));
}

}  // namespace detail

/// Rewrite quasi-mode amplitudes in the mode basis: block n picks up the
/// rotation block, per-column expansion of each quasi Fock state.
inline TwoModeState to_mode_basis(const TwoModeState& s, const BasisTransform& t) {
  if (s.basis() != Basis::QuasiMode)
    throw std::invalid_argument("to_mode_basis: state is already mode-basis");
  detail::check_transform_covers("to_mode_basis", s, t);
  Eigen::VectorXcd out(s.amplitudes().size());
  for (int n = 0; n <= s.cutoff(); ++n)
    out.segment(block_offset(n), n + 1) =
        t.block(n) * s.amplitudes().segment(block_offset(n), n + 1);
  return TwoModeState(s.cutoff(), Basis::Mode, std::move(out));
}

/// Inverse rewrite; the blocks are unitary so the adjoint inverts them.
inline TwoModeState to_quasimode_basis(const TwoModeState& s, const BasisTransform& t) {
  if (s.basis() != Basis::Mode)
    throw std::invalid_argument("to_quasimode_basis: state is already quasi-mode-basis");
  detail::check_transform_covers("to_quasimode_basis", s, t);
  Eigen::VectorXcd out(s.amplitudes().size());
  for (int n = 0; n <= s.cutoff(); ++n)
    out.segment(block_offset(n), n + 1) =
        t.block(n).adjoint() * s.amplitudes().segment(block_offset(n), n + 1);
  return TwoModeState(s.cutoff(), Basis::QuasiMode, std::move(out));
}

inline AtomFieldState to_mode_basis(const AtomFieldState& s, const BasisTransform& t) {
  return AtomFieldState(to_mode_basis(s.excited(), t), to_mode_basis(s.ground(), t));
}

inline AtomFieldState to_quasimode_basis(const AtomFieldState& s, const BasisTransform& t) {
  return AtomFieldState(to_quasimode_basis(s.excited(), t),
                        to_quasimode_basis(s.ground(), t));
}

/// Conjugate a density operator into the requested basis (no-op when it is
/// already there).
inline FieldDensityOperator density_to_basis(const FieldDensityOperator& rho,
                                             const BasisTransform& t, Basis target) {
  if (rho.basis() == target)
    return rho;
  if (rho.cutoff() > t.cutoff())
    throw std::invalid_argument("density_to_basis: density cutoff exceeds transform cutoff");
  const Eigen::MatrixXcd T = t.full_matrix(rho.cutoff());
  if (target == Basis::Mode)
    return FieldDensityOperator(rho.cutoff(), target, T * rho.matrix() * T.adjoint());
  return FieldDensityOperator(rho.cutoff(), target, T.adjoint() * rho.matrix() * T);
}

}  // namespace tmjc
