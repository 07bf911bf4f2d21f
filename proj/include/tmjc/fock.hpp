#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tmjc {

using Complex = std::complex<double>;

/// Which pair of bosonic operators the occupation numbers refer to: the
/// physical cavity modes (a1, a2) or the rotated quasi-mode pair (A1, A2).
/// States carry this tag so that a vector built in one basis cannot be fed
/// to an operation expecting the other.
enum class Basis { Mode, QuasiMode };

enum class AtomLevel { Excited, Ground };

inline const char* name_of(Basis b) {
  return b == Basis::Mode ? "mode" : "quasi-mode";
}

inline const char* name_of(AtomLevel a) {
  return a == AtomLevel::Excited ? "excited" : "ground";
}

/// Occupation pair |n1, n2>.
struct ModeFockLabel {
  int n1 = 0;
  int n2 = 0;

  int total() const { return n1 + n2; }
  friend bool operator==(const ModeFockLabel&, const ModeFockLabel&) = default;
};

/// Angular-momentum relabeling j = (n1+n2)/2, m = (n1-n2)/2 of the same
/// state. Both can be half-integral, so they are stored doubled and exact.
struct SchwingerLabel {
  int twice_j = 0;
  int twice_m = 0;

  double j() const { return 0.5 * twice_j; }
  double m() const { return 0.5 * twice_m; }
  friend bool operator==(const SchwingerLabel&, const SchwingerLabel&) = default;
};

inline bool is_valid(const ModeFockLabel& f) { return f.n1 >= 0 && f.n2 >= 0; }

inline bool is_valid(const SchwingerLabel& s) {
  return s.twice_j >= 0 && std::abs(s.twice_m) <= s.twice_j &&
         (s.twice_j - s.twice_m) % 2 == 0;
}

inline SchwingerLabel schwinger_from_fock(const ModeFockLabel& f) {
  if (!is_valid(f))
    throw std::invalid_argument("schwinger_from_fock: negative occupation (" +
                                std::to_string(f.n1) + ", " + std::to_string(f.n2) + ")");
  return {f.n1 + f.n2, f.n1 - f.n2};
}

inline ModeFockLabel fock_from_schwinger(const SchwingerLabel& s) {
  if (!is_valid(s))
    throw std::invalid_argument("fock_from_schwinger: no occupation pair has 2j=" +
                                std::to_string(s.twice_j) + ", 2m=" + std::to_string(s.twice_m));
  return {(s.twice_j + s.twice_m) / 2, (s.twice_j - s.twice_m) / 2};
}

/// Number of labels with n1 + n2 <= cutoff.
inline int fock_dimension(int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("fock_dimension: negative cutoff");
  return (cutoff + 1) * (cutoff + 2) / 2;
}

/// Index of the first label of the block with the given total photon number.
inline int block_offset(int total) { return total * (total + 1) / 2; }

/// Enumeration runs block by block in increasing total photon number; inside
/// a block n2 ascends, i.e. m = (n1-n2)/2 descends from +j to -j.
inline int fock_index(const ModeFockLabel& f) {
  if (!is_valid(f))
    throw std::invalid_argument("fock_index: negative occupation");
  return block_offset(f.total()) + f.n2;
}

inline ModeFockLabel fock_label_at(int index) {
  if (index < 0) throw std::invalid_argument("fock_label_at: negative index");
  int total = 0;
  while (block_offset(total + 1) <= index) ++total;
  const int n2 = index - block_offset(total);
  return {total - n2, n2};
}

/// Two-mode field vector on the truncated space n1 + n2 <= cutoff, tagged
/// with the basis its amplitudes refer to. Not kept normalized: branch maps
/// and measurement arithmetic need sub-normalized vectors.
class TwoModeState {
 public:
  TwoModeState(int cutoff, Basis basis)
      : cutoff_(cutoff), basis_(basis),
        amps_(Eigen::VectorXcd::Zero(fock_dimension(cutoff))) {}

  TwoModeState(int cutoff, Basis basis, Eigen::VectorXcd amplitudes)
      : cutoff_(cutoff), basis_(basis), amps_(std::move(amplitudes)) {
    if (amps_.size() != fock_dimension(cutoff_))
      throw std::invalid_argument("TwoModeState: amplitude vector has size " +
                                  std::to_string(amps_.size()) + ", cutoff " +
                                  std::to_string(cutoff_) + " needs " +
                                  std::to_string(fock_dimension(cutoff_)));
  }

  int cutoff() const { return cutoff_; }
  Basis basis() const { return basis_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

  Complex amplitude(const ModeFockLabel& f) const {
    check_label(f);
    return amps_[fock_index(f)];
  }

  void set_amplitude(const ModeFockLabel& f, Complex value) {
    check_label(f);
    amps_[fock_index(f)] = value;
  }

  /// Amplitudes of the fixed-total-photon block, ordered by descending m.
  Eigen::VectorXcd block(int total_photons) const {
    if (total_photons < 0 || total_photons > cutoff_)
      throw std::invalid_argument("TwoModeState::block: total " +
                                  std::to_string(total_photons) + " outside cutoff " +
                                  std::to_string(cutoff_));
    return amps_.segment(block_offset(total_photons), total_photons + 1);
  }

  double norm() const { return amps_.norm(); }

  TwoModeState normalized() const {
    const double n = norm();
    if (n == 0.0)
      throw std::invalid_argument("TwoModeState::normalized: zero vector");
    return TwoModeState(cutoff_, basis_, amps_ / n);
  }

  /// Largest total photon number carrying a nonzero amplitude, -1 if none.
  int max_occupied_total() const {
    for (int i = static_cast<int>(amps_.size()) - 1; i >= 0; --i)
      if (amps_[i] != 0.0) return fock_label_at(i).total();
    return -1;
  }

  /// Re-embed into a space with a different cutoff. Growing pads with zeros;
  /// shrinking is allowed only when no discarded amplitude is nonzero.
  TwoModeState with_cutoff(int new_cutoff) const {
    if (new_cutoff == cutoff_) return *this;
    if (new_cutoff < max_occupied_total())
      throw std::invalid_argument("TwoModeState::with_cutoff: would drop occupied amplitudes");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(fock_dimension(new_cutoff));
    const int keep = std::min(static_cast<int>(out.size()), static_cast<int>(amps_.size()));
    out.head(keep) = amps_.head(keep);
    return TwoModeState(new_cutoff, basis_, std::move(out));
  }

 private:
  void check_label(const ModeFockLabel& f) const {
    if (!is_valid(f) || f.total() > cutoff_)
      throw std::invalid_argument("TwoModeState: label (" + std::to_string(f.n1) +
                                  ", " + std::to_string(f.n2) + ") outside cutoff " +
                                  std::to_string(cutoff_));
  }

  int cutoff_;
  Basis basis_;
  Eigen::VectorXcd amps_;
};

inline TwoModeState make_basis_state(const ModeFockLabel& f, int cutoff,
                                     Basis basis = Basis::Mode) {
  TwoModeState s(cutoff, basis);
  s.set_amplitude(f, 1.0);
  return s;
}

inline Complex inner_product(const TwoModeState& a, const TwoModeState& b) {
  if (a.basis() != b.basis())
    throw std::invalid_argument("inner_product: mixed bases (" +
                                std::string(name_of(a.basis())) + " vs " +
                                std::string(name_of(b.basis())) + ")");
  if (a.cutoff() != b.cutoff())
    throw std::invalid_argument("inner_product: cutoffs differ");
  return a.amplitudes().dot(b.amplitudes());
}

/// Field density operator on the same truncated space.
class FieldDensityOperator {
 public:
  FieldDensityOperator(int cutoff, Basis basis, Eigen::MatrixXcd matrix)
      : cutoff_(cutoff), basis_(basis), m_(std::move(matrix)) {
    const int dim = fock_dimension(cutoff_);
    if (m_.rows() != dim || m_.cols() != dim)
      throw std::invalid_argument("FieldDensityOperator: matrix is " +
                                  std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                                  ", expected " + std::to_string(dim) + " square");
  }

  static FieldDensityOperator pure(const TwoModeState& psi) {
    return FieldDensityOperator(psi.cutoff(), psi.basis(),
                                psi.amplitudes() * psi.amplitudes().adjoint());
  }

  int cutoff() const { return cutoff_; }
  Basis basis() const { return basis_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  int dimension() const { return static_cast<int>(m_.rows()); }

  Complex trace() const { return m_.trace(); }

  Complex element(const ModeFockLabel& row, const ModeFockLabel& col) const {
    return m_(fock_index(row), fock_index(col));
  }

  double hermiticity_defect() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m_ + m_.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  bool is_physical(double tol = 1e-10) const {
    return hermiticity_defect() <= tol &&
           std::abs(trace() - Complex(1.0)) <= tol &&
           min_eigenvalue() >= -tol;
  }

 private:
  int cutoff_;
  Basis basis_;
  Eigen::MatrixXcd m_;
};

/// Joint atom-field pure state, stored as the pair of field vectors attached
/// to |e> and |g>. Normalization refers to the whole joint vector.
class AtomFieldState {
 public:
  AtomFieldState(TwoModeState excited, TwoModeState ground)
      : excited_(std::move(excited)), ground_(std::move(ground)) {
    if (excited_.cutoff() != ground_.cutoff())
      throw std::invalid_argument("AtomFieldState: parts carry different cutoffs");
    if (excited_.basis() != ground_.basis())
      throw std::invalid_argument("AtomFieldState: parts carry different bases");
  }

  static AtomFieldState product(AtomLevel atom, const TwoModeState& field) {
    TwoModeState zero(field.cutoff(), field.basis());
    return atom == AtomLevel::Excited ? AtomFieldState(field, zero)
                                      : AtomFieldState(zero, field);
  }

  const TwoModeState& excited() const { return excited_; }
  const TwoModeState& ground() const { return ground_; }
  const TwoModeState& part(AtomLevel a) const {
    return a == AtomLevel::Excited ? excited_ : ground_;
  }

  int cutoff() const { return excited_.cutoff(); }
  Basis basis() const { return excited_.basis(); }

  double joint_norm() const {
    return std::sqrt(excited_.amplitudes().squaredNorm() +
                     ground_.amplitudes().squaredNorm());
  }

 private:
  TwoModeState excited_;
  TwoModeState ground_;
};

}  // namespace tmjc
