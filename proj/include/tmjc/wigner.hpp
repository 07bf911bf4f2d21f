#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "fock.hpp"

namespace tmjc {

/// z-y-z rotation angles. The full matrix element is
///   D^j_{m'm}(phi, theta, chi) = exp(-i (m' phi + m chi)) d^j_{m'm}(theta)
/// with d the real small-d matrix of the middle y rotation. Sign and
/// ordering conventions are pinned by dmatrix_by_expansion below, which
/// builds the same column straight from the binomial expansion of the
/// rotated creation operators; the two agree element by element.
struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
  double chi = 0.0;
};

/// Normalized coupling pair. Construction fixes g = sqrt(|g1|^2 + |g2|^2),
/// gamma_i = g_i / g, and the Euler angles cos(theta/2) = |gamma1|,
/// sin(theta/2) = |gamma2|, phi = arg(gamma1) - arg(gamma2),
/// chi = arg(gamma1) + arg(gamma2). A vanishing coupling keeps its phase
/// pinned at zero, so the angles stay finite for single-mode couplings.
class CouplingConfig {
 public:
  CouplingConfig(Complex g1, Complex g2) : g1_(g1), g2_(g2) {
    g_ = std::sqrt(std::norm(g1) + std::norm(g2));
    if (g_ == 0.0)
      throw std::invalid_argument("CouplingConfig: both couplings vanish");
    gamma1_ = g1 / g_;
    gamma2_ = g2 / g_;
    const double phi1 = gamma1_ == 0.0 ? 0.0 : std::arg(gamma1_);
    const double phi2 = gamma2_ == 0.0 ? 0.0 : std::arg(gamma2_);
    euler_.theta = 2.0 * std::atan2(std::abs(gamma2_), std::abs(gamma1_));
    euler_.phi = phi1 - phi2;
    euler_.chi = phi1 + phi2;
  }

  static CouplingConfig equal_real() { return CouplingConfig(1.0, 1.0); }

  Complex g1() const { return g1_; }
  Complex g2() const { return g2_; }
  double g() const { return g_; }
  Complex gamma1() const { return gamma1_; }
  Complex gamma2() const { return gamma2_; }
  const EulerAngles& euler() const { return euler_; }

 private:
  Complex g1_, g2_;
  double g_;
  Complex gamma1_, gamma2_;
  EulerAngles euler_;
};

namespace detail {

// Doubles hold n! exactly up to rounding for n <= 170; the direct small-d
// path only ever multiplies four of these, which stays finite for 2j <= 40.
inline double factorial(int n) {
  static const auto table = [] {
    std::array<double, 171> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  if (n < 0 || n >= static_cast<int>(table.size()))
    throw std::invalid_argument("factorial: argument " + std::to_string(n) + " out of range");
  return table[static_cast<std::size_t>(n)];
}

inline double log_factorial(int n) {
  static const auto table = [] {
    std::array<double, 300> t{};
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = std::lgamma(static_cast<double>(i) + 1.0);
    return t;
  }();
  if (n < 0 || n >= static_cast<int>(table.size()))
    throw std::invalid_argument("log_factorial: argument out of range");
  return table[static_cast<std::size_t>(n)];
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 170) return factorial(n) / (factorial(k) * factorial(n - k));
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

// Integer power by repeated multiplication; exact for the small exponents
// used here and avoids std::pow branch cuts for complex bases.
inline Complex cpow(Complex z, int n) {
  Complex out = 1.0;
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

inline void check_d_labels(const char* who, int twice_j, int twice_m_row, int twice_m_col) {
  if (!is_valid(SchwingerLabel{twice_j, twice_m_row}) ||
      !is_valid(SchwingerLabel{twice_j, twice_m_col}))
    throw std::invalid_argument(std::string(who) + ": labels 2j=" + std::to_string(twice_j) +
                                ", 2m'=" + std::to_string(twice_m_row) +
                                ", 2m=" + std::to_string(twice_m_col) + " are inconsistent");
}

}  // namespace detail

/// Small-d matrix element d^j_{m'm}(theta), evaluated by the alternating
/// factorial sum. All arguments are doubled so half-integer j is exact.
/// Supported up to 2j = 128; beyond 2j = 40 the factorial prefactors are
/// combined in log space to dodge overflow.
inline double small_d(int twice_j, int twice_m_row, int twice_m_col, double theta) {
  detail::check_d_labels("small_d", twice_j, twice_m_row, twice_m_col);
  if (twice_j > 128)
    throw std::invalid_argument("small_d: 2j = " + std::to_string(twice_j) + " exceeds 128");

  const int a = (twice_j + twice_m_col) / 2;   // j + m
  const int b = (twice_j - twice_m_col) / 2;   // j - m
  const int ap = (twice_j + twice_m_row) / 2;  // j + m'
  const int bp = (twice_j - twice_m_row) / 2;  // j - m'
  const int dm = (twice_m_row - twice_m_col) / 2;  // m' - m

  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);

  const int s_min = std::max(0, -dm);
  const int s_max = std::min(a, bp);

  double sum = 0.0;
  if (twice_j <= 40) {
    const double pref = std::sqrt(detail::factorial(a) * detail::factorial(b) *
                                  detail::factorial(ap) * detail::factorial(bp));
    for (int k = s_min; k <= s_max; ++k) {
      const double denom = detail::factorial(a - k) * detail::factorial(k) *
                           detail::factorial(dm + k) * detail::factorial(bp - k);
      const double sign = (dm + k) % 2 == 0 ? 1.0 : -1.0;
      sum += sign * (pref / denom) * std::pow(c, twice_j - 2 * k - dm) *
             std::pow(s, dm + 2 * k);
    }
  } else {
    const double lpref = 0.5 * (detail::log_factorial(a) + detail::log_factorial(b) +
                                detail::log_factorial(ap) + detail::log_factorial(bp));
    for (int k = s_min; k <= s_max; ++k) {
      const double ldenom = detail::log_factorial(a - k) + detail::log_factorial(k) +
                            detail::log_factorial(dm + k) + detail::log_factorial(bp - k);
      const double sign = (dm + k) % 2 == 0 ? 1.0 : -1.0;
      sum += sign * std::exp(lpref - ldenom) * std::pow(c, twice_j - 2 * k - dm) *
             std::pow(s, dm + 2 * k);
    }
  }
  return sum;
}

/// Full rotation matrix element D^j_{m'm} for the given z-y-z angles.
inline Complex big_D(int twice_j, int twice_m_row, int twice_m_col,
                     const EulerAngles& e) {
  detail::check_d_labels("big_D", twice_j, twice_m_row, twice_m_col);
  const double phase = -0.5 * (twice_m_row * e.phi + twice_m_col * e.chi);
  return std::polar(1.0, phase) * small_d(twice_j, twice_m_row, twice_m_col, e.theta);
}

/// The (2j+1)x(2j+1) rotation block with rows and columns ordered by
/// descending m (row r holds m' = j - r), matching the in-block ordering of
/// fock_index.
inline Eigen::MatrixXcd wigner_block(int twice_j, const EulerAngles& e) {
  if (twice_j < 0) throw std::invalid_argument("wigner_block: negative 2j");
  const int dim = twice_j + 1;
  Eigen::MatrixXcd out(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int col = 0; col < dim; ++col)
      out(r, col) = big_D(twice_j, twice_j - 2 * r, twice_j - 2 * col, e);
  return out;
}

/// Independent construction of one rotation-matrix column. Writing the state
/// (n1 = j+m, n2 = j-m photons) with rotated creation operators and expanding
/// both binomials gives
///   D^j_{m'm} = sqrt((j+m')!(j-m')!/((j+m)!(j-m)!))
///               sum_p C(j+m,p) C(j-m,q) g1*^p g2*^(j+m-p) (-g2)^q g1^(j-m-q)
/// with q fixed by p through n1' = p + q. No trigonometry enters, so this is
/// a genuinely separate route to the same numbers and anchors every phase and
/// ordering choice made by small_d and big_D. Returned with m' descending.
inline Eigen::VectorXcd dmatrix_by_expansion(int twice_j, int twice_m_col,
                                             const CouplingConfig& cfg) {
  detail::check_d_labels("dmatrix_by_expansion", twice_j, twice_m_col, twice_m_col);
  if (twice_j > 170)
    throw std::invalid_argument("dmatrix_by_expansion: 2j too large for exact factorials");

  const int a = (twice_j + twice_m_col) / 2;  // j + m
  const int b = (twice_j - twice_m_col) / 2;  // j - m
  const Complex g1 = cfg.gamma1();
  const Complex g2 = cfg.gamma2();

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(twice_j + 1);
  const double src = std::sqrt(detail::factorial(a) * detail::factorial(b));
  for (int p = 0; p <= a; ++p) {
    for (int q = 0; q <= b; ++q) {
      const int n1 = p + q;
      const int n2 = (a - p) + (b - q);
      const Complex coef = detail::binomial(a, p) * detail::binomial(b, q) *
                           detail::cpow(std::conj(g1), p) *
                           detail::cpow(std::conj(g2), a - p) *
                           detail::cpow(-g2, q) * detail::cpow(g1, b - q);
      // Row index: m' = (n1 - n2)/2 descending means the row equals n2.
      out[n2] += coef * std::sqrt(detail::factorial(n1) * detail::factorial(n2)) / src;
    }
  }
  return out;
}

}  // namespace tmjc
