#pragma once

// Two-level coin operators for the ramped-coin quantum walk.
//
// Coin rotations use the wave-plate convention: the trig arguments are the
// doubled angles, so rx(phi) and ry(theta) take the plate angles directly.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace qwr {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;

// Tolerance ladder shared by the library and its tests.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kEvolutionTol = 1e-10;
inline constexpr double kSearchTol = 1e-6;

// Which step index the first coin of a walk sees.  OneBased: C(1)..C(T).
// ZeroBased: C(0)..C(T-1).
enum class StepConvention { OneBased, ZeroBased };

inline double max_abs(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// A 2x2 unitary acting on the coin.  Row/column 0 is |+>, 1 is |->.
class CoinOperator {
 public:
  CoinOperator() : m_(Matrix2::Identity()) {}
  explicit CoinOperator(const Matrix2& m) : m_(m) {}
  CoinOperator(Complex a, Complex b, Complex c, Complex d) {
    m_ << a, b, c, d;
  }

  static CoinOperator identity() { return CoinOperator{}; }

  const Matrix2& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  CoinOperator adjoint() const { return CoinOperator{m_.adjoint()}; }
  Complex determinant() const { return m_.determinant(); }

  // max |(M^dagger M - 1)_ij|
  double unitarity_defect() const {
    return max_abs(m_.adjoint() * m_ - Matrix2::Identity());
  }
  bool is_unitary(double tol = kAlgebraTol) const {
    return unitarity_defect() <= tol;
  }

  friend CoinOperator operator*(const CoinOperator& a, const CoinOperator& b) {
    return CoinOperator{Matrix2{a.m_ * b.m_}};
  }

 private:
  Matrix2 m_;
};

inline double max_abs_diff(const CoinOperator& a, const CoinOperator& b) {
  return max_abs(a.matrix() - b.matrix());
}

// Amplitudes on the coin eigenstates |+> (horizontal) and |-> (vertical).
struct CoinVector {
  Complex plus{1.0, 0.0};
  Complex minus{0.0, 0.0};

  double norm_squared() const { return std::norm(plus) + std::norm(minus); }

  CoinVector normalized() const {
    const double n = std::sqrt(norm_squared());
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw std::invalid_argument("coin vector cannot be normalized");
    }
    return {plus / n, minus / n};
  }

  bool is_unit(double tol = kAlgebraTol) const {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

  // (|+> + i|->)/sqrt(2)
  static CoinVector symmetric() {
    const double r = 1.0 / std::sqrt(2.0);
    return {Complex{r, 0.0}, Complex{0.0, r}};
  }
};

inline CoinVector operator*(const CoinOperator& m, const CoinVector& v) {
  return {m(0, 0) * v.plus + m(0, 1) * v.minus,
          m(1, 0) * v.plus + m(1, 1) * v.minus};
}

inline Complex inner(const CoinVector& a, const CoinVector& b) {
  return std::conj(a.plus) * b.plus + std::conj(a.minus) * b.minus;
}

inline CoinOperator rx(double phi) {
  const double c = std::cos(2.0 * phi);
  const double s = std::sin(2.0 * phi);
  return {Complex{c, 0.0}, Complex{0.0, s}, Complex{0.0, s}, Complex{c, 0.0}};
}

inline CoinOperator ry(double theta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  return {Complex{c, 0.0}, Complex{-s, 0.0}, Complex{s, 0.0}, Complex{c, 0.0}};
}

inline void check_step_index(int t, StepConvention convention) {
  const int first = convention == StepConvention::OneBased ? 1 : 0;
  if (t < first) {
    throw std::invalid_argument("step index " + std::to_string(t) +
                                " is before the first step of the convention");
  }
}

// C(t) = rx(omega * t) * ry(theta); ry acts first.
inline CoinOperator coin_at_step(double theta, double omega, int t,
                                 StepConvention convention = StepConvention::OneBased) {
  check_step_index(t, convention);
  return rx(omega * static_cast<double>(t)) * ry(theta);
}

inline CoinOperator compose(const CoinOperator& a, const CoinOperator& b) {
  return a * b;
}

// True when a = lambda * b for some |lambda| = 1, within tol (max norm).
// lambda is fixed by the largest-modulus entry of b.
inline bool equal_up_to_global_phase(const CoinOperator& a, const CoinOperator& b,
                                     double tol) {
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  const double largest = b.matrix().cwiseAbs().maxCoeff(&r, &c);
  if (largest == 0.0) {
    return max_abs(a.matrix()) <= tol;
  }
  Complex lambda = a.matrix()(r, c) / b.matrix()(r, c);
  const double mod = std::abs(lambda);
  lambda = mod > 0.0 ? lambda / mod : Complex{1.0, 0.0};
  return max_abs(a.matrix() - lambda * b.matrix()) <= tol;
}

}  // namespace qwr
