#pragma once

// Walker (x) coin states on a finite window of the integer line.
//
// Both representations index the joint basis as 2 * (x - min_site) + c with
// c = 0 for |+> and c = 1 for |->.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwrevival/coin_algebra.hpp"

namespace qwr {

inline constexpr int kPlus = 0;
inline constexpr int kMinus = 1;

class Lattice {
 public:
  Lattice(int min_site, int max_site) : min_(min_site), max_(max_site) {
    if (min_site > 0 || max_site < 0) {
      throw std::invalid_argument("lattice [" + std::to_string(min_site) + ", " +
                                  std::to_string(max_site) +
                                  "] does not contain the origin");
    }
  }

  // [-radius, radius]
  static Lattice centered(int radius) { return {-radius, radius}; }

  // Default window for a T-step walk from the origin: [-T-2, T+2].
  static Lattice for_walk(int steps) { return centered(steps + 2); }

  int min_site() const { return min_; }
  int max_site() const { return max_; }
  std::size_t size() const { return static_cast<std::size_t>(max_ - min_ + 1); }
  std::size_t dimension() const { return 2 * size(); }
  bool contains(int x) const { return x >= min_ && x <= max_; }

  std::size_t site_index(int x) const {
    if (!contains(x)) {
      throw std::out_of_range("site " + std::to_string(x) + " outside lattice");
    }
    return static_cast<std::size_t>(x - min_);
  }
  std::size_t basis_index(int x, int coin) const { return 2 * site_index(x) + coin; }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  int min_;
  int max_;
};

class WalkerCoinPureState {
 public:
  explicit WalkerCoinPureState(Lattice lattice)
      : lattice_(lattice), amps_(lattice.dimension(), Complex{}) {}
  WalkerCoinPureState(Lattice lattice, std::vector<Complex> amplitudes)
      : lattice_(lattice), amps_(std::move(amplitudes)) {
    if (amps_.size() != lattice_.dimension()) {
      throw std::invalid_argument("amplitude count does not match lattice");
    }
  }

  const Lattice& lattice() const { return lattice_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  std::vector<Complex>& amplitudes() { return amps_; }

  Complex amplitude(int x, int coin) const { return amps_[lattice_.basis_index(x, coin)]; }
  Complex& amplitude(int x, int coin) { return amps_[lattice_.basis_index(x, coin)]; }

  CoinVector coin_at(int x) const { return {amplitude(x, kPlus), amplitude(x, kMinus)}; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  Eigen::VectorXcd as_vector() const {
    return Eigen::Map<const Eigen::VectorXcd>(amps_.data(),
                                              static_cast<Eigen::Index>(amps_.size()));
  }

 private:
  Lattice lattice_;
  std::vector<Complex> amps_;
};

class WalkerCoinDensityMatrix {
 public:
  WalkerCoinDensityMatrix(Lattice lattice, Eigen::MatrixXcd matrix)
      : lattice_(lattice), rho_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(lattice_.dimension());
    if (rho_.rows() != d || rho_.cols() != d) {
      throw std::invalid_argument("density matrix dimension does not match lattice");
    }
  }

  static WalkerCoinDensityMatrix from_pure(const WalkerCoinPureState& psi) {
    const Eigen::VectorXcd v = psi.as_vector();
    return {psi.lattice(), v * v.adjoint()};
  }

  const Lattice& lattice() const { return lattice_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  Eigen::MatrixXcd& matrix() { return rho_; }

  Complex trace() const { return rho_.trace(); }
  double hermiticity_defect() const { return max_abs(rho_ - rho_.adjoint()); }

  double min_eigenvalue() const {
    const Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

 private:
  Lattice lattice_;
  Eigen::MatrixXcd rho_;
};

class PositionDistribution {
 public:
  PositionDistribution(Lattice lattice, std::vector<double> probs)
      : lattice_(lattice), probs_(std::move(probs)) {
    if (probs_.size() != lattice_.size()) {
      throw std::invalid_argument("probability count does not match lattice");
    }
  }

  // All mass at x.
  static PositionDistribution delta(Lattice lattice, int x) {
    std::vector<double> p(lattice.size(), 0.0);
    p[lattice.site_index(x)] = 1.0;
    return {lattice, std::move(p)};
  }

  const Lattice& lattice() const { return lattice_; }
  const std::vector<double>& probabilities() const { return probs_; }
  double at(int x) const { return probs_[lattice_.site_index(x)]; }

  double total() const {
    double s = 0.0;
    for (double p : probs_) s += p;
    return s;
  }

  // Mass away from the origin, summed directly (no 1 - p0 cancellation).
  double off_origin_mass() const {
    double s = 0.0;
    for (int x = lattice_.min_site(); x <= lattice_.max_site(); ++x) {
      if (x != 0) s += at(x);
    }
    return s;
  }

 private:
  Lattice lattice_;
  std::vector<double> probs_;
};

struct CoinDensityMatrix {
  Matrix2 matrix = Matrix2::Zero();

  static CoinDensityMatrix pure(const CoinVector& v) {
    Eigen::Vector2cd k{v.plus, v.minus};
    return {k * k.adjoint()};
  }
  Complex trace() const { return matrix.trace(); }
};

inline WalkerCoinPureState initial_state(const Lattice& lattice, const CoinVector& coin) {
  if (!coin.is_unit()) {
    throw std::invalid_argument("initial coin vector is not normalized");
  }
  WalkerCoinPureState s(lattice);
  s.amplitude(0, kPlus) = coin.plus;
  s.amplitude(0, kMinus) = coin.minus;
  return s;
}

inline PositionDistribution position_distribution(const WalkerCoinPureState& s) {
  const auto& a = s.amplitudes();
  std::vector<double> p(s.lattice().size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::norm(a[2 * i]) + std::norm(a[2 * i + 1]);
  }
  return {s.lattice(), std::move(p)};
}

inline PositionDistribution position_distribution(const WalkerCoinDensityMatrix& rho) {
  const auto& m = rho.matrix();
  std::vector<double> p(rho.lattice().size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(2 * i);
    p[i] = m(k, k).real() + m(k + 1, k + 1).real();
  }
  return {rho.lattice(), std::move(p)};
}

// Partial trace over the walker.
inline CoinDensityMatrix reduced_coin_state(const WalkerCoinPureState& s) {
  const auto& a = s.amplitudes();
  Matrix2 r = Matrix2::Zero();
  for (std::size_t i = 0; i < s.lattice().size(); ++i) {
    const Complex p = a[2 * i];
    const Complex m = a[2 * i + 1];
    r(0, 0) += p * std::conj(p);
    r(0, 1) += p * std::conj(m);
    r(1, 0) += m * std::conj(p);
    r(1, 1) += m * std::conj(m);
  }
  return {r};
}

inline CoinDensityMatrix reduced_coin_state(const WalkerCoinDensityMatrix& rho) {
  const auto& m = rho.matrix();
  Matrix2 r = Matrix2::Zero();
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(rho.lattice().size()); ++i) {
    r += m.block<2, 2>(2 * i, 2 * i);
  }
  return {r};
}

// Partial trace over the coin; index (x - min_site).
inline Eigen::MatrixXcd reduced_walker_state(const WalkerCoinPureState& s) {
  const auto n = static_cast<Eigen::Index>(s.lattice().size());
  const auto& a = s.amplitudes();
  Eigen::MatrixXcd r(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      r(x, y) = a[2 * x] * std::conj(a[2 * y]) + a[2 * x + 1] * std::conj(a[2 * y + 1]);
    }
  }
  return r;
}

inline Eigen::MatrixXcd reduced_walker_state(const WalkerCoinDensityMatrix& rho) {
  const auto n = static_cast<Eigen::Index>(rho.lattice().size());
  const auto& m = rho.matrix();
  Eigen::MatrixXcd r(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      r(x, y) = m(2 * x, 2 * y) + m(2 * x + 1, 2 * y + 1);
    }
  }
  return r;
}

// Eigenvector of the largest eigenvalue, phased so the |+> amplitude is real
// and non-negative.  For a pure coin state this is the state itself.
inline CoinVector principal_coin_vector(const CoinDensityMatrix& rho) {
  const Matrix2 h = 0.5 * (rho.matrix + rho.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix2> solver(h);
  Eigen::Vector2cd v = solver.eigenvectors().col(1);
  if (std::abs(v(0)) > 0.0) v *= std::conj(v(0)) / std::abs(v(0));
  return CoinVector{v(0), v(1)}.normalized();
}

inline double purity(const CoinDensityMatrix& rho) {
  return (rho.matrix * rho.matrix).trace().real();
}

// <psi| rho |psi>
inline double coin_overlap(const CoinDensityMatrix& rho, const CoinVector& psi) {
  const Eigen::Vector2cd k{psi.plus, psi.minus};
  return (k.adjoint() * rho.matrix * k)(0, 0).real();
}

}  // namespace qwr
