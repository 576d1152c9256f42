#pragma once

// Weights mu_s(x) = (1 + |x|^2)^{s/2}, truncated weighted sequence spaces l^2_s, and
// cell-centered torus grids. Everything here is immutable after construction.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sislab {

using Complex = std::complex<double>;

/// Sobolev weight mu_s on R^n.
class Weight {
 public:
  Weight(double s, int n);

  double s() const noexcept { return s_; }
  int n() const noexcept { return n_; }

  /// mu_s(x) for a point x of dimension n.
  double operator()(std::span<const double> x) const;
  /// mu_s evaluated from the squared Euclidean norm |x|^2.
  double from_norm_squared(double norm_sq) const;

  bool operator==(const Weight&) const = default;

 private:
  double s_;
  int n_;
};

double mu_eval(const Weight& w, std::span<const double> x);

/// Index set { k in Z^n : |k_i| <= K }, enumerated lexicographically with the first
/// coordinate most significant and every coordinate ascending from -K to K.
class FreqWindow {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  FreqWindow(int n, int K);

  int n() const noexcept { return n_; }
  int K() const noexcept { return K_; }
  std::size_t size() const noexcept { return size_; }

  /// Multi-index of the entry at position `pos`.
  std::span<const int> index(std::size_t pos) const {
    return {indices_.data() + pos * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  /// Position of multi-index k, or npos when k lies outside the window.
  std::size_t position(std::span<const int> k) const;

  bool operator==(const FreqWindow& o) const { return n_ == o.n_ && K_ == o.K_; }

 private:
  int n_;
  int K_;
  std::size_t size_;
  std::vector<int> indices_;
};

/// Exact rational number p/q used for the quadrature-weight sum check.
struct Rational {
  std::uint64_t num;
  std::uint64_t den;
};

/// Midpoint grid on T^n = [-1/2, 1/2)^n with M points per axis:
/// t_j = -1/2 + (j + offset)/M per axis, points enumerated lexicographically.
class TorusGrid {
 public:
  TorusGrid(int n, int M, double offset = 0.5);

  int n() const noexcept { return n_; }
  int M() const noexcept { return M_; }
  double offset() const noexcept { return offset_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const double> point(std::size_t j) const {
    return {points_.data() + j * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  /// Quadrature weight M^{-n} of every point.
  double weight() const noexcept { return weight_; }
  Rational weight_rational() const noexcept;
  /// Sum of all quadrature weights in exact rational arithmetic (reduced).
  Rational weight_sum_rational() const;

  bool operator==(const TorusGrid& o) const {
    return n_ == o.n_ && M_ == o.M_ && offset_ == o.offset_;
  }

 private:
  int n_;
  int M_;
  double offset_;
  std::size_t size_;
  double weight_;
  std::vector<double> points_;
};

/// Finite element of l^2_s: coefficients c_k indexed by a FreqWindow.
class WeightedSeq {
 public:
  WeightedSeq(FreqWindow window, Weight weight);
  WeightedSeq(FreqWindow window, Weight weight, std::vector<Complex> coefficients);

  const FreqWindow& window() const noexcept { return window_; }
  const Weight& weight() const noexcept { return weight_; }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }
  Complex& operator[](std::size_t pos) { return coefficients_[pos]; }
  const Complex& operator[](std::size_t pos) const { return coefficients_[pos]; }

  /// mu_s(k) for every window position, in window order.
  const std::vector<double>& window_weights() const noexcept { return mu_k_; }

  /// Coefficients in rescaled coordinates c_k * mu_s(k), in which l^2_s is plain l^2.
  std::vector<Complex> rescaled() const;
  static WeightedSeq from_rescaled(FreqWindow window, Weight weight,
                                   std::span<const Complex> rescaled);

  double norm_squared() const;

 private:
  FreqWindow window_;
  Weight weight_;
  std::vector<Complex> coefficients_;
  std::vector<double> mu_k_;
};

/// sum_k a_k conj(b_k) mu_s(k)^2. Throws IncompatibleSpaceError on mismatched spaces.
Complex weighted_inner(const WeightedSeq& a, const WeightedSeq& b);

/// mu_s(k) for each position of the window.
std::vector<double> window_weights(const Weight& w, const FreqWindow& win);

/// Finitely supported coefficients c_{k,i} over shifts |k_j| <= k_max of r generators.
struct ShiftCoefficients {
  FreqWindow shifts;
  /// values[i][pos] is the coefficient of T_k phi_i with k = shifts.index(pos).
  std::vector<std::vector<Complex>> values;

  std::size_t generators() const noexcept { return values.size(); }
};

}  // namespace sislab
