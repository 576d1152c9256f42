#include "sislab/weighted_core.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sislab/error.hpp"

namespace sislab {

Weight::Weight(double s, int n) : s_(s), n_(n) {
  if (n < 1) throw UsageError("weight dimension must be >= 1");
  if (!std::isfinite(s)) throw UsageError("Sobolev index s must be finite");
}

double Weight::from_norm_squared(double norm_sq) const {
  if (s_ == 0.0) return 1.0;
  return std::pow(1.0 + norm_sq, 0.5 * s_);
}

double Weight::operator()(std::span<const double> x) const {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return from_norm_squared(r2);
}

double mu_eval(const Weight& w, std::span<const double> x) { return w(x); }

FreqWindow::FreqWindow(int n, int K) : n_(n), K_(K) {
  if (n < 1) throw UsageError("window dimension must be >= 1");
  if (K < 0) throw UsageError("window cutoff K must be >= 0");
  const std::size_t side = 2 * static_cast<std::size_t>(K) + 1;
  size_ = 1;
  for (int d = 0; d < n; ++d) size_ *= side;
  indices_.resize(size_ * static_cast<std::size_t>(n));
  for (std::size_t pos = 0; pos < size_; ++pos) {
    std::size_t rem = pos;
    for (int d = n - 1; d >= 0; --d) {
      indices_[pos * n + d] = static_cast<int>(rem % side) - K;
      rem /= side;
    }
  }
}

std::size_t FreqWindow::position(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != n_) return npos;
  const std::size_t side = 2 * static_cast<std::size_t>(K_) + 1;
  std::size_t pos = 0;
  for (int v : k) {
    if (v < -K_ || v > K_) return npos;
    pos = pos * side + static_cast<std::size_t>(v + K_);
  }
  return pos;
}

TorusGrid::TorusGrid(int n, int M, double offset) : n_(n), M_(M), offset_(offset) {
  if (n < 1) throw UsageError("grid dimension must be >= 1");
  if (M < 1) throw UsageError("grid needs at least one point per axis");
  if (!(offset >= 0.0 && offset < 1.0)) throw UsageError("grid offset must lie in [0,1)");
  size_ = 1;
  for (int d = 0; d < n; ++d) size_ *= static_cast<std::size_t>(M);
  weight_ = 1.0 / static_cast<double>(size_);
  points_.resize(size_ * static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < size_; ++j) {
    std::size_t rem = j;
    for (int d = n - 1; d >= 0; --d) {
      const auto digit = static_cast<double>(rem % static_cast<std::size_t>(M));
      rem /= static_cast<std::size_t>(M);
      points_[j * n + d] = -0.5 + (digit + offset) / static_cast<double>(M);
    }
  }
}

Rational TorusGrid::weight_rational() const noexcept { return {1, size_}; }

Rational TorusGrid::weight_sum_rational() const {
  // size_ copies of 1/size_, accumulated as fractions.
  Rational acc{0, 1};
  const Rational w = weight_rational();
  for (std::size_t j = 0; j < size_; ++j) {
    const std::uint64_t den = std::lcm(acc.den, w.den);
    acc.num = acc.num * (den / acc.den) + w.num * (den / w.den);
    acc.den = den;
    const std::uint64_t g = std::gcd(acc.num, acc.den);
    acc.num /= g;
    acc.den /= g;
  }
  return acc;
}

std::vector<double> window_weights(const Weight& w, const FreqWindow& win) {
  if (w.n() != win.n()) throw IncompatibleSpaceError("weight and window dimensions differ");
  std::vector<double> mu(win.size());
  for (std::size_t pos = 0; pos < win.size(); ++pos) {
    double r2 = 0.0;
    for (int v : win.index(pos)) r2 += static_cast<double>(v) * v;
    mu[pos] = w.from_norm_squared(r2);
  }
  return mu;
}

WeightedSeq::WeightedSeq(FreqWindow window, Weight weight)
    : WeightedSeq(window, weight, std::vector<Complex>(window.size())) {}

WeightedSeq::WeightedSeq(FreqWindow window, Weight weight, std::vector<Complex> coefficients)
    : window_(std::move(window)),
      weight_(weight),
      coefficients_(std::move(coefficients)),
      mu_k_(sislab::window_weights(weight_, window_)) {
  if (coefficients_.size() != window_.size())
    throw IncompatibleSpaceError("coefficient count " + std::to_string(coefficients_.size()) +
                                 " does not match window size " +
                                 std::to_string(window_.size()));
  for (const auto& c : coefficients_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw DomainError("weighted sequence entries must be finite");
}

std::vector<Complex> WeightedSeq::rescaled() const {
  std::vector<Complex> out(coefficients_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coefficients_[i] * mu_k_[i];
  return out;
}

WeightedSeq WeightedSeq::from_rescaled(FreqWindow window, Weight weight,
                                       std::span<const Complex> rescaled) {
  const auto mu = sislab::window_weights(weight, window);
  if (rescaled.size() != mu.size()) throw IncompatibleSpaceError("rescaled length mismatch");
  std::vector<Complex> c(rescaled.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = rescaled[i] / mu[i];
  return WeightedSeq(std::move(window), weight, std::move(c));
}

double WeightedSeq::norm_squared() const { return weighted_inner(*this, *this).real(); }

Complex weighted_inner(const WeightedSeq& a, const WeightedSeq& b) {
  if (!(a.window() == b.window()) || !(a.weight() == b.weight()))
    throw IncompatibleSpaceError("weighted_inner: sequences live in different l^2_s spaces");
  const auto& mu = a.window_weights();
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < mu.size(); ++i) acc += a[i] * std::conj(b[i]) * (mu[i] * mu[i]);
  return acc;
}

}  // namespace sislab
