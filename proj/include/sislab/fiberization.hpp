#pragma once

// The fiberization T_s : H^s -> H(T^n, l^2_s). With f = tau_s g, the fiber of f at t has
// components
//
//     T_s f(t)_k = f_hat(t + k) mu_s(t + k) / mu_s(k),
//
// so that ||T_s f(t)||^2_{l^2_s} = sum_k |f_hat(t + k)|^2 mu_s(t + k)^2. See
// docs/fiberization.md for the derivation.
//
// FiberField stores fibers in rescaled coordinates c_k mu_s(k) = f_hat(t + k) mu_s(t + k),
// where l^2_s becomes plain l^2 and adjoints are conjugate transposes. component() and the
// persisted format return the weighted-sequence coordinates above.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "sislab/generator_bank.hpp"
#include "sislab/weighted_core.hpp"

namespace sislab {

class FiberField {
 public:
  /// `rescaled` has window.size() rows and grid.size() columns.
  FiberField(TorusGrid grid, FreqWindow window, Weight weight, Eigen::MatrixXcd rescaled,
             double tail = 0.0, std::string label = {});

  static FiberField zero(TorusGrid grid, FreqWindow window, Weight weight,
                         std::string label = "zero");

  const TorusGrid& grid() const noexcept { return grid_; }
  const FreqWindow& window() const noexcept { return window_; }
  const Weight& weight() const noexcept { return weight_; }
  double tail() const noexcept { return tail_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  void set_tail(double tail) { tail_ = tail; }

  const Eigen::MatrixXcd& rescaled() const noexcept { return data_; }
  Eigen::MatrixXcd& rescaled() noexcept { return data_; }
  /// Rescaled fiber at grid point j.
  auto fiber(std::size_t j) const { return data_.col(static_cast<Eigen::Index>(j)); }

  /// Weighted-sequence component T_s f(t_j)_k at window position pos.
  Complex component(std::size_t j, std::size_t pos) const;
  /// Fiber at grid point j as an element of l^2_s.
  WeightedSeq sequence(std::size_t j) const;

  /// ||T_s f(t_j)||^2_{l^2_s}.
  double norm_squared(std::size_t j) const;
  /// sum_j M^{-n} ||T_s f(t_j)||^2, the discretized H(T^n, l^2_s) norm.
  double field_norm_squared() const;

  /// True when grid, window and weight all agree.
  bool same_space(const FiberField& other) const;

 private:
  TorusGrid grid_;
  FreqWindow window_;
  Weight weight_;
  Eigen::MatrixXcd data_;
  double tail_;
  std::string label_;
  std::vector<double> mu_k_;
};

/// Throws IncompatibleSpaceError unless every field shares one discretization.
void require_same_space(std::span<const FiberField> fields, const char* context);

/// Fourier samples f_hat(xi) on the points grid + k, stored grid-major, window-minor.
struct FourierSamples {
  int n = 1;
  std::vector<double> xi;
  std::vector<Complex> values;

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> point(std::size_t i) const {
    return {xi.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
};

/// Fiber field of a generator. Validates the truncation first and carries its tail bound.
FiberField fiberize(const GeneratorSpec& spec, const Weight& w, const TorusGrid& grid,
                    const FreqWindow& win);

/// Recovers f_hat(t + k) = T_s f(t)_k mu_s(k) / mu_s(t + k).
FourierSamples defiberize(const FiberField& field);

/// Inverse of defiberize: samples laid out as defiberize produces them.
FiberField fiberize_samples(const FourierSamples& samples, const Weight& w, const TorusGrid& grid,
                            const FreqWindow& win, std::string label = {});

/// f = tau_s g on the Fourier side: f_hat(xi) = g_hat(xi) / mu_s(xi).
FourierSamples bessel_shift(const FourierSamples& samples, const Weight& w);

/// Fiber field of T_k f: every fiber multiplied by exp(-2 pi i <k, t>).
FiberField shift_field(const FiberField& field, std::span<const int> shift);

/// Fiber field of sum_{k,i} c_{k,i} T_k phi_i.
FiberField synthesize(std::span<const FiberField> generators, const ShiftCoefficients& coeffs);

/// <f, g>_{H^s} = sum_j M^{-n} <F(t_j), G(t_j)>_{l^2_s}.
Complex field_inner(const FiberField& f, const FiberField& g);

FiberField operator+(const FiberField& a, const FiberField& b);
FiberField operator*(Complex c, const FiberField& a);

}  // namespace sislab
