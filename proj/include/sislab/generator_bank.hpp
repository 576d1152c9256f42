#pragma once

// Generators phi in H^s(R^n), described on the Fourier side only. Transforms follow
// F f(xi) = int f(x) exp(-2 pi i <x, xi>) dx.

#include <filesystem>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sislab/weighted_core.hpp"

namespace sislab {

enum class GeneratorForm { gaussian, bspline, shannon, box, tabulated };

const char* to_string(GeneratorForm form);

/// Samples of a Fourier transform on a tensor grid of xi-coordinates.
class TabulatedData {
 public:
  TabulatedData(int n, double decay, std::vector<double> xi, std::vector<Complex> values);

  int n() const noexcept { return n_; }
  double decay() const noexcept { return decay_; }
  std::size_t count() const noexcept { return values_.size(); }
  /// Row-ordered xi coordinates (count * n) and values, as given on input.
  std::span<const double> xi() const noexcept { return xi_; }
  std::span<const Complex> values() const noexcept { return values_; }
  /// Smallest C with |value| <= C (1 + |xi|)^{-decay} over all samples.
  double envelope_constant() const noexcept { return envelope_constant_; }

  /// Nearest-sample lookup. Throws DomainError outside the sampled box.
  Complex lookup(std::span<const double> xi) const;

 private:
  int n_;
  double decay_;
  std::vector<double> xi_;
  std::vector<Complex> values_;
  std::vector<std::vector<double>> axes_;
  std::vector<std::size_t> cell_to_row_;
  double envelope_constant_ = 0.0;
};

class GeneratorSpec {
 public:
  /// phi_hat(xi) = exp(-alpha |xi|^2). alpha = pi gives the self-dual Gaussian.
  static GeneratorSpec gaussian(double alpha, int n = 1, std::string label = {});
  /// Centered B-spline of order m: phi_hat(xi) = prod_i sinc(xi_i)^{m+1}, sinc(x) = sin(pi x)/(pi x).
  static GeneratorSpec bspline(int order, int n = 1, std::string label = {});
  /// Indicator of [-1/2, 1/2)^n on the Fourier side.
  static GeneratorSpec shannon(int n = 1, std::string label = {});
  /// Indicator of the centered unit cube in time; identical to bspline(0).
  static GeneratorSpec box(int n = 1, std::string label = {});
  static GeneratorSpec tabulated(std::shared_ptr<const TabulatedData> data, std::string label = {});

  /// c * phi.
  GeneratorSpec scaled(Complex c) const;
  /// tau_p phi: Fourier transform divided by mu_p. Orders accumulate.
  GeneratorSpec with_bessel_potential(double p) const;
  GeneratorSpec relabeled(std::string label) const;

  GeneratorForm form() const noexcept { return form_; }
  int n() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }
  double alpha() const noexcept { return alpha_; }
  int order() const noexcept { return order_; }
  Complex scale() const noexcept { return scale_; }
  double potential() const noexcept { return potential_; }
  const std::shared_ptr<const TabulatedData>& table() const noexcept { return table_; }

  /// Decay rate d of the base transform, |phi_hat(xi)| <= C (1+|xi|)^{-d};
  /// +infinity for the Gaussian and for the compactly supported Shannon transform.
  double base_decay() const;
  /// Decay of the transform including the Bessel potential (base_decay + potential).
  double decay() const { return base_decay() + potential_; }

  /// Monotone bound env(rho) >= |base transform(xi)| for all xi with max_i |xi_i| >= rho.
  double base_envelope(double rho) const;

 private:
  GeneratorSpec(GeneratorForm form, int n, std::string label);

  GeneratorForm form_;
  int n_;
  std::string label_;
  double alpha_ = 0.0;
  int order_ = 0;
  Complex scale_{1.0, 0.0};
  double potential_ = 0.0;
  std::shared_ptr<const TabulatedData> table_;
};

/// sin(pi x)/(pi x) with sinc(0) = 1.
double sinc(double x);

/// phi_hat(xi).
Complex fourier_eval(const GeneratorSpec& spec, std::span<const double> xi);

/// Certified bound on sup_t sum_{k outside window} |phi_hat(t+k)|^2 mu_s(t+k)^2.
/// Throws UnsoundTruncationError unless 2d - 2s - n > 0.
double validate_truncation(const GeneratorSpec& spec, const Weight& w, const FreqWindow& win);

/// Reads the tabulated-generator CSV: `# n=<int> decay=<float> count=<int>` then rows
/// `xi_1,...,xi_n,re,im`.
GeneratorSpec load_tabulated(const std::filesystem::path& path, std::string label = {});
void write_tabulated(const std::filesystem::path& path, const TabulatedData& data);

}  // namespace sislab
