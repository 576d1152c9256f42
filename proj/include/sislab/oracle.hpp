#pragma once

// Brute-force reference path. Works directly on Fourier transforms and never touches
// fibers or Gramians, so agreement with the fiber path is evidence rather than tautology.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sislab/generator_bank.hpp"
#include "sislab/weighted_core.hpp"

namespace sislab::oracle {

/// Midpoint rule with q nodes per unit length on the band [-K-1/2, K+1/2]^n.
struct QuadratureScheme {
  int n = 1;
  int K = 64;
  int q = 16 * 512;

  double band() const noexcept { return K + 0.5; }
  std::size_t nodes_per_axis() const noexcept {
    return static_cast<std::size_t>(2 * K + 1) * static_cast<std::size_t>(q);
  }
  std::size_t total_nodes() const;
};

struct InnerValue {
  Complex value;
  /// sqrt(tail_f * tail_g) from the truncation certificates: mass outside the band.
  double tail_bound = 0.0;
  /// |I_q - I_{q/2}| / 3, the Richardson estimate of the midpoint error.
  double quadrature_bound = 0.0;
};

/// <f, T_k g>_{H^s} = int f_hat conj(g_hat) exp(2 pi i <k, xi>) mu_s^2 over the band.
InnerValue direct_inner(const GeneratorSpec& f, const GeneratorSpec& g, std::span<const int> shift,
                        const Weight& w, const QuadratureScheme& scheme);

/// D[a][b][m] = <phi_a, T_m phi_b>_{H^s} for every m with |m_i| <= radius, in FreqWindow order.
struct Correlations {
  FreqWindow offsets;
  std::vector<std::vector<std::vector<Complex>>> values;
  double quadrature_bound = 0.0;
  double tail_bound = 0.0;

  Complex at(std::size_t a, std::size_t b, std::span<const int> m) const;
};

Correlations cross_correlations(std::span<const GeneratorSpec> specs, int radius, const Weight& w,
                                const QuadratureScheme& scheme);

/// Shift radius beyond which <phi, T_m phi> is negligible (compact time support or fast decay).
int support_width(const GeneratorSpec& spec);

struct FrameSample {
  bool pass = false;
  double norm_squared = 0.0;      // ||f||^2
  double coefficient_sum = 0.0;   // sum_{k,i} |<f, T_k phi_i>|^2
  double lower_margin = 0.0;      // sum - A ||f||^2
  double upper_margin = 0.0;      // B ||f||^2 - sum
  double tolerance = 0.0;
  double ratio() const { return norm_squared > 0.0 ? coefficient_sum / norm_squared : 0.0; }
};

/// Checks A ||f||^2 - tol <= sum |<f, T_k phi_i>|^2 <= B ||f||^2 + tol for
/// f = sum c_{k,i} T_k phi_i, with every inner product computed by quadrature.
FrameSample frame_inequality_sample(std::span<const GeneratorSpec> specs,
                                    const ShiftCoefficients& coeffs, double A, double B,
                                    const Weight& w, const QuadratureScheme& scheme);
/// Same check with precomputed correlations of radius >= frame_radius(specs, k_max).
FrameSample frame_inequality_sample(std::span<const GeneratorSpec> specs,
                                    const ShiftCoefficients& coeffs, double A, double B,
                                    const Correlations& D);
int frame_radius(std::span<const GeneratorSpec> specs, int k_max);

enum class SumOrder { descending_magnitude, ascending_index };

/// sum_{|k_i| <= K_large} |phi_hat(t + k)|^2 mu_s(t + k)^2.
double bracket_bruteforce(const GeneratorSpec& spec, const Weight& w, std::span<const double> t,
                          int K_large, SumOrder order = SumOrder::descending_magnitude);

/// sum_{|k_i| <= K_large} a_hat(t + k) conj(b_hat(t + k)) mu_s(t + k)^2.
Complex cross_bracket_bruteforce(const GeneratorSpec& a, const GeneratorSpec& b, const Weight& w,
                                 std::span<const double> t, int K_large,
                                 SumOrder order = SumOrder::descending_magnitude);

/// ||f||^2_{H^s} from Fourier samples on a uniform lattice with cell volume `cell`.
double sample_norm_squared(int n, std::span<const double> xi, std::span<const Complex> values,
                           const Weight& w, double cell);

/// One row per t: `t_1..t_n,value` with 17 significant digits.
void write_bracket_csv(const std::filesystem::path& path, int n, std::span<const double> t,
                       std::span<const double> values);

}  // namespace sislab::oracle
