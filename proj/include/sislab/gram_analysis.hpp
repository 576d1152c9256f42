#pragma once

// Gramian fields G(t)_{ij} = <T_s phi_j(t), T_s phi_i(t)>_{l^2_s} and the fiberwise
// characterization of Bessel, frame and Riesz systems of integer shifts.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "sislab/fiberization.hpp"

namespace sislab {

/// Rank decisions: an eigenvalue counts when it exceeds eps_rank * max(lambda_max(t), eps_abs).
struct RankPolicy {
  double eps_rank = 1e-8;
  double eps_abs = 1e-12;

  double threshold(double scale) const { return eps_rank * std::max(scale, eps_abs); }
};

class GramianField {
 public:
  GramianField(TorusGrid grid, std::size_t r, std::vector<Eigen::MatrixXcd> matrices, double tail,
               std::vector<std::string> labels = {}, std::size_t window_size = 0);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t generators() const noexcept { return r_; }
  std::size_t size() const noexcept { return matrices_.size(); }
  const Eigen::MatrixXcd& at(std::size_t j) const { return matrices_[j]; }
  Eigen::MatrixXcd& at(std::size_t j) { return matrices_[j]; }
  /// Sum of the generators' tail certificates.
  double tail() const noexcept { return tail_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// Size of the frequency window the fibers were truncated to (0 if unknown).
  std::size_t window_size() const noexcept { return window_size_; }

 private:
  TorusGrid grid_;
  std::size_t r_;
  std::vector<Eigen::MatrixXcd> matrices_;
  double tail_;
  std::vector<std::string> labels_;
  std::size_t window_size_;
};

GramianField gramian_field(std::span<const FiberField> fields);

/// Eigenvalues of every G(t), ascending.
std::vector<Eigen::VectorXd> eigenvalue_field(const GramianField& G);

struct DimensionSpectrum {
  std::vector<int> dimension;
  std::vector<char> spectrum;

  /// Fraction of grid points in the spectrum (its measure on the torus).
  double spectrum_measure() const;
};

DimensionSpectrum dimension_and_spectrum(const GramianField& G, RankPolicy policy = {});

struct AnalysisReport {
  std::size_t generators = 0;
  std::vector<std::string> labels;

  double bessel_bound = 0.0;
  bool is_frame = false;
  double frame_lower = 0.0;   // A
  double frame_upper = 0.0;   // B
  std::size_t argmin_index = 0;
  std::size_t argmax_index = 0;
  bool is_riesz = false;
  double riesz_lower = 0.0;
  double riesz_upper = 0.0;
  /// Rank equals the window size everywhere; only meaningful relative to the truncation.
  bool fundamental_in_window = false;

  DimensionSpectrum dims;
  std::vector<Eigen::VectorXd> eigenvalues;

  RankPolicy policy;
  double tail = 0.0;

  /// Certified bracketing of the bounds given the truncation tail.
  double lower_interval_low() const { return frame_lower - tail; }
  double upper_interval_high() const { return frame_upper + tail; }
};

/// Frame/Riesz/Bessel classification from a Gramian field. Throws DegenerateSystemError when
/// the spectrum is empty. A system counts as a frame when A > eps_rank * B.
AnalysisReport classify_system(const GramianField& G, RankPolicy policy = {});

}  // namespace sislab
