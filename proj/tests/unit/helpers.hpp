#pragma once

// Shared fixtures for the unit suites. Everything is seeded so failures reproduce.

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "sislab/fiberization.hpp"
#include "sislab/generator_bank.hpp"
#include "sislab/weighted_core.hpp"

namespace sislab::test {

inline constexpr double kPi = std::numbers::pi;

/// The linear B-spline bracket sum_k sinc^4(t + k) in closed form.
inline double hat_bracket(double t) { return (2.0 + std::cos(2.0 * kPi * t)) / 3.0; }

inline FiberField fiber_of(const GeneratorSpec& spec, double s, int M = 512, int K = 64,
                           double offset = 0.5) {
  return fiberize(spec, Weight(s, spec.n()), TorusGrid(spec.n(), M, offset), FreqWindow(spec.n(), K));
}

inline Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  return {d(rng), d(rng)};
}

inline ShiftCoefficients random_coefficients(std::mt19937_64& rng, std::size_t r, int k_max,
                                             int n = 1) {
  ShiftCoefficients c{FreqWindow(n, k_max), {}};
  c.values.assign(r, std::vector<Complex>(c.shifts.size()));
  for (auto& row : c.values)
    for (auto& v : row) v = random_complex(rng);
  return c;
}

/// phi_hat(xi) = xi^4 on the unit cube, tabulated exactly at the points grid + k, |k| <= K.
/// Its bracket is t^8, so A / B -> 0 and the system is not a frame.
inline GeneratorSpec quartic_generator(const TorusGrid& grid, int K) {
  std::vector<double> xi;
  std::vector<Complex> values;
  for (int k = -K; k <= K; ++k)
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.point(j)[0] + k;
      xi.push_back(x);
      values.emplace_back(k == 0 ? std::pow(x, 4) : 0.0, 0.0);
    }
  return GeneratorSpec::tabulated(std::make_shared<const TabulatedData>(1, 20.0, xi, values),
                                  "quartic");
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              ("sislab-unit-" + name + "-" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace sislab::test
