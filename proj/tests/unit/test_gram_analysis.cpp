#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sislab/error.hpp"
#include "sislab/gram_analysis.hpp"
#include "sislab/oracle.hpp"

using namespace sislab;
using sislab::test::fiber_of;
using sislab::test::hat_bracket;

namespace {

std::vector<FiberField> fields_of(std::initializer_list<GeneratorSpec> specs, double s = 0.0) {
  std::vector<FiberField> out;
  for (const auto& g : specs) out.push_back(fiber_of(g, s));
  return out;
}

}  // namespace

TEST_CASE("shannon Gramian is identically one") {
  const auto G = gramian_field(fields_of({GeneratorSpec::shannon()}));
  for (std::size_t j = 0; j < G.size(); ++j) CHECK(G.at(j)(0, 0) == Complex(1.0, 0.0));
  const auto rep = classify_system(G);
  CHECK(rep.frame_lower == 1.0);
  CHECK(rep.frame_upper == 1.0);
  CHECK(rep.is_riesz);
  CHECK(rep.is_frame);
  const auto dims = dimension_and_spectrum(G);
  for (std::size_t j = 0; j < G.size(); ++j) {
    CHECK(dims.dimension[j] == 1);
    CHECK(dims.spectrum[j] == 1);
  }
}

TEST_CASE("hat Gramian is the linear B-spline bracket") {
  const auto G = gramian_field(fields_of({GeneratorSpec::bspline(1)}));
  double worst = 0.0;
  for (std::size_t j = 0; j < G.size(); ++j)
    worst = std::max(worst, std::abs(G.at(j)(0, 0).real() - hat_bracket(G.grid().point(j)[0])));
  CHECK(worst <= 1e-6);

  const auto rep = classify_system(G);
  CHECK(rep.is_riesz);
  CHECK(rep.frame_lower >= 0.3333);
  CHECK(rep.frame_lower <= 0.3334);
  CHECK(rep.frame_upper >= 0.9999);
  CHECK(rep.frame_upper <= 1.0);
  // Extremes sit next to t = +-1/2 and t = 0 on the cell-centered grid.
  CHECK(std::abs(std::abs(G.grid().point(rep.argmin_index)[0]) - (0.5 - 0.5 / 512)) <= 1e-15);
  CHECK(std::abs(std::abs(G.grid().point(rep.argmax_index)[0]) - 0.5 / 512) <= 1e-15);
  CHECK(rep.lower_interval_low() == rep.frame_lower - G.tail());
  CHECK_FALSE(rep.fundamental_in_window);
}

TEST_CASE("hat Gramian matches the brute-force bracket at every grid point") {
  const auto G = gramian_field(fields_of({GeneratorSpec::bspline(1)}));
  const Weight w(0.0, 1);
  double worst = 0.0;
  for (std::size_t j = 0; j < G.size(); ++j) {
    const double b = oracle::bracket_bruteforce(GeneratorSpec::bspline(1), w, G.grid().point(j), 640);
    worst = std::max(worst, std::abs(G.at(j)(0, 0).real() - b));
  }
  CHECK(worst <= G.tail() + 1e-8);
}

TEST_CASE("duplicated generator gives a rank-one frame that is not Riesz") {
  const auto hat = fiber_of(GeneratorSpec::bspline(1), 0.0);
  const auto G = gramian_field(std::vector<FiberField>{hat, hat});
  const auto ev = eigenvalue_field(G);
  for (std::size_t j = 0; j < G.size(); ++j) {
    const double g = G.at(j)(0, 0).real();
    CHECK(std::abs(ev[j](0)) <= 1e-15);
    CHECK(std::abs(ev[j](1) - 2.0 * g) <= 1e-14);
  }
  const auto rep = classify_system(G);
  CHECK_FALSE(rep.is_riesz);
  CHECK(rep.is_frame);
  CHECK(std::abs(rep.frame_lower - 2.0 / 3.0) <= 1e-3);
  CHECK(std::abs(rep.frame_upper - 2.0) <= 1e-3);
  for (int d : rep.dims.dimension) CHECK(d == 1);
}

TEST_CASE("shannon with hat loses rank only next to t = 0") {
  // Both fibers are smooth in t and coincide at the unsampled point t = 0; the smallest
  // Gramian eigenvalue behaves like t^4, so at the default eps_rank the few grid points
  // closest to 0 fall below the cut. A looser policy keeps rank 2 everywhere.
  const auto G = gramian_field(fields_of({GeneratorSpec::shannon(), GeneratorSpec::bspline(1)}));
  const auto dims = dimension_and_spectrum(G);
  int deficient = 0;
  for (std::size_t j = 0; j < G.size(); ++j) {
    const double t = G.grid().point(j)[0];
    if (std::abs(t) >= 0.05) CHECK(dims.dimension[j] == 2);
    if (dims.dimension[j] < 2) {
      ++deficient;
      CHECK(std::abs(t) < 0.05);
    }
  }
  CHECK(deficient > 0);
  const auto loose = dimension_and_spectrum(G, RankPolicy{1e-13, 1e-12});
  for (int d : loose.dimension) CHECK(d == 2);
}

TEST_CASE("scaling a generator leaves ranks and spectra unchanged") {
  const auto G = gramian_field(fields_of({GeneratorSpec::bspline(1), GeneratorSpec::gaussian(1.0)}));
  const Complex c(0.3, -2.0);
  const auto Gc = gramian_field(
      fields_of({GeneratorSpec::bspline(1).scaled(c), GeneratorSpec::gaussian(1.0)}));
  for (std::size_t j = 0; j < G.size(); j += 7) {
    CHECK(std::abs(Gc.at(j)(0, 0) - std::norm(c) * G.at(j)(0, 0)) <= 1e-14 * std::norm(c));
    CHECK(std::abs(Gc.at(j)(0, 1) - std::conj(c) * G.at(j)(0, 1)) <= 1e-14 * std::abs(c));
    CHECK(std::abs(Gc.at(j)(1, 0) - c * G.at(j)(1, 0)) <= 1e-14 * std::abs(c));
  }
  const auto a = dimension_and_spectrum(G);
  const auto b = dimension_and_spectrum(Gc);
  CHECK(a.dimension == b.dimension);
  CHECK(a.spectrum == b.spectrum);
}

TEST_CASE("Gramians are Hermitian positive semidefinite") {
  const auto G = gramian_field(
      fields_of({GeneratorSpec::bspline(1), GeneratorSpec::gaussian(1.0), GeneratorSpec::box()}, -1.0));
  const auto ev = eigenvalue_field(G);
  for (std::size_t j = 0; j < G.size(); ++j) {
    CHECK((G.at(j) - G.at(j).adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ev[j](0) >= -1e-14 * ev[j](ev[j].size() - 1));
  }
}

TEST_CASE("zero generators give an empty spectrum and are refused") {
  const auto zero = fiber_of(GeneratorSpec::shannon().scaled(0.0), 0.0, 32, 4);
  const auto G = gramian_field(std::span(&zero, 1));
  const auto dims = dimension_and_spectrum(G);
  for (std::size_t j = 0; j < G.size(); ++j) {
    CHECK(dims.dimension[j] == 0);
    CHECK(dims.spectrum[j] == 0);
  }
  CHECK(dims.spectrum_measure() == 0.0);
  CHECK_THROWS_AS(classify_system(G), DegenerateSystemError);
}

TEST_CASE("a generator vanishing to high order at the origin is not a frame") {
  // phi_hat(xi) = xi^4 on the unit cube: the bracket is t^8, so A / B -> 0.
  const int M = 64, K = 4;
  const TorusGrid grid(1, M);
  const auto spec = sislab::test::quartic_generator(grid, K);
  const auto F = fiberize(spec, Weight(0.0, 1), grid, FreqWindow(1, K));
  const auto rep = classify_system(gramian_field(std::span(&F, 1)));
  CHECK_FALSE(rep.is_frame);
  CHECK(rep.frame_lower <= rep.policy.eps_rank * rep.frame_upper);
}
