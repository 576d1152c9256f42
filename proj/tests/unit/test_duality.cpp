#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sislab/duality.hpp"
#include "sislab/error.hpp"

using namespace sislab;
using sislab::test::fiber_of;
using sislab::test::hat_bracket;
using sislab::test::kPi;
using sislab::test::random_coefficients;

namespace {

double max_diff(const FiberField& a, const FiberField& b) {
  return (a.rescaled() - b.rescaled()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("shannon is self-dual") {
  const auto sh = fiber_of(GeneratorSpec::shannon(), 0.0);
  const auto dual = dual_generators(std::span(&sh, 1), gramian_field(std::span(&sh, 1)));
  CHECK(max_diff(dual.duals[0], sh) <= 1e-15);
  CHECK(dual.dual_report.frame_lower == doctest::Approx(1.0).epsilon(1e-15));

  const auto rec = reconstruct(sh, std::span(&sh, 1), dual.duals);
  CHECK(rec.primal_residual <= 1e-14);
  CHECK(rec.dual_residual <= 1e-14);
  CHECK(biorthogonality_check(std::span(&sh, 1), dual.duals, 3, dual.primal_report) <= 1e-10);
}

TEST_CASE("hat dual is the fiber divided by the bracket") {
  const auto hat = fiber_of(GeneratorSpec::bspline(1), 0.0);
  const auto G = gramian_field(std::span(&hat, 1));
  const auto dual = dual_generators(std::span(&hat, 1), G);
  for (std::size_t j = 0; j < hat.grid().size(); ++j) {
    const double g = G.at(j)(0, 0).real();
    CHECK((dual.duals[0].fiber(j) - hat.fiber(j) / g).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(g - hat_bracket(hat.grid().point(j)[0])) <= 1e-6);
  }
  CHECK(std::abs(dual.dual_report.frame_lower - 1.0) <= 1e-3);
  CHECK(std::abs(dual.dual_report.frame_upper - 3.0) <= 1e-3);
  CHECK(std::abs(dual.dual_report.frame_lower - 1.0 / dual.primal_report.frame_upper) <= 1e-12);
  CHECK(std::abs(dual.dual_report.frame_upper - 1.0 / dual.primal_report.frame_lower) <= 1e-12);
}

TEST_CASE("scaling the generator scales the dual by the reciprocal conjugate") {
  const Complex c(0.5, 2.0);
  const auto hat = fiber_of(GeneratorSpec::bspline(1), 0.0, 128, 32);
  const auto chat = fiber_of(GeneratorSpec::bspline(1).scaled(c), 0.0, 128, 32);
  const auto d = dual_generators(std::span(&hat, 1), gramian_field(std::span(&hat, 1)));
  const auto dc = dual_generators(std::span(&chat, 1), gramian_field(std::span(&chat, 1)));
  const auto expected = (1.0 / std::conj(c)) * d.duals[0];
  CHECK(max_diff(dc.duals[0], expected) <= 1e-14);

  std::mt19937_64 rng(61);
  const auto f = synthesize(std::span(&hat, 1), random_coefficients(rng, 1, 3));
  const auto r1 = reconstruct(f, std::span(&hat, 1), d.duals);
  const auto r2 = reconstruct(f, std::span(&chat, 1), dc.duals);
  CHECK(max_diff(r1.via_primal_synthesis, r2.via_primal_synthesis) <= 1e-12);
}

TEST_CASE("reconstruction from random elements") {
  std::mt19937_64 rng(67);
  const auto hat = fiber_of(GeneratorSpec::bspline(1), 0.0);
  const auto dual = dual_generators(std::span(&hat, 1), gramian_field(std::span(&hat, 1)));
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = synthesize(std::span(&hat, 1), random_coefficients(rng, 1, 3));
    const auto rec = reconstruct(f, std::span(&hat, 1), dual.duals);
    CHECK(rec.primal_residual <= 1e-8);
    CHECK(rec.dual_residual <= 1e-8);
    CHECK(max_diff(rec.via_primal_synthesis, rec.via_dual_synthesis) <=
          1e-10 * f.rescaled().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("reconstruction rejects elements outside the space") {
  const auto hat = fiber_of(GeneratorSpec::bspline(1), 0.0, 64, 8);
  const auto dual = dual_generators(std::span(&hat, 1), gramian_field(std::span(&hat, 1)));
  const auto outside = hat + 1e-3 * fiber_of(GeneratorSpec::gaussian(1.0), 0.0, 64, 8);
  try {
    reconstruct(outside, std::span(&hat, 1), dual.duals);
    FAIL("out-of-space element accepted");
  } catch (const DomainViolationError& e) {
    CHECK(e.residual() > 1e-9);
    CHECK(std::string(e.what()).find("grid point") != std::string::npos);
  }
}

TEST_CASE("dual of the dual is the primal system") {
  const std::vector<FiberField> fields{fiber_of(GeneratorSpec::bspline(1), 1.0, 128, 32),
                                       fiber_of(GeneratorSpec::gaussian(kPi), 1.0, 128, 32)};
  const auto d = dual_generators(fields, gramian_field(fields));
  const auto dd = dual_generators(d.duals, gramian_field(d.duals));
  for (std::size_t i = 0; i < fields.size(); ++i) CHECK(max_diff(dd.duals[i], fields[i]) <= 1e-10);
  CHECK(d.dual_report.frame_lower >= 1.0 / d.primal_report.frame_upper - 1e-10);
  CHECK(d.dual_report.frame_upper <= 1.0 / d.primal_report.frame_lower + 1e-10 * d.dual_report.frame_upper);
}

TEST_CASE("dual construction commutes with Bessel transport") {
  const auto hat0 = fiber_of(GeneratorSpec::bspline(1), 0.0, 128, 32);
  const auto d0 = dual_generators(std::span(&hat0, 1), gramian_field(std::span(&hat0, 1)));
  for (double s : {-2.0, 1.0, 3.0}) {
    const auto hats = fiber_of(GeneratorSpec::bspline(1).with_bessel_potential(s), s, 128, 32);
    const auto ds = dual_generators(std::span(&hats, 1), gramian_field(std::span(&hats, 1)));
    // Rescaled fibers of tau_s phi at weight s equal those of phi at weight 0.
    CAPTURE(s);
    CHECK(max_diff(ds.duals[0], d0.duals[0]) <= 1e-10);
  }
}

TEST_CASE("biorthogonality of the hat system and refusal for non-Riesz families") {
  const auto hat = fiber_of(GeneratorSpec::bspline(1), 0.0);
  const auto d = dual_generators(std::span(&hat, 1), gramian_field(std::span(&hat, 1)));
  CHECK(biorthogonality_check(std::span(&hat, 1), d.duals, 3, d.primal_report) <= 1e-6);

  const std::vector<FiberField> dup{hat, hat};
  const auto dd = dual_generators(dup, gramian_field(dup));
  CHECK(dd.primal_report.is_frame);
  CHECK_FALSE(dd.primal_report.is_riesz);
  CHECK_THROWS_AS(biorthogonality_check(dup, dd.duals, 3, dd.primal_report), NotRieszError);
}

TEST_CASE("duals of non-frames are refused") {
  const auto zero = fiber_of(GeneratorSpec::shannon().scaled(0.0), 0.0, 32, 4);
  CHECK_THROWS(dual_generators(std::span(&zero, 1), gramian_field(std::span(&zero, 1))));

  const TorusGrid grid(1, 64);
  const auto q = fiberize(sislab::test::quartic_generator(grid, 4), Weight(0.0, 1), grid,
                          FreqWindow(1, 4));
  CHECK_THROWS_AS(dual_generators(std::span(&q, 1), gramian_field(std::span(&q, 1))), NotAFrameError);
}
