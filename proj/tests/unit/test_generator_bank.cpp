#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "sislab/error.hpp"
#include "sislab/generator_bank.hpp"

using namespace sislab;
using sislab::test::kPi;
using sislab::test::ScratchDir;

namespace {

Complex eval1(const GeneratorSpec& g, double xi) {
  const double p[] = {xi};
  return fourier_eval(g, p);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("closed-form transforms") {
  CHECK(eval1(GeneratorSpec::gaussian(kPi), 0.0) == Complex(1.0, 0.0));
  CHECK(eval1(GeneratorSpec::shannon(), 0.49) == Complex(1.0, 0.0));
  CHECK(eval1(GeneratorSpec::shannon(), 0.51) == Complex(0.0, 0.0));
  CHECK(eval1(GeneratorSpec::shannon(), -0.5) == Complex(1.0, 0.0));
  CHECK(eval1(GeneratorSpec::shannon(), 0.5) == Complex(0.0, 0.0));
  const double expected = 4.0 / (kPi * kPi);
  CHECK(std::abs(eval1(GeneratorSpec::bspline(1), 0.5).real() - expected) <= 1e-15);
  CHECK(sinc(0.0) == 1.0);
}

TEST_CASE("hat transform agrees with quadrature of its Fourier integral") {
  // hat(x) = 1 - |x| on [-1, 1]; F hat(xi) = 2 int_0^1 (1 - x) cos(2 pi x xi) dx.
  const double xi = 0.5;
  const int N = 20000;  // composite Simpson, even panel count
  const double h = 1.0 / N;
  double acc = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double x = i * h;
    const double f = (1.0 - x) * std::cos(2.0 * kPi * x * xi);
    acc += f * (i == 0 || i == N ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  const double simpson = 2.0 * acc * h / 3.0;
  CHECK(std::abs(simpson - 0.40528473456935108) <= 1e-10);
  CHECK(std::abs(eval1(GeneratorSpec::bspline(1), xi).real() - simpson) <= 1e-10);
}

TEST_CASE("centered analytic transforms are even and box equals bspline(0)") {
  const auto box = GeneratorSpec::box();
  const auto b0 = GeneratorSpec::bspline(0);
  for (double xi : {0.0, 0.13, 0.5, 1.7, 12.25}) {
    CHECK(eval1(box, xi) == eval1(b0, xi));
    for (const auto& g : {GeneratorSpec::gaussian(2.0), GeneratorSpec::bspline(3), box})
      CHECK(std::abs(eval1(g, xi)) == std::abs(eval1(g, -xi)));
    // The Shannon cube is half-open, so evenness holds off its boundary.
    if (xi != 0.5)
      CHECK(eval1(GeneratorSpec::shannon(), xi) == eval1(GeneratorSpec::shannon(), -xi));
  }
}

TEST_CASE("declared decay rates") {
  CHECK(GeneratorSpec::bspline(1).decay() == 2.0);
  CHECK(GeneratorSpec::bspline(3).decay() == 4.0);
  CHECK(GeneratorSpec::box().decay() == 1.0);
  CHECK(std::isinf(GeneratorSpec::gaussian(1.0).decay()));
  CHECK(std::isinf(GeneratorSpec::shannon().decay()));
  CHECK(GeneratorSpec::bspline(1).with_bessel_potential(1.5).decay() == 3.5);
}

TEST_CASE("Bessel potential divides the transform by mu_p") {
  const auto g = GeneratorSpec::gaussian(kPi).with_bessel_potential(2.0);
  CHECK(std::abs(eval1(g, 1.0) - eval1(GeneratorSpec::gaussian(kPi), 1.0) / 2.0) <= 1e-17);
  const auto back = g.with_bessel_potential(-2.0);
  CHECK(std::abs(eval1(back, 0.7) - eval1(GeneratorSpec::gaussian(kPi), 0.7)) <= 1e-16);
}

TEST_CASE("truncation certificates") {
  const FreqWindow win(1, 64);
  for (double s : {-2.0, 0.0, 5.0}) CHECK(validate_truncation(GeneratorSpec::shannon(), Weight(s, 1), win) == 0.0);

  // Comparison series 2 sum_{k > 64} (pi k - pi/2)^{-4}.
  double series = 0.0;
  for (int k = 65; k < 2000000; ++k) series += 2.0 * std::pow(kPi * k - kPi / 2.0, -4.0);
  const double tail = validate_truncation(GeneratorSpec::bspline(1), Weight(0.0, 1), win);
  CHECK(tail <= 2.6e-7);
  CHECK(tail >= series * 0.5);

  CHECK_THROWS_AS(validate_truncation(GeneratorSpec::bspline(0), Weight(1.0, 1), FreqWindow(1, 8)),
                  UnsoundTruncationError);
  try {
    validate_truncation(GeneratorSpec::bspline(0), Weight(1.0, 1), FreqWindow(1, 8));
  } catch (const UnsoundTruncationError& e) {
    CHECK(e.criterion() == -1.0);
    CHECK(std::string(e.what()).find("2d - 2s - n") != std::string::npos);
  }
  // tau_s transport restores admissibility.
  CHECK_NOTHROW(validate_truncation(GeneratorSpec::bspline(0).with_bessel_potential(1.0),
                                    Weight(1.0, 1), FreqWindow(1, 8)));
}

TEST_CASE("truncation certificates dominate brute-force tails") {
  struct Case {
    GeneratorSpec spec;
    double s;
  };
  const std::vector<Case> cases{{GeneratorSpec::bspline(1), 0.0},
                                {GeneratorSpec::bspline(1), 0.4},
                                {GeneratorSpec::bspline(3), 2.0},
                                {GeneratorSpec::box(), -1.0},
                                {GeneratorSpec::gaussian(0.5), 3.0},
                                {GeneratorSpec::bspline(2), -2.0}};
  const int K = 16;
  for (const auto& c : cases) {
    const Weight w(c.s, 1);
    const double bound = validate_truncation(c.spec, w, FreqWindow(1, K));
    double worst = 0.0;
    for (int j = 0; j < 16; ++j) {
      const double t = -0.5 + (j + 0.5) / 16.0;
      double sum = 0.0;
      for (int k = 20000; k > K; --k)
        for (int sign : {-1, 1}) {
          const double xi[] = {t + sign * k};
          sum += std::norm(fourier_eval(c.spec, xi)) * std::pow(mu_eval(w, xi), 2);
        }
      worst = std::max(worst, sum);
    }
    CAPTURE(c.s);
    CHECK(worst <= bound);
  }
}

TEST_CASE("tabulated CSV round-trips bit-exactly") {
  ScratchDir dir("tab");
  std::mt19937_64 rng(19);
  std::normal_distribution<double> d;
  std::vector<double> xi;
  std::vector<Complex> values;
  for (int i = 0; i < 101; ++i) {
    xi.push_back(-5.0 + 0.1 * i);
    values.emplace_back(d(rng) * 1e-3, d(rng) * 1e7);
  }
  const TabulatedData data(1, 2.5, xi, values);
  write_tabulated(dir / "a.csv", data);
  const auto loaded = load_tabulated(dir / "a.csv");
  REQUIRE(loaded.table()->count() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(loaded.table()->xi()[i] == xi[i]);
    CHECK(loaded.table()->values()[i] == values[i]);
  }
  CHECK(loaded.decay() == 2.5);
  write_tabulated(dir / "b.csv", *loaded.table());
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("tabulated gaussian samples evaluate exactly at the nodes") {
  ScratchDir dir("tabg");
  const auto g = GeneratorSpec::gaussian(kPi);
  std::vector<double> xi;
  std::vector<Complex> values;
  for (int i = 0; i <= 400; ++i) {
    xi.push_back(-4.0 + 0.02 * i);
    const double p[] = {xi.back()};
    values.push_back(fourier_eval(g, p));
  }
  write_tabulated(dir / "g.csv", TabulatedData(1, 50.0, xi, values));
  const auto t = load_tabulated(dir / "g.csv");
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double p[] = {xi[i]};
    CHECK(fourier_eval(t, p) == values[i]);
  }
  const double outside[] = {4.5};
  CHECK_THROWS_AS(fourier_eval(t, outside), DomainError);
}

TEST_CASE("tabulated CSV schema rules") {
  ScratchDir dir("tabp");
  {
    std::ofstream(dir / "ok.csv") << "# n=1 decay=2 count=3\n0,1,0\n0.5,0.5,0\n1,0,0\n";
    CHECK(load_tabulated(dir / "ok.csv").table()->count() == 3);
  }
  {
    std::ofstream(dir / "nodecay.csv") << "# n=1 count=1\n0,1,0\n";
    CHECK_THROWS_AS(load_tabulated(dir / "nodecay.csv"), ParseError);
  }
  {
    std::ofstream(dir / "badrow.csv") << "# n=1 decay=2 count=3\n0,1,0\n0.5,zz,0\n1,0,0\n";
    try {
      load_tabulated(dir / "badrow.csv");
      FAIL("malformed row accepted");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  {
    std::ofstream(dir / "short.csv") << "# n=1 decay=2 count=2\n0,1\n";
    CHECK_THROWS_AS(load_tabulated(dir / "short.csv"), ParseError);
  }
  {
    std::ofstream(dir / "count.csv") << "# n=1 decay=2 count=4\n0,1,0\n";
    CHECK_THROWS_AS(load_tabulated(dir / "count.csv"), ParseError);
  }
}
