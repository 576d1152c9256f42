#include "sislab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

#include "sislab/error.hpp"
#include "sislab/parallel.hpp"

namespace sislab::oracle {

namespace {

// Fixed chunking keeps the reduction order independent of the thread count.
constexpr std::size_t kChunks = 64;

// Node coordinates for linear node index `idx` on a per-axis midpoint lattice.
void node(std::size_t idx, int n, std::size_t per_axis, double band, int q, double* xi) {
  for (int d = n - 1; d >= 0; --d) {
    const std::size_t i = idx % per_axis;
    idx /= per_axis;
    xi[d] = -band + (static_cast<double>(i) + 0.5) / q;
  }
}

double tail_certificate(const GeneratorSpec& spec, const Weight& w, int n, int K) {
  return validate_truncation(spec, w, FreqWindow(n, K));
}

// Midpoint sums of every (a, b, m) correlation at a single resolution.
std::vector<Complex> correlate(std::span<const GeneratorSpec> specs, const FreqWindow& offsets,
                               const Weight& w, const QuadratureScheme& s) {
  const int n = s.n;
  const int R = offsets.K();
  const std::size_t r = specs.size();
  const std::size_t nm = offsets.size();
  const std::size_t per_axis = s.nodes_per_axis();
  const std::size_t total = s.total_nodes();
  const double cell = std::pow(1.0 / s.q, n);

  std::vector<std::vector<Complex>> partial(kChunks, std::vector<Complex>(r * r * nm));
  parallel_for(kChunks, [&](std::size_t c) {
    const std::size_t lo = total * c / kChunks;
    const std::size_t hi = total * (c + 1) / kChunks;
    auto& acc = partial[c];
    std::vector<double> xi(static_cast<std::size_t>(n));
    std::vector<Complex> v(r);
    std::vector<Complex> powers(static_cast<std::size_t>(n) * (2 * R + 1));
    std::vector<Complex> phase(nm);
    for (std::size_t idx = lo; idx < hi; ++idx) {
      node(idx, n, per_axis, s.band(), s.q, xi.data());
      const double mu = mu_eval(w, xi);
      bool any = false;
      for (std::size_t a = 0; a < r; ++a) {
        v[a] = fourier_eval(specs[a], xi) * mu;
        any = any || v[a] != Complex(0.0);
      }
      if (!any) continue;
      for (int d = 0; d < n; ++d) {
        Complex* p = powers.data() + static_cast<std::size_t>(d) * (2 * R + 1);
        const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * xi[static_cast<std::size_t>(d)]);
        p[R] = 1.0;
        for (int m = 1; m <= R; ++m) {
          p[R + m] = p[R + m - 1] * z;
          p[R - m] = std::conj(p[R + m]);
        }
      }
      for (std::size_t pos = 0; pos < nm; ++pos) {
        const auto m = offsets.index(pos);
        Complex ph = 1.0;
        for (int d = 0; d < n; ++d)
          ph *= powers[static_cast<std::size_t>(d) * (2 * R + 1) +
                       static_cast<std::size_t>(m[static_cast<std::size_t>(d)] + R)];
        phase[pos] = ph;
      }
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
          const Complex prod = v[a] * std::conj(v[b]);
          if (prod == Complex(0.0)) continue;
          Complex* out = acc.data() + (a * r + b) * nm;
          for (std::size_t pos = 0; pos < nm; ++pos) out[pos] += prod * phase[pos];
        }
    }
  });
  std::vector<Complex> sum(r * r * nm);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p[i];
  for (auto& x : sum) x *= cell;
  return sum;
}

QuadratureScheme halved(const QuadratureScheme& s) {
  if (s.q < 2) throw UsageError("oracle: quadrature needs q >= 2 for the error estimate");
  QuadratureScheme h = s;
  h.q = s.q / 2;
  return h;
}

template <class T, class Mag>
T ordered_sum(std::vector<T> terms, SumOrder order, Mag mag) {
  if (order == SumOrder::descending_magnitude)
    std::stable_sort(terms.begin(), terms.end(),
                     [&](const T& x, const T& y) { return mag(x) > mag(y); });
  T acc{};
  for (const auto& x : terms) acc += x;
  return acc;
}

}  // namespace

std::size_t QuadratureScheme::total_nodes() const {
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= nodes_per_axis();
  return total;
}

InnerValue direct_inner(const GeneratorSpec& f, const GeneratorSpec& g, std::span<const int> shift,
                        const Weight& w, const QuadratureScheme& scheme) {
  if (static_cast<int>(shift.size()) != scheme.n || f.n() != scheme.n || g.n() != scheme.n ||
      w.n() != scheme.n)
    throw IncompatibleSpaceError("direct_inner: dimension mismatch");
  int radius = 0;
  for (int k : shift) radius = std::max(radius, std::abs(k));
  const GeneratorSpec pair[] = {f, g};
  const Correlations corr = cross_correlations(pair, radius, w, scheme);
  InnerValue out;
  out.value = corr.at(0, 1, shift);
  out.quadrature_bound = corr.quadrature_bound;
  out.tail_bound = std::sqrt(tail_certificate(f, w, scheme.n, scheme.K) *
                             tail_certificate(g, w, scheme.n, scheme.K));
  return out;
}

Complex Correlations::at(std::size_t a, std::size_t b, std::span<const int> m) const {
  const std::size_t pos = offsets.position(m);
  if (pos == FreqWindow::npos) throw DomainError("correlation offset outside computed radius");
  return values[a][b][pos];
}

Correlations cross_correlations(std::span<const GeneratorSpec> specs, int radius, const Weight& w,
                                const QuadratureScheme& scheme) {
  if (specs.empty()) throw UsageError("cross_correlations: no generators");
  for (const auto& s : specs)
    if (s.n() != scheme.n) throw IncompatibleSpaceError("cross_correlations: dimension mismatch");
  Correlations out{FreqWindow(scheme.n, radius), {}, 0.0, 0.0};
  const auto fine = correlate(specs, out.offsets, w, scheme);
  const auto coarse = correlate(specs, out.offsets, w, halved(scheme));
  const std::size_t r = specs.size();
  const std::size_t nm = out.offsets.size();
  out.values.assign(r, std::vector<std::vector<Complex>>(r, std::vector<Complex>(nm)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t pos = 0; pos < nm; ++pos) {
        const std::size_t i = (a * r + b) * nm + pos;
        out.values[a][b][pos] = fine[i];
        out.quadrature_bound = std::max(out.quadrature_bound, std::abs(fine[i] - coarse[i]) / 3.0);
      }
  for (const auto& s : specs)
    out.tail_bound = std::max(out.tail_bound, tail_certificate(s, w, scheme.n, scheme.K));
  return out;
}

int support_width(const GeneratorSpec& spec) {
  switch (spec.form()) {
    case GeneratorForm::bspline:
      return spec.order() + 1;
    case GeneratorForm::box:
      return 1;
    case GeneratorForm::shannon:
      return 0;
    case GeneratorForm::gaussian:
      return 8;
    case GeneratorForm::tabulated:
      return 8;
  }
  return 8;
}

namespace {
constexpr int kExtraShell = 2;

int max_support(std::span<const GeneratorSpec> specs) {
  int sw = 0;
  for (const auto& s : specs) sw = std::max(sw, support_width(s));
  return sw;
}
}  // namespace

int frame_radius(std::span<const GeneratorSpec> specs, int k_max) {
  return 2 * k_max + max_support(specs) + kExtraShell;
}

FrameSample frame_inequality_sample(std::span<const GeneratorSpec> specs,
                                    const ShiftCoefficients& coeffs, double A, double B,
                                    const Weight& w, const QuadratureScheme& scheme) {
  const Correlations D =
      cross_correlations(specs, frame_radius(specs, coeffs.shifts.K()), w, scheme);
  return frame_inequality_sample(specs, coeffs, A, B, D);
}

FrameSample frame_inequality_sample(std::span<const GeneratorSpec> specs,
                                    const ShiftCoefficients& coeffs, double A, double B,
                                    const Correlations& D) {
  if (coeffs.generators() != specs.size() || D.values.size() != specs.size())
    throw UsageError("frame_inequality_sample: coefficient and generator counts differ");
  const int n = coeffs.shifts.n();
  const int k_max = coeffs.shifts.K();
  const int sw = max_support(specs);
  const int k_out = k_max + sw + kExtraShell;
  if (D.offsets.K() < k_max + k_out)
    throw UsageError("frame_inequality_sample: correlations computed for too small a radius");
  const std::size_t r = specs.size();

  double c1 = 0.0;
  for (const auto& row : coeffs.values)
    for (const auto& c : row) c1 += std::abs(c);

  // ||f||^2 = sum c_{j,l} conj(c_{j',l'}) <phi_l, T_{j'-j} phi_l'>.
  std::vector<int> diff(static_cast<std::size_t>(n));
  Complex norm2 = 0.0;
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t p = 0; p < coeffs.shifts.size(); ++p) {
      const Complex c = coeffs.values[l][p];
      if (c == Complex(0.0)) continue;
      const auto j = coeffs.shifts.index(p);
      for (std::size_t l2 = 0; l2 < r; ++l2)
        for (std::size_t p2 = 0; p2 < coeffs.shifts.size(); ++p2) {
          const Complex c2 = coeffs.values[l2][p2];
          if (c2 == Complex(0.0)) continue;
          const auto j2 = coeffs.shifts.index(p2);
          for (int d = 0; d < n; ++d) diff[static_cast<std::size_t>(d)] = j2[d] - j[d];
          norm2 += c * std::conj(c2) * D.at(l, l2, diff);
        }
    }

  // <f, T_k phi_i> = sum c_{j,l} <phi_l, T_{k-j} phi_i>, over |k| <= k_out.
  const FreqWindow outer(n, k_out);
  double sum = 0.0;
  double shell = 0.0;
  double abs_sum = 0.0;
  for (std::size_t kp = 0; kp < outer.size(); ++kp) {
    const auto k = outer.index(kp);
    int kinf = 0;
    for (int v : k) kinf = std::max(kinf, std::abs(v));
    for (std::size_t i = 0; i < r; ++i) {
      Complex x = 0.0;
      for (std::size_t l = 0; l < r; ++l)
        for (std::size_t p = 0; p < coeffs.shifts.size(); ++p) {
          const Complex c = coeffs.values[l][p];
          if (c == Complex(0.0)) continue;
          const auto j = coeffs.shifts.index(p);
          for (int d = 0; d < n; ++d) diff[static_cast<std::size_t>(d)] = k[d] - j[d];
          x += c * D.at(l, i, diff);
        }
      const double x2 = std::norm(x);
      sum += x2;
      abs_sum += std::abs(x);
      if (kinf > k_max + sw) shell += x2;
    }
  }

  FrameSample out;
  out.norm_squared = norm2.real();
  out.coefficient_sum = sum;
  out.lower_margin = sum - A * out.norm_squared;
  out.upper_margin = B * out.norm_squared - sum;
  // Per-entry error e propagates linearly through both quadratic forms; the outermost shell
  // stands in for the discarded remainder of the k-sum.
  const double e = D.quadrature_bound + D.tail_bound;
  const double terms = static_cast<double>(outer.size() * r);
  out.tolerance = 2.0 * c1 * e * abs_sum + terms * (c1 * e) * (c1 * e) +
                  std::max(B, 1.0) * c1 * c1 * e + shell + 1e-12 * (1.0 + sum);
  out.pass = out.lower_margin >= -out.tolerance && out.upper_margin >= -out.tolerance;
  return out;
}

double bracket_bruteforce(const GeneratorSpec& spec, const Weight& w, std::span<const double> t,
                          int K_large, SumOrder order) {
  return cross_bracket_bruteforce(spec, spec, w, t, K_large, order).real();
}

Complex cross_bracket_bruteforce(const GeneratorSpec& a, const GeneratorSpec& b, const Weight& w,
                                 std::span<const double> t, int K_large, SumOrder order) {
  const int n = static_cast<int>(t.size());
  if (a.n() != n || b.n() != n || w.n() != n)
    throw IncompatibleSpaceError("cross_bracket_bruteforce: dimension mismatch");
  const FreqWindow win(n, K_large);
  std::vector<Complex> terms(win.size());
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (std::size_t pos = 0; pos < win.size(); ++pos) {
    const auto k = win.index(pos);
    for (int d = 0; d < n; ++d)
      xi[static_cast<std::size_t>(d)] = t[static_cast<std::size_t>(d)] + k[d];
    const double mu = mu_eval(w, xi);
    terms[pos] = fourier_eval(a, xi) * std::conj(fourier_eval(b, xi)) * (mu * mu);
  }
  return ordered_sum(std::move(terms), order, [](const Complex& z) { return std::abs(z); });
}

double sample_norm_squared(int n, std::span<const double> xi, std::span<const Complex> values,
                           const Weight& w, double cell) {
  if (xi.size() != values.size() * static_cast<std::size_t>(n))
    throw IncompatibleSpaceError("sample_norm_squared: sample layout mismatch");
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double mu = mu_eval(w, xi.subspan(i * static_cast<std::size_t>(n),
                                            static_cast<std::size_t>(n)));
    terms[i] = std::norm(values[i]) * mu * mu;
  }
  return cell * ordered_sum(std::move(terms), SumOrder::ascending_index,
                            [](double x) { return std::abs(x); });
}

void write_bracket_csv(const std::filesystem::path& path, int n, std::span<const double> t,
                       std::span<const double> values) {
  if (t.size() != values.size() * static_cast<std::size_t>(n))
    throw IncompatibleSpaceError("write_bracket_csv: layout mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  char buf[64];
  for (int d = 0; d < n; ++d) out << (d ? "," : "") << "t" << d + 1;
  out << ",value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (int d = 0; d < n; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", t[i * static_cast<std::size_t>(n) +
                                                static_cast<std::size_t>(d)]);
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out << buf << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace sislab::oracle
