#include "sislab/generator_bank.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sislab/error.hpp"

namespace sislab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Explicit shells summed before switching to the power-law remainder bound.
constexpr int kExplicitShells = 4096;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(GeneratorForm form) {
  switch (form) {
    case GeneratorForm::gaussian: return "gaussian";
    case GeneratorForm::bspline: return "bspline";
    case GeneratorForm::shannon: return "shannon";
    case GeneratorForm::box: return "box";
    case GeneratorForm::tabulated: return "tabulated";
  }
  return "unknown";
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

// ---------------------------------------------------------------------------------------
// TabulatedData

TabulatedData::TabulatedData(int n, double decay, std::vector<double> xi,
                             std::vector<Complex> values)
    : n_(n), decay_(decay), xi_(std::move(xi)), values_(std::move(values)) {
  if (n < 1) throw ParseError("tabulated generator: n must be >= 1", 0);
  if (!std::isfinite(decay) || decay <= 0.0)
    throw ParseError("tabulated generator: decay must be a positive finite number", 0);
  if (xi_.size() != values_.size() * static_cast<std::size_t>(n))
    throw ParseError("tabulated generator: coordinate/value count mismatch", 0);
  if (values_.empty()) throw ParseError("tabulated generator: no samples", 0);

  axes_.resize(n);
  for (int d = 0; d < n; ++d) {
    auto& axis = axes_[d];
    axis.reserve(values_.size());
    for (std::size_t row = 0; row < values_.size(); ++row) axis.push_back(xi_[row * n + d]);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }
  std::size_t cells = 1;
  for (const auto& axis : axes_) cells *= axis.size();
  if (cells != values_.size())
    throw ParseError("tabulated generator: samples do not form a full tensor grid", 0);

  cell_to_row_.assign(cells, static_cast<std::size_t>(-1));
  for (std::size_t row = 0; row < values_.size(); ++row) {
    std::size_t cell = 0;
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double v = xi_[row * n + d];
      const auto& axis = axes_[d];
      const auto it = std::lower_bound(axis.begin(), axis.end(), v);
      cell = cell * axis.size() + static_cast<std::size_t>(it - axis.begin());
      r2 += v * v;
    }
    if (cell_to_row_[cell] != static_cast<std::size_t>(-1))
      throw ParseError("tabulated generator: duplicate sample coordinate", row + 2);
    cell_to_row_[cell] = row;
    const Complex& val = values_[row];
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
      throw ParseError("tabulated generator: non-finite sample", row + 2);
    envelope_constant_ =
        std::max(envelope_constant_, std::abs(val) * std::pow(1.0 + std::sqrt(r2), decay_));
  }
}

Complex TabulatedData::lookup(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != n_) throw DomainError("tabulated lookup: dimension mismatch");
  std::size_t cell = 0;
  for (int d = 0; d < n_; ++d) {
    const auto& axis = axes_[d];
    const double v = xi[d];
    const double slack_lo = 1e-12 * std::max(1.0, std::abs(axis.front()));
    const double slack_hi = 1e-12 * std::max(1.0, std::abs(axis.back()));
    if (!(v >= axis.front() - slack_lo && v <= axis.back() + slack_hi))
      throw DomainError("tabulated lookup: xi = " + format_g17(v) + " outside sampled range [" +
                        format_g17(axis.front()) + ", " + format_g17(axis.back()) + "]");
    auto it = std::lower_bound(axis.begin(), axis.end(), v);
    std::size_t idx;
    if (it == axis.end()) {
      idx = axis.size() - 1;
    } else if (it == axis.begin()) {
      idx = 0;
    } else {
      const std::size_t hi = static_cast<std::size_t>(it - axis.begin());
      idx = (v - axis[hi - 1] <= axis[hi] - v) ? hi - 1 : hi;
    }
    cell = cell * axis.size() + idx;
  }
  return values_[cell_to_row_[cell]];
}

// ---------------------------------------------------------------------------------------
// GeneratorSpec

GeneratorSpec::GeneratorSpec(GeneratorForm form, int n, std::string label)
    : form_(form), n_(n), label_(std::move(label)) {
  if (n < 1) throw UsageError("generator dimension must be >= 1");
}

GeneratorSpec GeneratorSpec::gaussian(double alpha, int n, std::string label) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("gaussian: alpha must be > 0");
  GeneratorSpec g(GeneratorForm::gaussian, n, label.empty() ? "gaussian" : std::move(label));
  g.alpha_ = alpha;
  return g;
}

GeneratorSpec GeneratorSpec::bspline(int order, int n, std::string label) {
  if (order < 0) throw UsageError("bspline: order must be >= 0");
  GeneratorSpec g(GeneratorForm::bspline, n,
                  label.empty() ? "bspline" + std::to_string(order) : std::move(label));
  g.order_ = order;
  return g;
}

GeneratorSpec GeneratorSpec::shannon(int n, std::string label) {
  return GeneratorSpec(GeneratorForm::shannon, n, label.empty() ? "shannon" : std::move(label));
}

GeneratorSpec GeneratorSpec::box(int n, std::string label) {
  return GeneratorSpec(GeneratorForm::box, n, label.empty() ? "box" : std::move(label));
}

GeneratorSpec GeneratorSpec::tabulated(std::shared_ptr<const TabulatedData> data,
                                       std::string label) {
  if (!data) throw UsageError("tabulated: null data");
  GeneratorSpec g(GeneratorForm::tabulated, data->n(),
                  label.empty() ? "tabulated" : std::move(label));
  g.table_ = std::move(data);
  return g;
}

GeneratorSpec GeneratorSpec::scaled(Complex c) const {
  GeneratorSpec g = *this;
  g.scale_ *= c;
  return g;
}

GeneratorSpec GeneratorSpec::with_bessel_potential(double p) const {
  if (!std::isfinite(p)) throw UsageError("Bessel potential order must be finite");
  GeneratorSpec g = *this;
  g.potential_ += p;
  return g;
}

GeneratorSpec GeneratorSpec::relabeled(std::string label) const {
  GeneratorSpec g = *this;
  g.label_ = std::move(label);
  return g;
}

double GeneratorSpec::base_decay() const {
  switch (form_) {
    case GeneratorForm::gaussian: return kInf;
    case GeneratorForm::shannon: return kInf;
    case GeneratorForm::box: return 1.0;
    case GeneratorForm::bspline: return order_ + 1.0;
    case GeneratorForm::tabulated: return table_->decay();
  }
  return 0.0;
}

double GeneratorSpec::base_envelope(double rho) const {
  switch (form_) {
    case GeneratorForm::gaussian: return std::exp(-alpha_ * rho * rho);
    case GeneratorForm::shannon: return rho > 0.5 ? 0.0 : 1.0;
    case GeneratorForm::box:
    case GeneratorForm::bspline: {
      const int power = form_ == GeneratorForm::box ? 1 : order_ + 1;
      return std::min(1.0, std::pow(kPi * rho, -power));
    }
    case GeneratorForm::tabulated:
      return table_->envelope_constant() * std::pow(1.0 + rho, -table_->decay());
  }
  return 0.0;
}

Complex fourier_eval(const GeneratorSpec& spec, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != spec.n())
    throw DomainError("fourier_eval: point dimension does not match generator");
  for (double v : xi)
    if (!std::isfinite(v)) throw DomainError("fourier_eval: non-finite frequency");

  Complex base{0.0, 0.0};
  switch (spec.form()) {
    case GeneratorForm::gaussian: {
      double r2 = 0.0;
      for (double v : xi) r2 += v * v;
      base = std::exp(-spec.alpha() * r2);
      break;
    }
    case GeneratorForm::shannon: {
      bool inside = true;
      for (double v : xi) inside = inside && v >= -0.5 && v < 0.5;
      base = inside ? 1.0 : 0.0;
      break;
    }
    case GeneratorForm::box:
    case GeneratorForm::bspline: {
      const int power = spec.form() == GeneratorForm::box ? 1 : spec.order() + 1;
      double prod = 1.0;
      for (double v : xi) prod *= std::pow(sinc(v), power);
      base = prod;
      break;
    }
    case GeneratorForm::tabulated:
      base = spec.table()->lookup(xi);
      break;
  }
  Complex value = spec.scale() * base;
  if (spec.potential() != 0.0) value /= Weight(spec.potential(), spec.n())(xi);
  return value;
}

double validate_truncation(const GeneratorSpec& spec, const Weight& w, const FreqWindow& win) {
  if (spec.n() != w.n() || spec.n() != win.n())
    throw IncompatibleSpaceError("validate_truncation: dimension mismatch");
  const int n = spec.n();
  // |phi_hat|^2 mu_s^2 = |base|^2 |scale|^2 mu_{s-p}^2 for a Bessel potential of order p.
  const double s = w.s() - spec.potential();
  const double d = spec.base_decay();
  const double criterion = 2.0 * d - 2.0 * s - n;
  if (!(criterion > 0.0)) {
    throw UnsoundTruncationError(
        "generator '" + spec.label() + "' is not admissible at s = " + format_g17(w.s()) +
            ": truncation criterion 2d - 2s - n = 2*" + format_g17(spec.decay()) + " - 2*" +
            format_g17(w.s()) + " - " + std::to_string(n) + " = " + format_g17(criterion) +
            " is not positive",
        criterion);
  }
  if (spec.form() == GeneratorForm::shannon) return 0.0;

  const double scale2 = std::norm(spec.scale());
  // Bound of mu_s(xi)^2 over the shell max_i |xi_i| in [m - 1/2, m + 1/2].
  auto shell_weight = [&](double m) {
    if (s >= 0.0) return std::pow(1.0 + n * (m + 0.5) * (m + 0.5), s);
    return std::pow(1.0 + (m - 0.5) * (m - 0.5), s);
  };
  auto shell_count = [&](double m) {
    return std::pow(2.0 * m + 1.0, n) - std::pow(2.0 * m - 1.0, n);
  };

  int shells = kExplicitShells;
  double gaussian_power = 0.0;
  if (spec.form() == GeneratorForm::gaussian) {
    gaussian_power = n + 2.0 * std::max(s, 0.0) + 2.0;
    const double x_min = std::sqrt(gaussian_power / (4.0 * spec.alpha()));
    shells = std::max(shells, static_cast<int>(std::ceil(x_min)) + 1);
  }

  double tail = 0.0;
  const int K = win.K();
  for (int m = K + 1; m <= K + shells; ++m) {
    const double env = spec.base_envelope(m - 0.5);
    if (env == 0.0) break;
    tail += shell_count(m) * env * env * shell_weight(m);
  }

  // Remainder over shells m > M0, bounded by coef * sum (m - 1/2)^{-q}.
  const double M0 = K + shells;
  const double x0 = M0 - 0.5;
  double coef = 2.0 * n * std::pow(3.0, n - 1);
  coef *= s >= 0.0 ? std::pow(4.0 * (n + 1), s) : 1.0;
  double env_power = 0.0;
  switch (spec.form()) {
    case GeneratorForm::gaussian: {
      env_power = gaussian_power;
      // exp(-2 alpha x^2) <= X^P exp(-2 alpha X^2) x^{-P} for x >= X >= sqrt(P / 4 alpha).
      const double x_first = x0 + 0.5;
      const double log_c = env_power * std::log(x_first) - 2.0 * spec.alpha() * x_first * x_first;
      coef *= std::exp(log_c);
      break;
    }
    case GeneratorForm::box:
    case GeneratorForm::bspline: {
      const int power = spec.form() == GeneratorForm::box ? 1 : spec.order() + 1;
      env_power = 2.0 * power;
      coef *= std::pow(kPi, -env_power);
      break;
    }
    case GeneratorForm::tabulated: {
      env_power = 2.0 * spec.table()->decay();
      coef *= spec.table()->envelope_constant() * spec.table()->envelope_constant();
      break;
    }
    case GeneratorForm::shannon: break;
  }
  const double q = env_power - (n - 1) - 2.0 * s;
  if (q > 1.0 && coef > 0.0) tail += coef * std::pow(x0, 1.0 - q) / (q - 1.0);
  return scale2 * tail;
}

// ---------------------------------------------------------------------------------------
// Tabulated CSV

namespace {

double parse_double(std::string_view token, std::size_t line) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\r')) token.remove_suffix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
    throw ParseError("cannot parse number '" + std::string(token) + "'", line);
  return value;
}

}  // namespace

GeneratorSpec load_tabulated(const std::filesystem::path& path, std::string label) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tabulated generator file " + path.string(), 0);

  std::string header;
  if (!std::getline(in, header) || header.empty() || header[0] != '#')
    throw ParseError("missing '# n=... decay=... count=...' header", 1);

  int n = -1;
  long long count = -1;
  double decay = std::numeric_limits<double>::quiet_NaN();
  bool has_decay = false;
  std::istringstream tokens(header.substr(1));
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("malformed header token '" + token + "'", 1);
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    if (key == "n") {
      n = static_cast<int>(parse_double(val, 1));
    } else if (key == "decay") {
      decay = parse_double(val, 1);
      has_decay = true;
    } else if (key == "count") {
      count = static_cast<long long>(parse_double(val, 1));
    } else {
      throw ParseError("unknown header key '" + key + "'", 1);
    }
  }
  if (!has_decay) throw ParseError("header does not declare decay", 1);
  if (n < 1) throw ParseError("header does not declare a valid n", 1);
  if (count < 1) throw ParseError("header does not declare a valid count", 1);

  std::vector<double> xi;
  std::vector<Complex> values;
  xi.reserve(static_cast<std::size_t>(count) * n);
  values.reserve(static_cast<std::size_t>(count));
  std::string row;
  std::size_t line = 1;
  while (std::getline(in, row)) {
    ++line;
    if (row.empty() || row == "\r") continue;
    std::vector<std::string_view> fields;
    std::string_view view(row);
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      fields.push_back(view.substr(start, comma == std::string_view::npos ? view.size() - start
                                                                          : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != static_cast<std::size_t>(n) + 2)
      throw ParseError("expected " + std::to_string(n + 2) + " fields, found " +
                           std::to_string(fields.size()),
                       line);
    for (int d = 0; d < n; ++d) xi.push_back(parse_double(fields[d], line));
    values.emplace_back(parse_double(fields[n], line), parse_double(fields[n + 1], line));
  }
  if (static_cast<long long>(values.size()) != count)
    throw ParseError("header declares count=" + std::to_string(count) + " but file has " +
                         std::to_string(values.size()) + " rows",
                     line);
  auto data = std::make_shared<TabulatedData>(n, decay, std::move(xi), std::move(values));
  return GeneratorSpec::tabulated(std::move(data), std::move(label));
}

void write_tabulated(const std::filesystem::path& path, const TabulatedData& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "# n=" << data.n() << " decay=" << format_g17(data.decay()) << " count=" << data.count()
      << '\n';
  const auto xi = data.xi();
  const auto values = data.values();
  for (std::size_t row = 0; row < data.count(); ++row) {
    for (int d = 0; d < data.n(); ++d) out << format_g17(xi[row * data.n() + d]) << ',';
    out << format_g17(values[row].real()) << ',' << format_g17(values[row].imag()) << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace sislab
