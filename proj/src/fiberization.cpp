#include "sislab/fiberization.hpp"

#include <cmath>
#include <numbers>

#include "sislab/error.hpp"
#include "sislab/parallel.hpp"

namespace sislab {

namespace {

Complex modulation(std::span<const int> k, std::span<const double> t) {
  double phase = 0.0;
  for (std::size_t d = 0; d < k.size(); ++d) phase += k[d] * t[d];
  return std::polar(1.0, -2.0 * std::numbers::pi * phase);
}

}  // namespace

FiberField::FiberField(TorusGrid grid, FreqWindow window, Weight weight,
                       Eigen::MatrixXcd rescaled, double tail, std::string label)
    : grid_(std::move(grid)),
      window_(std::move(window)),
      weight_(weight),
      data_(std::move(rescaled)),
      tail_(tail),
      label_(std::move(label)),
      mu_k_(window_weights(weight_, window_)) {
  if (grid_.n() != window_.n() || grid_.n() != weight_.n())
    throw IncompatibleSpaceError("fiber field: grid, window and weight dimensions differ");
  if (static_cast<std::size_t>(data_.rows()) != window_.size() ||
      static_cast<std::size_t>(data_.cols()) != grid_.size())
    throw IncompatibleSpaceError("fiber field: data shape does not match window x grid");
}

FiberField FiberField::zero(TorusGrid grid, FreqWindow window, Weight weight, std::string label) {
  Eigen::MatrixXcd data = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(window.size()),
                                                 static_cast<Eigen::Index>(grid.size()));
  return FiberField(std::move(grid), std::move(window), weight, std::move(data), 0.0,
                    std::move(label));
}

Complex FiberField::component(std::size_t j, std::size_t pos) const {
  return data_(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(j)) / mu_k_[pos];
}

WeightedSeq FiberField::sequence(std::size_t j) const {
  std::vector<Complex> c(window_.size());
  for (std::size_t pos = 0; pos < c.size(); ++pos) c[pos] = component(j, pos);
  return WeightedSeq(window_, weight_, std::move(c));
}

double FiberField::norm_squared(std::size_t j) const {
  return data_.col(static_cast<Eigen::Index>(j)).squaredNorm();
}

double FiberField::field_norm_squared() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < grid_.size(); ++j) acc += norm_squared(j);
  return acc * grid_.weight();
}

bool FiberField::same_space(const FiberField& other) const {
  return grid_ == other.grid_ && window_ == other.window_ && weight_ == other.weight_;
}

void require_same_space(std::span<const FiberField> fields, const char* context) {
  for (const auto& f : fields)
    if (!f.same_space(fields.front()))
      throw IncompatibleSpaceError(std::string(context) +
                                   ": fiber fields use different grids, windows or weights");
}

FiberField fiberize(const GeneratorSpec& spec, const Weight& w, const TorusGrid& grid,
                    const FreqWindow& win) {
  if (spec.n() != grid.n()) throw IncompatibleSpaceError("fiberize: dimension mismatch");
  const double tail = validate_truncation(spec, w, win);
  const int n = grid.n();
  Eigen::MatrixXcd data(static_cast<Eigen::Index>(win.size()),
                        static_cast<Eigen::Index>(grid.size()));
  parallel_for(grid.size(), [&](std::size_t j) {
    const auto t = grid.point(j);
    std::vector<double> xi(n);
    for (std::size_t pos = 0; pos < win.size(); ++pos) {
      const auto k = win.index(pos);
      for (int d = 0; d < n; ++d) xi[d] = t[d] + k[d];
      data(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(j)) =
          fourier_eval(spec, xi) * w(xi);
    }
  });
  return FiberField(grid, win, w, std::move(data), tail, spec.label());
}

FourierSamples defiberize(const FiberField& field) {
  const auto& grid = field.grid();
  const auto& win = field.window();
  const int n = grid.n();
  FourierSamples out;
  out.n = n;
  out.xi.resize(grid.size() * win.size() * n);
  out.values.resize(grid.size() * win.size());
  parallel_for(grid.size(), [&](std::size_t j) {
    const auto t = grid.point(j);
    for (std::size_t pos = 0; pos < win.size(); ++pos) {
      const std::size_t i = j * win.size() + pos;
      const auto k = win.index(pos);
      for (int d = 0; d < n; ++d) out.xi[i * n + d] = t[d] + k[d];
      out.values[i] =
          field.rescaled()(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(j)) /
          field.weight()(out.point(i));
    }
  });
  return out;
}

FiberField fiberize_samples(const FourierSamples& samples, const Weight& w, const TorusGrid& grid,
                            const FreqWindow& win, std::string label) {
  if (samples.size() != grid.size() * win.size() || samples.n != grid.n())
    throw IncompatibleSpaceError("fiberize_samples: sample layout does not match grid x window");
  Eigen::MatrixXcd data(static_cast<Eigen::Index>(win.size()),
                        static_cast<Eigen::Index>(grid.size()));
  parallel_for(grid.size(), [&](std::size_t j) {
    for (std::size_t pos = 0; pos < win.size(); ++pos) {
      const std::size_t i = j * win.size() + pos;
      data(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(j)) =
          samples.values[i] * w(samples.point(i));
    }
  });
  return FiberField(grid, win, w, std::move(data), 0.0, std::move(label));
}

FourierSamples bessel_shift(const FourierSamples& samples, const Weight& w) {
  if (samples.n != w.n()) throw IncompatibleSpaceError("bessel_shift: dimension mismatch");
  FourierSamples out = samples;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] /= w(out.point(i));
  return out;
}

FiberField shift_field(const FiberField& field, std::span<const int> shift) {
  if (static_cast<int>(shift.size()) != field.grid().n())
    throw IncompatibleSpaceError("shift_field: shift dimension mismatch");
  FiberField out = field;
  for (std::size_t j = 0; j < field.grid().size(); ++j)
    out.rescaled().col(static_cast<Eigen::Index>(j)) *= modulation(shift, field.grid().point(j));
  return out;
}

FiberField synthesize(std::span<const FiberField> generators, const ShiftCoefficients& coeffs) {
  if (generators.empty()) throw UsageError("synthesize: no generators");
  require_same_space(generators, "synthesize");
  if (coeffs.generators() != generators.size())
    throw IncompatibleSpaceError("synthesize: coefficient count does not match generators");
  const auto& grid = generators.front().grid();
  if (coeffs.shifts.n() != grid.n())
    throw IncompatibleSpaceError("synthesize: shift dimension mismatch");

  FiberField out = FiberField::zero(grid, generators.front().window(),
                                    generators.front().weight(), "synthesized");
  double tail = 0.0;
  parallel_for(grid.size(), [&](std::size_t j) {
    const auto t = grid.point(j);
    for (std::size_t i = 0; i < generators.size(); ++i) {
      Complex symbol{0.0, 0.0};
      for (std::size_t pos = 0; pos < coeffs.shifts.size(); ++pos)
        symbol += coeffs.values[i][pos] * modulation(coeffs.shifts.index(pos), t);
      out.rescaled().col(static_cast<Eigen::Index>(j)) +=
          symbol * generators[i].fiber(j);
    }
  });
  // Tail of the combination: (sum_i ||c_i||_1 sqrt(tail_i))^2.
  for (std::size_t i = 0; i < generators.size(); ++i) {
    double c1 = 0.0;
    for (const auto& c : coeffs.values[i]) c1 += std::abs(c);
    tail += c1 * std::sqrt(generators[i].tail());
  }
  out.set_tail(tail * tail);
  return out;
}

Complex field_inner(const FiberField& f, const FiberField& g) {
  if (!f.same_space(g)) throw IncompatibleSpaceError("field_inner: different spaces");
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < f.grid().size(); ++j) acc += g.fiber(j).dot(f.fiber(j));
  return acc * f.grid().weight();
}

FiberField operator+(const FiberField& a, const FiberField& b) {
  if (!a.same_space(b)) throw IncompatibleSpaceError("fiber sum: different spaces");
  const double root = std::sqrt(a.tail()) + std::sqrt(b.tail());
  return FiberField(a.grid(), a.window(), a.weight(), a.rescaled() + b.rescaled(), root * root,
                    a.label() + "+" + b.label());
}

FiberField operator*(Complex c, const FiberField& a) {
  return FiberField(a.grid(), a.window(), a.weight(), c * a.rescaled(), std::norm(c) * a.tail(),
                    a.label());
}

}  // namespace sislab
