#include "sislab/gram_analysis.hpp"

#include <algorithm>
#include <limits>

#include "sislab/error.hpp"
#include "sislab/parallel.hpp"

namespace sislab {

GramianField::GramianField(TorusGrid grid, std::size_t r, std::vector<Eigen::MatrixXcd> matrices,
                           double tail, std::vector<std::string> labels,
                           std::size_t window_size)
    : grid_(std::move(grid)),
      r_(r),
      matrices_(std::move(matrices)),
      tail_(tail),
      labels_(std::move(labels)),
      window_size_(window_size) {
  if (matrices_.size() != grid_.size())
    throw IncompatibleSpaceError("gramian field: one matrix per grid point required");
  for (const auto& m : matrices_)
    if (static_cast<std::size_t>(m.rows()) != r_ || static_cast<std::size_t>(m.cols()) != r_)
      throw IncompatibleSpaceError("gramian field: matrices must be r x r");
}

GramianField gramian_field(std::span<const FiberField> fields) {
  if (fields.empty()) throw UsageError("gramian_field: at least one generator required");
  require_same_space(fields, "gramian_field");
  const auto& grid = fields.front().grid();
  const std::size_t r = fields.size();
  std::vector<Eigen::MatrixXcd> mats(grid.size());
  parallel_for(grid.size(), [&](std::size_t j) {
    Eigen::MatrixXcd g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < r; ++i) {
      const auto fi = fields[i].fiber(j);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = fi.squaredNorm();
      for (std::size_t k = i + 1; k < r; ++k) {
        // G_ik = <phi_k(t), phi_i(t)> = phi_i^H phi_k.
        const Complex v = fi.dot(fields[k].fiber(j));
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
        g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = std::conj(v);
      }
    }
    mats[j] = std::move(g);
  });
  double tail = 0.0;
  std::vector<std::string> labels;
  for (const auto& f : fields) {
    tail += f.tail();
    labels.push_back(f.label());
  }
  return GramianField(grid, r, std::move(mats), tail, std::move(labels),
                      fields.front().window().size());
}

std::vector<Eigen::VectorXd> eigenvalue_field(const GramianField& G) {
  std::vector<Eigen::VectorXd> out(G.size());
  parallel_for(G.size(), [&](std::size_t j) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(G.at(j), Eigen::EigenvaluesOnly);
    out[j] = solver.eigenvalues();
  });
  return out;
}

double DimensionSpectrum::spectrum_measure() const {
  if (spectrum.empty()) return 0.0;
  const auto count = std::count(spectrum.begin(), spectrum.end(), char{1});
  return static_cast<double>(count) / static_cast<double>(spectrum.size());
}

namespace {

int rank_of(const Eigen::VectorXd& ascending, const RankPolicy& policy) {
  if (ascending.size() == 0) return 0;
  const double thr = policy.threshold(ascending(ascending.size() - 1));
  int rank = 0;
  for (Eigen::Index i = 0; i < ascending.size(); ++i)
    if (ascending(i) > thr) ++rank;
  return rank;
}

DimensionSpectrum dims_from_eigen(const std::vector<Eigen::VectorXd>& eig,
                                  const RankPolicy& policy) {
  DimensionSpectrum out;
  out.dimension.resize(eig.size());
  out.spectrum.resize(eig.size());
  for (std::size_t j = 0; j < eig.size(); ++j) {
    out.dimension[j] = rank_of(eig[j], policy);
    out.spectrum[j] = out.dimension[j] > 0 ? 1 : 0;
  }
  return out;
}

void check_policy(const RankPolicy& policy) {
  if (!(policy.eps_rank > 0.0 && policy.eps_rank < 1.0))
    throw UsageError("rank tolerance eps_rank must lie in (0,1)");
  if (!(policy.eps_abs > 0.0)) throw UsageError("absolute rank floor eps_abs must be positive");
}

}  // namespace

DimensionSpectrum dimension_and_spectrum(const GramianField& G, RankPolicy policy) {
  check_policy(policy);
  return dims_from_eigen(eigenvalue_field(G), policy);
}

AnalysisReport classify_system(const GramianField& G, RankPolicy policy) {
  check_policy(policy);
  AnalysisReport rep;
  rep.generators = G.generators();
  rep.labels = G.labels();
  rep.policy = policy;
  rep.tail = G.tail();
  rep.eigenvalues = eigenvalue_field(G);
  rep.dims = dims_from_eigen(rep.eigenvalues, policy);

  double lower = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  bool any_spectrum = false;
  bool full_rank = true;
  for (std::size_t j = 0; j < rep.eigenvalues.size(); ++j) {
    const auto& ev = rep.eigenvalues[j];
    const double top = ev(ev.size() - 1);
    if (top > upper) {
      upper = top;
      rep.argmax_index = j;
    }
    const int rank = rep.dims.dimension[j];
    if (rank != static_cast<int>(G.generators())) full_rank = false;
    if (rank == 0) continue;
    any_spectrum = true;
    const double smallest_nonzero = ev(ev.size() - rank);
    if (smallest_nonzero < lower) {
      lower = smallest_nonzero;
      rep.argmin_index = j;
    }
  }
  if (!any_spectrum)
    throw DegenerateSystemError("system is degenerate: every generator fiber vanishes on the grid");

  rep.bessel_bound = upper;
  rep.frame_lower = lower;
  rep.frame_upper = upper;
  rep.is_frame = lower > policy.eps_rank * upper;
  rep.is_riesz = rep.is_frame && full_rank;
  rep.fundamental_in_window =
      G.window_size() > 0 &&
      std::all_of(rep.dims.dimension.begin(), rep.dims.dimension.end(),
                  [&](int d) { return static_cast<std::size_t>(d) == G.window_size(); });
  if (rep.is_riesz) {
    rep.riesz_lower = lower;
    rep.riesz_upper = upper;
  }
  return rep;
}

}  // namespace sislab
