#include "sislab/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sislab/error.hpp"
#include "sislab/parallel.hpp"

namespace sislab {

namespace {

Eigen::MatrixXcd stack_fibers(std::span<const FiberField> fields, std::size_t j) {
  Eigen::MatrixXcd phi(fields.front().rescaled().rows(), static_cast<Eigen::Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i)
    phi.col(static_cast<Eigen::Index>(i)) = fields[i].fiber(j);
  return phi;
}

Eigen::MatrixXcd pseudo_inverse(const Eigen::MatrixXcd& g, const RankPolicy& policy) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
  const auto& lambda = eig.eigenvalues();
  const double thr = policy.threshold(lambda(lambda.size() - 1));
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > thr) inv(i) = 1.0 / lambda(i);
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

DualSystem dual_generators(std::span<const FiberField> fields, const GramianField& G,
                           RankPolicy policy) {
  if (fields.size() != G.generators())
    throw IncompatibleSpaceError("dual_generators: Gramian and generator count differ");
  require_same_space(fields, "dual_generators");
  DualSystem out;
  out.primal_report = classify_system(G, policy);
  if (!out.primal_report.is_frame)
    throw NotAFrameError("dual_generators: system is not a frame (A = " +
                         std::to_string(out.primal_report.frame_lower) + ")");

  const auto& proto = fields.front();
  for (const auto& f : fields)
    out.duals.push_back(
        FiberField::zero(proto.grid(), proto.window(), proto.weight(), "dual(" + f.label() + ")"));

  parallel_for(proto.grid().size(), [&](std::size_t j) {
    const Eigen::MatrixXcd theta = stack_fibers(fields, j) * pseudo_inverse(G.at(j), policy);
    for (std::size_t i = 0; i < fields.size(); ++i)
      out.duals[i].rescaled().col(static_cast<Eigen::Index>(j)) =
          theta.col(static_cast<Eigen::Index>(i));
  });

  // ||S^{-1}|| <= 1/A scales the primal tails.
  const double inv_a = 1.0 / out.primal_report.frame_lower;
  for (std::size_t i = 0; i < fields.size(); ++i)
    out.duals[i].set_tail(fields[i].tail() * inv_a * inv_a);

  out.dual_report = classify_system(gramian_field(out.duals), policy);
  return out;
}

Reconstruction reconstruct(const FiberField& f, std::span<const FiberField> primal,
                           std::span<const FiberField> dual, double tol) {
  if (primal.empty() || primal.size() != dual.size())
    throw UsageError("reconstruct: primal and dual systems must have the same nonzero size");
  require_same_space(primal, "reconstruct");
  require_same_space(dual, "reconstruct");
  if (!f.same_space(primal.front()) || !f.same_space(dual.front()))
    throw IncompatibleSpaceError("reconstruct: field and systems live in different spaces");

  const std::size_t points = f.grid().size();
  Reconstruction out{f, f, 0.0, 0.0};
  std::vector<double> membership(points, 0.0);
  parallel_for(points, [&](std::size_t j) {
    const Eigen::MatrixXcd phi = stack_fibers(primal, j);
    const Eigen::MatrixXcd theta = stack_fibers(dual, j);
    const Eigen::VectorXcd fj = f.fiber(j);
    const double fnorm = fj.norm();
    if (fnorm > 0.0) {
      // Least-squares projection onto span(Phi), independent of the dual.
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(phi);
      const Eigen::VectorXcd x = cod.solve(fj);
      membership[j] = (fj - phi * x).norm() / fnorm;
    }
    const auto jj = static_cast<Eigen::Index>(j);
    out.via_primal_synthesis.rescaled().col(jj) = phi * (theta.adjoint() * fj);
    out.via_dual_synthesis.rescaled().col(jj) = theta * (phi.adjoint() * fj);
  });
  const auto worst = std::max_element(membership.begin(), membership.end());
  if (*worst > tol) {
    const auto j = static_cast<std::size_t>(worst - membership.begin());
    throw DomainViolationError("reconstruct: field is not in the shift-invariant space (grid "
                               "point " + std::to_string(j) + ", relative residual " +
                                   std::to_string(*worst) + ")",
                               *worst, j);
  }
  const double fnorm = std::sqrt(f.field_norm_squared());
  auto rel = [&](const FiberField& g) {
    if (fnorm == 0.0) return std::sqrt(g.field_norm_squared());
    const FiberField diff(f.grid(), f.window(), f.weight(), g.rescaled() - f.rescaled());
    return std::sqrt(diff.field_norm_squared()) / fnorm;
  };
  out.primal_residual = rel(out.via_primal_synthesis);
  out.dual_residual = rel(out.via_dual_synthesis);
  out.via_primal_synthesis.set_label("reconstructed(" + f.label() + ")");
  out.via_dual_synthesis.set_label("reconstructed(" + f.label() + ")");
  return out;
}

double biorthogonality_check(std::span<const FiberField> primal, std::span<const FiberField> dual,
                             int k_max, const AnalysisReport& primal_report) {
  if (!primal_report.is_riesz)
    throw NotRieszError("biorthogonality holds only for Riesz families; this system is not one");
  if (primal.size() != dual.size() || primal.empty())
    throw UsageError("biorthogonality_check: system sizes differ");
  if (k_max < 0) throw UsageError("biorthogonality_check: k_max must be >= 0");
  require_same_space(primal, "biorthogonality_check");
  require_same_space(dual, "biorthogonality_check");

  const auto& grid = primal.front().grid();
  const std::size_t r = primal.size();
  // <T_k phi_i, T_l theta_j> = int exp(-2 pi i <k - l, t>) <phi_i(t), theta_j(t)> dt depends
  // only on m = k - l with |m_d| <= 2 k_max.
  std::vector<Eigen::MatrixXcd> pairing(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    pairing[j] = stack_fibers(dual, j).adjoint() * stack_fibers(primal, j);  // (j, i) entries

  const FreqWindow offsets(grid.n(), 2 * k_max);
  double worst = 0.0;
  for (std::size_t pos = 0; pos < offsets.size(); ++pos) {
    const auto m = offsets.index(pos);
    bool zero = true;
    for (int v : m) zero = zero && v == 0;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r),
                                                  static_cast<Eigen::Index>(r));
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const auto t = grid.point(j);
      double phase = 0.0;
      for (int d = 0; d < grid.n(); ++d) phase += m[d] * t[d];
      acc += std::polar(1.0, -2.0 * std::numbers::pi * phase) * pairing[j];
    }
    acc *= grid.weight();
    if (zero) acc -= Eigen::MatrixXcd::Identity(acc.rows(), acc.cols());
    worst = std::max(worst, acc.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace sislab
