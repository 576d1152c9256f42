#include "sislab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sislab/error.hpp"
#include "sislab/parallel.hpp"

namespace sislab {

Eigen::MatrixXcd DecompositionResult::basis(std::size_t j) const {
  const int d = rank[j];
  const auto rows = slots.empty() ? 0 : slots.front().rescaled().rows();
  Eigen::MatrixXcd q(rows, d);
  for (int i = 0; i < d; ++i) q.col(i) = slots[static_cast<std::size_t>(i)].fiber(j);
  return q;
}

int DecompositionResult::max_rank() const {
  return rank.empty() ? 0 : *std::max_element(rank.begin(), rank.end());
}

DecompositionResult decompose_fsi(std::span<const FiberField> fields, RankPolicy policy) {
  if (fields.empty()) throw UsageError("decompose_fsi: at least one generator required");
  require_same_space(fields, "decompose_fsi");
  const auto& proto = fields.front();
  const std::size_t r = fields.size();
  const std::size_t points = proto.grid().size();

  DecompositionResult out;
  out.rank.assign(points, 0);
  out.spectra.assign(r, std::vector<char>(points, 0));
  for (std::size_t i = 0; i < r; ++i) {
    out.slots.push_back(FiberField::zero(proto.grid(), proto.window(), proto.weight(),
                                         "psi" + std::to_string(i + 1)));
  }

  parallel_for(points, [&](std::size_t j) {
    std::vector<Eigen::VectorXcd> residual(r);
    double max_norm2 = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      residual[i] = fields[i].fiber(j);
      max_norm2 = std::max(max_norm2, residual[i].squaredNorm());
    }
    const double cutoff = policy.threshold(max_norm2);
    // d(t) follows the Gramian rank rule so slot counts never disagree with gram_analysis.
    Eigen::MatrixXcd gram(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            residual[a].dot(residual[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const auto& lambda = eig.eigenvalues();
    const double lambda_cut = policy.threshold(lambda(lambda.size() - 1));
    std::size_t target = 0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
      if (lambda(i) > lambda_cut) ++target;

    std::vector<char> used(r, 0);
    for (std::size_t i = 0; i < r; ++i) used[i] = residual[i].squaredNorm() <= cutoff ? 1 : 0;
    std::vector<Eigen::VectorXcd> basis;

    while (basis.size() < target) {
      std::size_t pivot = r;
      double best = 0.0;
      for (std::size_t i = 0; i < r; ++i) {
        if (used[i]) continue;
        const double nrm2 = residual[i].squaredNorm();
        if (nrm2 > best) {
          best = nrm2;
          pivot = i;
        }
      }
      if (pivot == r) break;
      used[pivot] = 1;
      Eigen::VectorXcd q = residual[pivot];
      // Second orthogonalization pass against the accepted basis.
      for (const auto& b : basis) q -= b * b.dot(q);
      const double qn = q.norm();
      if (!(qn > 0.0)) continue;
      q /= qn;
      for (std::size_t i = 0; i < r; ++i) {
        if (used[i]) continue;
        residual[i] -= q * q.dot(residual[i]);
      }
      basis.push_back(std::move(q));
    }

    const auto jj = static_cast<Eigen::Index>(j);
    out.rank[j] = static_cast<int>(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      out.slots[i].rescaled().col(jj) = basis[i];
      out.spectra[i][j] = 1;
    }
  });
  return out;
}

FiberField quasi_orthogonalize(const FiberField& field, RankPolicy policy) {
  auto result = decompose_fsi(std::span<const FiberField>(&field, 1), policy);
  FiberField out = std::move(result.slots.front());
  out.set_label("qo(" + field.label() + ")");
  return out;
}

double verify_dimension_identity(const DecompositionResult& result, const GramianField& G,
                                 RankPolicy policy) {
  if (result.grid_size() != G.size())
    throw IncompatibleSpaceError("verify_dimension_identity: grid mismatch");
  const auto dims = dimension_and_spectrum(G, policy);
  double worst = 0.0;
  for (std::size_t j = 0; j < G.size(); ++j) {
    double sum = 0.0;
    for (const auto& slot : result.slots) sum += std::sqrt(slot.norm_squared(j));
    worst = std::max(worst, std::abs(sum - dims.dimension[j]));
  }
  return worst;
}

double orthonormality_defect(const DecompositionResult& result) {
  double worst = 0.0;
  for (std::size_t j = 0; j < result.grid_size(); ++j) {
    const auto q = result.basis(j);
    if (q.cols() == 0) continue;
    const Eigen::MatrixXcd gram = q.adjoint() * q;
    const Eigen::MatrixXcd diff =
        gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return worst;
}

bool spectra_nested(const DecompositionResult& result) {
  for (std::size_t i = 1; i < result.spectra.size(); ++i)
    for (std::size_t j = 0; j < result.grid_size(); ++j)
      if (result.spectra[i][j] && !result.spectra[i - 1][j]) return false;
  return true;
}

double span_residual(const DecompositionResult& result, const FiberField& field) {
  if (!result.slots.empty() && !field.same_space(result.slots.front()))
    throw IncompatibleSpaceError("span_residual: different spaces");
  double worst = 0.0;
  for (std::size_t j = 0; j < result.grid_size(); ++j) {
    const auto q = result.basis(j);
    Eigen::VectorXcd f = field.fiber(j);
    if (q.cols() > 0) f -= q * (q.adjoint() * f);
    worst = std::max(worst, f.norm());
  }
  return worst;
}

}  // namespace sislab
