#include "sislab/shift_ops.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "sislab/error.hpp"
#include "sislab/parallel.hpp"

namespace sislab {

namespace {

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

RangeOperatorField::RangeOperatorField(Basis domain, Basis codomain,
                                       std::vector<Eigen::MatrixXcd> matrices)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrices_(std::move(matrices)) {
  if (!domain_ || !codomain_) throw UsageError("range operator: null basis");
  if (domain_->grid_size() != codomain_->grid_size() || matrices_.size() != domain_->grid_size())
    throw IncompatibleSpaceError("range operator: grid sizes differ");
  for (std::size_t j = 0; j < matrices_.size(); ++j) {
    const auto& m = matrices_[j];
    if (m.rows() != codomain_->rank[j] || m.cols() != domain_->rank[j])
      throw IncompatibleSpaceError("range operator: matrix at grid point " + std::to_string(j) +
                                   " does not match d(t)");
    sup_norm_ = std::max(sup_norm_, spectral_norm(m));
  }
}

RangeOperatorField RangeOperatorField::from_function(Basis domain, Basis codomain,
                                                     const MatrixFn& fn) {
  if (!domain || !codomain) throw UsageError("range operator: null basis");
  const auto& grid = domain->slots.front().grid();
  std::vector<Eigen::MatrixXcd> mats(domain->grid_size());
  parallel_for(mats.size(), [&](std::size_t j) {
    mats[j] = fn(j, grid.point(j), codomain->rank[j], domain->rank[j]);
  });
  return RangeOperatorField(std::move(domain), std::move(codomain), std::move(mats));
}

RangeOperatorField RangeOperatorField::scalar(Basis basis, Complex c) {
  return from_function(basis, [c](std::size_t, std::span<const double>, int rows, int cols) {
    return Eigen::MatrixXcd(c * Eigen::MatrixXcd::Identity(rows, cols));
  });
}

Eigen::MatrixXcd RangeOperatorField::window_matrix(std::size_t j) const {
  return codomain_->basis(j) * matrices_[j] * domain_->basis(j).adjoint();
}

RangeOperatorField::Basis make_basis(std::span<const FiberField> fields, RankPolicy policy) {
  return std::make_shared<const DecompositionResult>(decompose_fsi(fields, policy));
}

FiberField apply_range_operator(const RangeOperatorField& R, const FiberField& f, double tol) {
  const auto& proto = R.domain()->slots.front();
  if (!f.same_space(proto))
    throw IncompatibleSpaceError("apply_range_operator: field and operator spaces differ");
  const auto& target = R.codomain()->slots.front();
  FiberField out = FiberField::zero(target.grid(), target.window(), target.weight(),
                                    "R(" + f.label() + ")");
  std::vector<double> residuals(f.grid().size(), 0.0);
  parallel_for(f.grid().size(), [&](std::size_t j) {
    const auto q = R.domain()->basis(j);
    const Eigen::VectorXcd fj = f.fiber(j);
    Eigen::VectorXcd coords = q.adjoint() * fj;
    const double fnorm = fj.norm();
    const double res = (fj - q * coords).norm();
    residuals[j] = fnorm > 0.0 ? res / fnorm : 0.0;
    out.rescaled().col(static_cast<Eigen::Index>(j)) =
        R.codomain()->basis(j) * (R.at(j) * coords);
  });
  const auto worst = std::max_element(residuals.begin(), residuals.end());
  if (worst != residuals.end() && *worst > tol) {
    const auto j = static_cast<std::size_t>(worst - residuals.begin());
    throw DomainViolationError("apply_range_operator: field leaves the range function at grid "
                               "point " + std::to_string(j) + " (relative residual " +
                                   std::to_string(*worst) + ")",
                               *worst, j);
  }
  out.set_tail(f.tail() * R.sup_norm() * R.sup_norm());
  return out;
}

RangeOperatorField frame_operator_field(std::span<const FiberField> fields, const GramianField& G,
                                        RankPolicy policy, RangeOperatorField::Basis basis) {
  const auto report = classify_system(G, policy);
  if (!report.is_frame)
    throw NotAFrameError("frame_operator_field: system is not a frame (A = " +
                         std::to_string(report.frame_lower) +
                         ", B = " + std::to_string(report.frame_upper) + ")");
  if (!basis) basis = make_basis(fields, policy);
  return RangeOperatorField::from_function(
      basis, [&](std::size_t j, std::span<const double>, int, int) {
        const auto q = basis->basis(j);
        Eigen::MatrixXcd phi(q.rows(), static_cast<Eigen::Index>(fields.size()));
        for (std::size_t i = 0; i < fields.size(); ++i)
          phi.col(static_cast<Eigen::Index>(i)) = fields[i].fiber(j);
        const Eigen::MatrixXcd coords = q.adjoint() * phi;
        return Eigen::MatrixXcd(coords * coords.adjoint());
      });
}

RangeOperatorField adjoint_field(const RangeOperatorField& R) {
  std::vector<Eigen::MatrixXcd> mats(R.size());
  for (std::size_t j = 0; j < R.size(); ++j) mats[j] = R.at(j).adjoint();
  return RangeOperatorField(R.codomain(), R.domain(), std::move(mats));
}

SpectralVerdict spectral_check(const RangeOperatorField& R, double tol) {
  SpectralVerdict v;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any = false;
  const bool square = R.square();
  for (std::size_t j = 0; j < R.size(); ++j) {
    const auto& m = R.at(j);
    if (m.size() == 0) continue;
    any = true;
    const Eigen::MatrixXcd mhm = m.adjoint() * m;
    v.isometry_defect = std::max(
        v.isometry_defect, spectral_norm(mhm - Eigen::MatrixXcd::Identity(mhm.rows(), mhm.cols())));
    if (!square) continue;
    v.self_adjoint_defect = std::max(v.self_adjoint_defect, spectral_norm(m - m.adjoint()));
    const Eigen::MatrixXcd mmh = m * m.adjoint();
    v.unitary_defect =
        std::max({v.unitary_defect,
                  spectral_norm(mmh - Eigen::MatrixXcd::Identity(mmh.rows(), mmh.cols())),
                  spectral_norm(mhm - Eigen::MatrixXcd::Identity(mhm.rows(), mhm.cols()))});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (m + m.adjoint()),
                                                        Eigen::EigenvaluesOnly);
    lo = std::min(lo, eig.eigenvalues()(0));
    hi = std::max(hi, eig.eigenvalues()(eig.eigenvalues().size() - 1));
  }
  v.isometry = any && v.isometry_defect <= tol;
  if (square) {
    v.self_adjoint = v.self_adjoint_defect <= tol;
    v.unitary = any && v.unitary_defect <= tol;
    if (v.self_adjoint && any) v.bounds = std::make_pair(lo, hi);
  }
  return v;
}

std::vector<int> dim_after_map(const RangeOperatorField& R, const std::vector<int>& dims,
                               RankPolicy policy) {
  if (dims.size() != R.size()) throw IncompatibleSpaceError("dim_after_map: grid mismatch");
  std::vector<int> out(R.size(), 0);
  for (std::size_t j = 0; j < R.size(); ++j) {
    const auto& m = R.at(j);
    if (m.size() == 0) continue;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    const double thr = policy.threshold(sv(0) * sv(0));
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) * sv(i) > thr) ++rank;
    if (rank > dims[j])
      throw std::logic_error("dim_after_map: image dimension " + std::to_string(rank) +
                             " exceeds domain dimension " + std::to_string(dims[j]) +
                             " at grid point " + std::to_string(j));
    out[j] = rank;
  }
  return out;
}

}  // namespace sislab
