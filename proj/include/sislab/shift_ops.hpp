#pragma once

// Shift-preserving operators L on V realized through range operators:
//     (T_s L f)(t) = R(t) (T_s f(t)).
// R(t) is stored as a matrix between orthonormal bases of the domain fiber space J(t) and
// of a codomain fiber space, both taken from DecompositionResult slots, so R(t) acts on a
// d(t)-dimensional space that varies with t.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sislab/decomposition.hpp"
#include "sislab/fiberization.hpp"
#include "sislab/gram_analysis.hpp"

namespace sislab {

class RangeOperatorField {
 public:
  using Basis = std::shared_ptr<const DecompositionResult>;
  /// Builds the matrix at grid point j; must return codomain_rank(j) x domain_rank(j).
  using MatrixFn =
      std::function<Eigen::MatrixXcd(std::size_t j, std::span<const double> t, int rows, int cols)>;

  RangeOperatorField(Basis domain, Basis codomain, std::vector<Eigen::MatrixXcd> matrices);

  static RangeOperatorField from_function(Basis domain, Basis codomain, const MatrixFn& fn);
  /// Square field on a single basis.
  static RangeOperatorField from_function(Basis basis, const MatrixFn& fn) {
    return from_function(basis, basis, fn);
  }
  static RangeOperatorField scalar(Basis basis, Complex c);
  static RangeOperatorField identity(Basis basis) { return scalar(std::move(basis), 1.0); }

  const Basis& domain() const noexcept { return domain_; }
  const Basis& codomain() const noexcept { return codomain_; }
  bool square() const noexcept { return domain_ == codomain_; }
  std::size_t size() const noexcept { return matrices_.size(); }
  const Eigen::MatrixXcd& at(std::size_t j) const { return matrices_[j]; }
  /// Operator on window coordinates: P(t) M(t) Q(t)^H.
  Eigen::MatrixXcd window_matrix(std::size_t j) const;
  /// Grid maximum of the spectral norms ||R(t)||.
  double sup_norm() const noexcept { return sup_norm_; }

 private:
  Basis domain_;
  Basis codomain_;
  std::vector<Eigen::MatrixXcd> matrices_;
  double sup_norm_ = 0.0;
};

/// Shared-ownership decomposition of a generator family, used as a range-operator basis.
RangeOperatorField::Basis make_basis(std::span<const FiberField> fields, RankPolicy policy = {});

/// Output fiber at t is R(t) applied to the coordinates of f(t). Throws DomainViolationError
/// when some f(t) leaves J(t) by more than tol * ||f(t)||.
FiberField apply_range_operator(const RangeOperatorField& R, const FiberField& f,
                                double tol = 1e-9);

/// Frame operator S(t) = Phi(t) Phi(t)^* restricted to J(t). Throws NotAFrameError for
/// systems that are not frames. `basis` defaults to the decomposition of `fields`.
RangeOperatorField frame_operator_field(std::span<const FiberField> fields, const GramianField& G,
                                        RankPolicy policy = {},
                                        RangeOperatorField::Basis basis = nullptr);

RangeOperatorField adjoint_field(const RangeOperatorField& R);

struct SpectralVerdict {
  bool self_adjoint = false;
  std::optional<std::pair<double, double>> bounds;
  bool unitary = false;
  bool isometry = false;
  double self_adjoint_defect = 0.0;
  double unitary_defect = 0.0;
  double isometry_defect = 0.0;
};

SpectralVerdict spectral_check(const RangeOperatorField& R, double tol = 1e-10);

/// rank R(t) per grid point; asserts rank R(t) <= dims[j].
std::vector<int> dim_after_map(const RangeOperatorField& R, const std::vector<int>& dims,
                               RankPolicy policy = {});

}  // namespace sislab
