#pragma once

// Orthogonal decomposition of a finitely generated shift-invariant space into principal
// spaces with quasi-orthogonal generators: at every grid point an orthonormal basis of the
// fiber span J(t) is chosen and assigned to slots 1..d(t), so slot spectra are nested.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sislab/fiberization.hpp"
#include "sislab/gram_analysis.hpp"

namespace sislab {

struct DecompositionResult {
  /// Quasi-orthogonal generator fields psi_1..psi_r; slots beyond d(t) are zero at t.
  std::vector<FiberField> slots;
  /// spectra[i][j] == 1 iff psi_i(t_j) != 0.
  std::vector<std::vector<char>> spectra;
  /// d(t_j) = dim J(t_j).
  std::vector<int> rank;

  std::size_t grid_size() const noexcept { return rank.size(); }
  /// Orthonormal basis of J(t_j) as a window x d(t_j) matrix (rescaled coordinates).
  Eigen::MatrixXcd basis(std::size_t j) const;
  int max_rank() const;
};

/// Quasi-orthogonal generator of a principal space: each fiber normalized to unit l^2_s norm
/// wherever it is nonzero.
FiberField quasi_orthogonalize(const FiberField& field, RankPolicy policy = {});

/// Pivoted Gram-Schmidt per fiber (largest remaining norm first, ties to the lowest index).
/// Fibers with squared norm <= eps_rank * max(max_i ||phi_i(t)||^2, eps_abs) are dropped first;
/// d(t) is the Gramian rank under the same policy gram_analysis uses.
DecompositionResult decompose_fsi(std::span<const FiberField> fields, RankPolicy policy = {});

/// max_t | sum_i ||psi_i(t)|| - rank G(t) |.
double verify_dimension_identity(const DecompositionResult& result, const GramianField& G,
                                 RankPolicy policy = {});

/// Largest |<psi_i(t), psi_j(t)> - delta_ij| over nonzero slot pairs and the grid.
double orthonormality_defect(const DecompositionResult& result);
/// True iff every slot spectrum is contained in the previous one, pointwise.
bool spectra_nested(const DecompositionResult& result);
/// Largest l^2_s distance from a fiber of `field` to span{psi_i(t)}.
double span_residual(const DecompositionResult& result, const FiberField& field);

}  // namespace sislab
