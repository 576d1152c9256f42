#pragma once

// Canonical dual frames theta_i = F^{-1} phi_i, computed fiberwise as
// Theta(t) = Phi(t) G(t)^+, which equals S(t)^{-1} Phi(t) on J(t).

#include <span>
#include <vector>

#include "sislab/fiberization.hpp"
#include "sislab/gram_analysis.hpp"

namespace sislab {

struct DualSystem {
  std::vector<FiberField> duals;
  AnalysisReport primal_report;
  AnalysisReport dual_report;
};

/// Throws NotAFrameError if the primal system is not a frame.
DualSystem dual_generators(std::span<const FiberField> fields, const GramianField& G,
                           RankPolicy policy = {});

struct Reconstruction {
  /// sum <f, T_k theta_i> T_k phi_i.
  FiberField via_primal_synthesis;
  /// sum <f, T_k phi_i> T_k theta_i.
  FiberField via_dual_synthesis;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Both reconstruction orderings with relative residuals ||f~ - f|| / ||f||. Throws
/// DomainViolationError when f(t) is not in span{phi_i(t)} to relative tolerance tol.
Reconstruction reconstruct(const FiberField& f, std::span<const FiberField> primal,
                           std::span<const FiberField> dual, double tol = 1e-9);

/// max over |k|, |l| <= k_max and generator pairs of |<T_k phi_i, T_l theta_j> - delta|.
/// Throws NotRieszError unless `primal_report` classifies a Riesz family.
double biorthogonality_check(std::span<const FiberField> primal, std::span<const FiberField> dual,
                             int k_max, const AnalysisReport& primal_report);

}  // namespace sislab
