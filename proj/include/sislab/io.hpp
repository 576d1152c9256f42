#pragma once

// Persistence. Binary layouts are little-endian with 64-bit IEEE floats; docs/formats.md
// lists every field. All writers go through a temporary file and a rename.

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "sislab/decomposition.hpp"
#include "sislab/duality.hpp"
#include "sislab/fiberization.hpp"
#include "sislab/shift_ops.hpp"
#include "sislab/weighted_core.hpp"

namespace sislab::io {

/// Writes through `path.tmp` and renames over `path`.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);
void atomic_write_text(const std::filesystem::path& path, const std::string& text);

void write_sequence(const std::filesystem::path& path, const WeightedSeq& seq);
WeightedSeq read_sequence(const std::filesystem::path& path);
/// Rows `k_1..k_n,re,im` in window order.
void write_sequence_csv(const std::filesystem::path& path, const WeightedSeq& seq);

void write_grid(const std::filesystem::path& path, const TorusGrid& grid);
TorusGrid read_grid(const std::filesystem::path& path);

/// Components T_s f(t)_k (weighted-sequence coordinates), grid-major.
void write_field(const std::filesystem::path& path, const FiberField& field);
FiberField read_field(const std::filesystem::path& path);
/// Rows `t_1..t_n,k_1..k_n,re,im`.
void write_field_csv(const std::filesystem::path& path, const FiberField& field);

/// Slot fields `<stem>_psi<i>.fib` plus `<stem>.json` (slot order, spectrum measures,
/// rank histogram).
void write_decomposition(const std::filesystem::path& dir, const std::string& stem,
                         const DecompositionResult& result);

/// Matrices padded to the largest ranks plus per-point d(t) masks, with a JSON manifest.
void write_range_operator(const std::filesystem::path& path, const RangeOperatorField& R);

struct RangeOperatorData {
  std::vector<int> domain_rank;
  std::vector<int> codomain_rank;
  std::vector<Eigen::MatrixXcd> matrices;  // unpadded
};
RangeOperatorData read_range_operator(const std::filesystem::path& path);

/// Dual fields `<stem>_dual<i>.fib` plus `<stem>.json` with (A, B, A_d, B_d).
void write_dual_system(const std::filesystem::path& dir, const std::string& stem,
                       const DualSystem& dual);

}  // namespace sislab::io
