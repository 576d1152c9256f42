#pragma once

// Orchestration behind the analyze, decompose and dualize verbs. Each run loops over the
// configured s values and returns the files it wrote; errors propagate as exceptions.

#include <filesystem>
#include <string>
#include <vector>

#include "sislab/config.hpp"

namespace sislab {

/// analysis_s<s>.json and eigen_s<s>.csv per s.
std::vector<std::filesystem::path> run_analyze(const RunConfig& config);
/// decomposition_s<s>.json, its slot fields and dimension_s<s>.csv per s.
std::vector<std::filesystem::path> run_decompose(const RunConfig& config);
/// dual_s<s>.json and its dual fields per s.
std::vector<std::filesystem::path> run_dualize(const RunConfig& config);

/// File-name fragment for an s value: "0", "-2", "1.5".
std::string s_suffix(double s);

}  // namespace sislab
