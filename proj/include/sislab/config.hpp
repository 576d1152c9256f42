#pragma once

// Declarative run configuration. One JSON file describes an experiment; command-line flags
// only override individual values.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sislab/generator_bank.hpp"
#include "sislab/gram_analysis.hpp"

namespace sislab {

struct GeneratorDescriptor {
  std::string form;  // gaussian | bspline | shannon | box | tabulated
  int order = 1;
  double alpha = 3.141592653589793;
  std::string path;  // tabulated only
  double scale = 1.0;
  double potential = 0.0;
  std::string label;
};

struct Tolerances {
  double shannon_bounds = 1e-8;
  double hat_bounds = 1e-3;
  double bracket_match = 1e-6;
  double s_independence = 1e-10;
  double orthonormality = 1e-10;
  double span_residual = 1e-9;
  double dimension_identity = 1e-8;
  double shift_commutation = 1e-12;
  double adjoint = 1e-12;
  double quadratic_form = 1e-8;
  double spectral = 1e-10;
  double dual_bounds = 1e-3;
  double reconstruction = 1e-8;
  double biorthogonality = 1e-6;
  double dual_of_dual = 1e-10;
  double oracle = 1e-8;
  double domain = 1e-9;
};

struct VerifySettings {
  int random_trials = 20;
  int quadratic_form_trials = 50;
  int frame_samples = 50;
  int k_max = 3;
  /// Oracle nodes per unit length; 0 selects 16 * M.
  int oracle_q = 0;
  /// Added to one Gramian entry before oracle cross-validation. Test hook; 0 disables.
  double perturb_gramian = 0.0;
};

struct RunConfig {
  std::vector<GeneratorDescriptor> generators;
  std::vector<double> s_values{0.0};
  int n = 1;
  int M = 512;
  int K = 64;
  double offset = 0.5;
  RankPolicy policy;
  /// Replace every generator phi by tau_s phi for each tested s.
  bool transport = true;
  Tolerances tolerances;
  VerifySettings verify;
  std::filesystem::path output_dir = "sislab-out";
  std::uint64_t seed = 1;
  unsigned threads = 0;

  /// Throws UsageError on out-of-range values.
  void validate() const;
  /// FNV-1a 64 of the canonical JSON form, as 16 hex digits.
  std::string hash() const;
};

nlohmann::ordered_json to_json(const RunConfig& config);
/// Unknown keys are rejected. Relative tabulated paths resolve against `base_dir`.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// The bank used by `verify` when no generators are configured.
std::vector<GeneratorDescriptor> default_bank();

GeneratorSpec build_generator(const GeneratorDescriptor& d, int n);
std::vector<GeneratorSpec> build_generators(const RunConfig& config);

/// SISLAB_OUTPUT_DIR, when set and non-empty, replaces config.output_dir.
void apply_environment(RunConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace sislab
