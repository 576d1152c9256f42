#pragma once

// Analysis reports as JSON (schemas/analysis_report.schema.json) and eigenvalue curves as
// CSV. Key order is fixed; doubles print in shortest round-trip form in JSON and with 17
// significant digits in CSV, so re-exporting a report reproduces it byte for byte.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sislab/config.hpp"
#include "sislab/gram_analysis.hpp"

namespace sislab {

struct ReportContext {
  std::string config_hash;
  std::uint64_t seed = 0;
  double s = 0.0;
  bool transport = true;
  std::vector<double> generator_tails;
  nlohmann::ordered_json tolerances;
};

nlohmann::ordered_json report_to_json(const AnalysisReport& report, const GramianField& G,
                                      const ReportContext& ctx);

/// Header `t_1..t_n,lambda_1..lambda_r`, one row per grid point, eigenvalues ascending.
std::string eigen_csv(const nlohmann::ordered_json& report);

/// format is "json" or "csv"; anything else throws UsageError.
void export_report(const nlohmann::ordered_json& report, const std::string& format,
                   const std::filesystem::path& path);

nlohmann::ordered_json load_report(const std::filesystem::path& path);

/// One-line machine-readable error record.
std::string error_json(const std::string& kind, const std::string& message, int exit_code);

}  // namespace sislab
