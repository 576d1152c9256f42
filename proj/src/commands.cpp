#include "sislab/commands.hpp"

#include <cstdio>
#include <sstream>

#include "sislab/decomposition.hpp"
#include "sislab/duality.hpp"
#include "sislab/gram_analysis.hpp"
#include "sislab/io.hpp"
#include "sislab/reports.hpp"
#include "sislab/verification.hpp"

namespace sislab {

namespace fs = std::filesystem;

std::string s_suffix(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

std::vector<fs::path> run_analyze(const RunConfig& config) {
  config.validate();
  const auto specs = build_generators(config);
  std::vector<fs::path> written;
  for (double s : config.s_values) {
    const auto fields = fiberize_system(specs, s, config);
    const auto G = gramian_field(fields);
    const auto rep = classify_system(G, config.policy);
    ReportContext ctx;
    ctx.config_hash = config.hash();
    ctx.seed = config.seed;
    ctx.s = s;
    ctx.transport = config.transport;
    for (const auto& f : fields) ctx.generator_tails.push_back(f.tail());
    ctx.tolerances = to_json(config)["tolerances"];
    const auto json = report_to_json(rep, G, ctx);
    const auto stem = config.output_dir / ("analysis_s" + s_suffix(s));
    const fs::path jpath = stem.string() + ".json";
    const fs::path cpath = config.output_dir / ("eigen_s" + s_suffix(s) + ".csv");
    export_report(json, "json", jpath);
    export_report(json, "csv", cpath);
    written.push_back(jpath);
    written.push_back(cpath);
  }
  return written;
}

std::vector<fs::path> run_decompose(const RunConfig& config) {
  config.validate();
  const auto specs = build_generators(config);
  std::vector<fs::path> written;
  for (double s : config.s_values) {
    const auto fields = fiberize_system(specs, s, config);
    const auto result = decompose_fsi(fields, config.policy);
    const std::string stem = "decomposition_s" + s_suffix(s);
    io::write_decomposition(config.output_dir, stem, result);
    written.push_back(config.output_dir / (stem + ".json"));
    std::ostringstream csv;
    const auto& grid = fields.front().grid();
    for (int d = 0; d < grid.n(); ++d) csv << (grid.n() == 1 ? "t" : "t" + std::to_string(d + 1)) << ',';
    csv << "dimension\n";
    char buf[40];
    for (std::size_t j = 0; j < grid.size(); ++j) {
      for (double t : grid.point(j)) {
        std::snprintf(buf, sizeof buf, "%.17g", t);
        csv << buf << ',';
      }
      csv << result.rank[j] << '\n';
    }
    const auto cpath = config.output_dir / ("dimension_s" + s_suffix(s) + ".csv");
    io::atomic_write_text(cpath, csv.str());
    written.push_back(cpath);
  }
  return written;
}

std::vector<fs::path> run_dualize(const RunConfig& config) {
  config.validate();
  const auto specs = build_generators(config);
  std::vector<fs::path> written;
  for (double s : config.s_values) {
    const auto fields = fiberize_system(specs, s, config);
    const auto dual = dual_generators(fields, gramian_field(fields), config.policy);
    const std::string stem = "dual_s" + s_suffix(s);
    io::write_dual_system(config.output_dir, stem, dual);
    written.push_back(config.output_dir / (stem + ".json"));
  }
  return written;
}

}  // namespace sislab
