#include "sislab/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sislab/error.hpp"
#include "sislab/io.hpp"

namespace sislab {

using ojson = nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson point_json(const TorusGrid& grid, std::size_t j) {
  const auto t = grid.point(j);
  return ojson(std::vector<double>(t.begin(), t.end()));
}

}  // namespace

ojson report_to_json(const AnalysisReport& r, const GramianField& G, const ReportContext& ctx) {
  const auto& grid = G.grid();
  ojson j;
  j["format"] = "sislab-analysis-report-1";
  j["config_hash"] = ctx.config_hash;
  j["seed"] = ctx.seed;
  j["s"] = ctx.s;
  j["transport"] = ctx.transport;
  j["grid"] = {{"n", grid.n()}, {"M", grid.M()}, {"offset", grid.offset()}};
  j["window_size"] = G.window_size();
  j["generators"] = r.labels;
  j["policy"] = {{"eps_rank", r.policy.eps_rank}, {"eps_abs", r.policy.eps_abs}};
  j["tolerances"] = ctx.tolerances.is_null() ? ojson::object() : ctx.tolerances;
  j["tail"] = {{"total", r.tail}, {"per_generator", ctx.generator_tails}};
  j["bessel_bound"] = r.bessel_bound;
  j["is_frame"] = r.is_frame;
  j["frame_bounds"] = {{"A", r.frame_lower},
                       {"B", r.frame_upper},
                       {"A_interval", {r.lower_interval_low(), r.frame_lower}},
                       {"B_interval", {r.frame_upper, r.upper_interval_high()}},
                       {"argmin_t", point_json(grid, r.argmin_index)},
                       {"argmax_t", point_json(grid, r.argmax_index)}};
  j["is_riesz"] = r.is_riesz;
  j["riesz_bounds"] = {{"lower", r.riesz_lower}, {"upper", r.riesz_upper}};
  j["fundamental_in_window"] = r.fundamental_in_window;

  std::vector<std::size_t> histogram(r.generators + 1, 0);
  for (int d : r.dims.dimension) ++histogram[static_cast<std::size_t>(d)];
  j["dimension"] = {{"histogram", histogram},
                    {"spectrum_measure", r.dims.spectrum_measure()},
                    {"values", r.dims.dimension}};

  ojson ts = ojson::array();
  ojson values = ojson::array();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    ts.push_back(point_json(grid, p));
    const auto& ev = r.eigenvalues[p];
    values.push_back(std::vector<double>(ev.data(), ev.data() + ev.size()));
  }
  j["eigenvalues"] = {{"t", ts}, {"values", values}};
  return j;
}

std::string eigen_csv(const ojson& report) {
  try {
    const auto& ts = report.at("eigenvalues").at("t");
    const auto& values = report.at("eigenvalues").at("values");
    const std::size_t n = ts.empty() ? 1 : ts.front().size();
    const std::size_t r = values.empty() ? 0 : values.front().size();
    std::ostringstream out;
    for (std::size_t d = 0; d < n; ++d) out << (d ? "," : "") << (n == 1 ? "t" : "t" + std::to_string(d + 1));
    for (std::size_t i = 0; i < r; ++i) out << ",lambda_" << i + 1;
    out << '\n';
    for (std::size_t p = 0; p < ts.size(); ++p) {
      for (std::size_t d = 0; d < n; ++d) out << (d ? "," : "") << fmt17(ts[p][d].get<double>());
      for (const auto& v : values[p]) out << ',' << fmt17(v.get<double>());
      out << '\n';
    }
    return out.str();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report has no usable eigenvalue block: ") + e.what(), 0);
  }
}

void export_report(const ojson& report, const std::string& format,
                   const std::filesystem::path& path) {
  if (format == "json")
    io::atomic_write_text(path, report.dump(2) + "\n");
  else if (format == "csv")
    io::atomic_write_text(path, eigen_csv(report));
  else
    throw UsageError("unknown export format '" + format + "' (expected json or csv)");
}

ojson load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open report " + path.string());
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("report " + path.string() + ": " + e.what(), 0);
  }
}

std::string error_json(const std::string& kind, const std::string& message, int exit_code) {
  ojson j{{"error", kind}, {"message", message}, {"exit_code", exit_code}};
  return j.dump();
}

}  // namespace sislab
