#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "sislab/config.hpp"
#include "sislab/error.hpp"
#include "sislab/reports.hpp"

using namespace sislab;
using sislab::test::fiber_of;
using sislab::test::ScratchDir;
using json = nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("FNV-1a 64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config parsing and validation") {
  const auto c = config_from_json(json::parse(R"({"generators":[{"form":"bspline","order":3}],
      "s":[0,1.5],"M":64,"K":8,"offset":0,"eps_rank":1e-10,"seed":7})"));
  REQUIRE(c.generators.size() == 1);
  CHECK(c.generators[0].order == 3);
  CHECK(c.s_values == std::vector<double>{0.0, 1.5});
  CHECK(c.M == 64);
  CHECK(c.offset == 0.0);
  CHECK(c.policy.eps_rank == 1e-10);
  CHECK(c.seed == 7);

  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bogus":1})")), UsageError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"verify":{"trials":3}})")), UsageError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"M":1})")), UsageError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"eps_rank":0})")), UsageError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"eps_rank":1})")), UsageError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"offset":1.0})")), UsageError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"M":"many"})")), UsageError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"generators":[{"form":"sinc"}]})")),
                  UsageError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"generators":[{"form":"tabulated"}]})")),
                  UsageError);
}

TEST_CASE("config round-trips through JSON and resolves tabulated paths") {
  RunConfig c;
  c.generators = default_bank();
  c.s_values = {-1.0, 2.0};
  c.M = 32;
  c.tolerances.oracle = 1e-7;
  const auto back = config_from_json(json::parse(to_json(c).dump()));
  CHECK(to_json(back).dump() == to_json(c).dump());
  CHECK(back.hash() == c.hash());

  const auto t = config_from_json(
      json::parse(R"({"generators":[{"form":"tabulated","path":"data/g.csv"}]})"), "/base/dir");
  CHECK(t.generators[0].path == "/base/dir/data/g.csv");
}

TEST_CASE("config hash ignores output location and thread count") {
  RunConfig a;
  RunConfig b = a;
  b.output_dir = "/somewhere/else";
  b.threads = 8;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.M = a.M + 1;
  CHECK(a.hash() != b.hash());
  RunConfig c = a;
  c.seed = a.seed + 1;
  CHECK(a.hash() != c.hash());
}

TEST_CASE("SISLAB_OUTPUT_DIR overrides the configured output directory") {
  RunConfig c;
  c.output_dir = "from-config";
  ::setenv("SISLAB_OUTPUT_DIR", "/tmp/from-env", 1);
  apply_environment(c);
  CHECK(c.output_dir == "/tmp/from-env");
  ::setenv("SISLAB_OUTPUT_DIR", "", 1);
  c.output_dir = "from-config";
  apply_environment(c);
  CHECK(c.output_dir == "from-config");
  ::unsetenv("SISLAB_OUTPUT_DIR");
}

TEST_CASE("config files load and bad files are reported") {
  ScratchDir dir("config");
  {
    std::ofstream(dir / "ok.json") << R"({"M":16,"K":4})";
    std::ofstream(dir / "broken.json") << "{\"M\": ";
  }
  CHECK(load_config(dir / "ok.json").M == 16);
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ParseError);
  CHECK_THROWS_AS(load_config(dir / "absent.json"), UsageError);
}

TEST_CASE("report export is deterministic and CSV has one row per grid point") {
  ScratchDir dir("report");
  const int M = 32;
  const auto hat = fiber_of(GeneratorSpec::bspline(1), 0.0, M, 8);
  const auto G = gramian_field(std::span(&hat, 1));
  const auto r = classify_system(G);
  ReportContext ctx;
  ctx.config_hash = RunConfig{}.hash();
  ctx.generator_tails = {hat.tail()};
  const auto report = report_to_json(r, G, ctx);

  CHECK(report.at("format") == "sislab-analysis-report-1");
  CHECK(report.at("is_frame").get<bool>());
  CHECK(report.at("dimension").at("histogram").at(1).get<int>() == M);
  CHECK(report.at("eigenvalues").at("values").size() == static_cast<std::size_t>(M));

  export_report(report, "json", dir / "a.json");
  export_report(report, "json", dir / "b.json");
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

  const auto loaded = load_report(dir / "a.json");
  export_report(loaded, "json", dir / "c.json");
  CHECK(slurp(dir / "a.json") == slurp(dir / "c.json"));
  CHECK(loaded.at("frame_bounds").at("A").get<double>() == r.frame_lower);

  export_report(report, "csv", dir / "a.csv");
  std::ifstream in(dir / "a.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,lambda_1");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == M);

  CHECK_THROWS_AS(export_report(report, "xml", dir / "a.xml"), UsageError);
  CHECK_FALSE(std::filesystem::exists(dir / "a.xml"));
}

TEST_CASE("error records are single-line JSON") {
  const auto line = error_json("not_a_frame", "lower bound \"0\"\nis zero", 2);
  CHECK(line.find('\n') == std::string::npos);
  const auto j = json::parse(line);
  CHECK(j.at("error") == "not_a_frame");
  CHECK(j.at("exit_code") == 2);
}
