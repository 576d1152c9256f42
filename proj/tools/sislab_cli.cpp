// sislab command-line driver.
//
//   sislab analyze   --config run.json [overrides]
//   sislab decompose --config run.json [overrides]
//   sislab dualize   --config run.json [overrides]
//   sislab verify    [--config run.json] [overrides]
//   sislab export    --report analysis.json --format json|csv --out FILE
//
// Exit codes: 0 success, 1 failure (verify: a failed invariant), 2 classification refused,
// 3 unsound truncation, 64 usage error.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "sislab/commands.hpp"
#include "sislab/config.hpp"
#include "sislab/error.hpp"
#include "sislab/io.hpp"
#include "sislab/parallel.hpp"
#include "sislab/reports.hpp"
#include "sislab/verification.hpp"

namespace {

using namespace sislab;

constexpr int kExitFailure = 1;
constexpr int kExitRefused = 2;
constexpr int kExitUnsound = 3;
constexpr int kExitUsage = 64;

struct Overrides {
  std::string config;
  std::vector<double> s;
  int M = 0;
  int K = 0;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string output_dir;
  std::optional<double> perturb;
};

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "run configuration (JSON)");
  cmd->add_option("--s", o.s, "override the list of s values");
  cmd->add_option("--M", o.M, "override grid points per axis");
  cmd->add_option("--K", o.K, "override the frequency window radius");
  cmd->add_option("--seed", o.seed, "override the random seed");
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
  cmd->add_option("--output-dir", o.output_dir, "override the output directory");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  apply_environment(c);
  if (!o.s.empty()) c.s_values = o.s;
  if (o.M) c.M = o.M;
  if (o.K) c.K = o.K;
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (o.perturb) c.verify.perturb_gramian = *o.perturb;
  c.validate();
  set_thread_count(c.threads);
  return c;
}

int fail(const std::string& kind, const std::string& message, int code,
         const std::filesystem::path& out_dir = {}) {
  const auto record = error_json(kind, message, code);
  std::cerr << record << '\n';
  if (!out_dir.empty()) {
    try {
      io::atomic_write_text(out_dir / "error.json", record + "\n");
    } catch (const std::exception&) {
    }
  }
  return code;
}

int run_files(const std::function<std::vector<std::filesystem::path>(const RunConfig&)>& run,
              const Overrides& o) {
  RunConfig c;
  try {
    c = resolve(o);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const Error& e) {
    return fail("config", e.what(), kExitUsage);
  }
  try {
    for (const auto& p : run(c)) std::cout << p.string() << '\n';
    return 0;
  } catch (const UnsoundTruncationError& e) {
    return fail("unsound_truncation", e.what(), kExitUnsound, c.output_dir);
  } catch (const DegenerateSystemError& e) {
    return fail("degenerate_system", e.what(), kExitRefused, c.output_dir);
  } catch (const NotAFrameError& e) {
    return fail("not_a_frame", e.what(), kExitRefused, c.output_dir);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitUsage, c.output_dir);
  } catch (const std::exception& e) {
    return fail("error", e.what(), kExitFailure, c.output_dir);
  }
}

int run_verify_cmd(const Overrides& o, const std::string& report_path) {
  RunConfig c;
  try {
    c = resolve(o);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const Error& e) {
    return fail("config", e.what(), kExitUsage);
  }
  try {
    const auto start = std::chrono::steady_clock::now();
    const auto report = run_verify(c);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& chk : report.checks) {
      std::printf("%s %s/%s measured=%.3e tolerance=%.3e\n", chk.pass ? "PASS" : "FAIL",
                  chk.group.c_str(), chk.name.c_str(), chk.measured, chk.tolerance);
    }
    const std::filesystem::path path =
        report_path.empty() ? c.output_dir / "verify_report.json" : std::filesystem::path(report_path);
    io::atomic_write_text(path, verify_to_json(report).dump(2) + "\n");
    for (const auto& [group, t] : report.group_seconds)
      std::fprintf(stderr, "verify: %-16s %.2f s\n", group.c_str(), t);
    std::fprintf(stderr, "verify: %zu checks in %.1f s, report %s\n", report.checks.size(), secs,
                 path.string().c_str());
    if (!report.all_pass()) {
      for (const auto& chk : report.checks)
        if (!chk.pass)
          std::cerr << error_json("invariant_failed", chk.group + "/" + chk.name, kExitFailure)
                    << '\n';
      return kExitFailure;
    }
    return 0;
  } catch (const std::exception& e) {
    return fail("error", e.what(), kExitFailure, c.output_dir);
  }
}

int run_export_cmd(const std::string& report, const std::string& format, const std::string& out) {
  try {
    export_report(load_report(report), format, out);
    std::cout << out << '\n';
    return 0;
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return fail("error", e.what(), kExitFailure);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-invariant subspaces of Sobolev spaces: analysis and verification"};
  app.require_subcommand(1);

  Overrides analyze_o, decompose_o, dualize_o, verify_o;
  auto* analyze = app.add_subcommand("analyze", "classify systems and write reports per s");
  add_run_options(analyze, analyze_o);
  auto* decompose = app.add_subcommand("decompose", "quasi-orthogonal decomposition per s");
  add_run_options(decompose, decompose_o);
  auto* dualize = app.add_subcommand("dualize", "canonical dual generators per s");
  add_run_options(dualize, dualize_o);
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  add_run_options(verify, verify_o);
  std::string verify_report;
  verify->add_option("--report", verify_report, "verification report path");
  verify->add_option("--perturb-gramian", verify_o.perturb,
                     "add this value to one Gramian entry before oracle cross-validation");

  auto* exp = app.add_subcommand("export", "re-export an analysis report");
  std::string report, format, out;
  exp->add_option("--report", report, "analysis report (JSON)")->required();
  exp->add_option("--format", format, "json or csv")->required();
  exp->add_option("--out", out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*analyze) return run_files(run_analyze, analyze_o);
  if (*decompose) return run_files(run_decompose, decompose_o);
  if (*dualize) return run_files(run_dualize, dualize_o);
  if (*verify) return run_verify_cmd(verify_o, verify_report);
  if (*exp) return run_export_cmd(report, format, out);
  return kExitUsage;
}
