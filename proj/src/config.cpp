#include "sislab/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "sislab/error.hpp"

namespace sislab {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw UsageError(std::string("unknown key '") + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

ojson tolerances_json(const Tolerances& t) {
  return {{"shannon_bounds", t.shannon_bounds},
          {"hat_bounds", t.hat_bounds},
          {"bracket_match", t.bracket_match},
          {"s_independence", t.s_independence},
          {"orthonormality", t.orthonormality},
          {"span_residual", t.span_residual},
          {"dimension_identity", t.dimension_identity},
          {"shift_commutation", t.shift_commutation},
          {"adjoint", t.adjoint},
          {"quadratic_form", t.quadratic_form},
          {"spectral", t.spectral},
          {"dual_bounds", t.dual_bounds},
          {"reconstruction", t.reconstruction},
          {"biorthogonality", t.biorthogonality},
          {"dual_of_dual", t.dual_of_dual},
          {"oracle", t.oracle},
          {"domain", t.domain}};
}

Tolerances tolerances_from(const json& j) {
  Tolerances t;
  const ojson keys = tolerances_json(t);
  std::set<std::string> known;
  for (auto it = keys.begin(); it != keys.end(); ++it) known.insert(it.key());
  reject_unknown(j, known, "tolerances");
  read(j, "shannon_bounds", t.shannon_bounds);
  read(j, "hat_bounds", t.hat_bounds);
  read(j, "bracket_match", t.bracket_match);
  read(j, "s_independence", t.s_independence);
  read(j, "orthonormality", t.orthonormality);
  read(j, "span_residual", t.span_residual);
  read(j, "dimension_identity", t.dimension_identity);
  read(j, "shift_commutation", t.shift_commutation);
  read(j, "adjoint", t.adjoint);
  read(j, "quadratic_form", t.quadratic_form);
  read(j, "spectral", t.spectral);
  read(j, "dual_bounds", t.dual_bounds);
  read(j, "reconstruction", t.reconstruction);
  read(j, "biorthogonality", t.biorthogonality);
  read(j, "dual_of_dual", t.dual_of_dual);
  read(j, "oracle", t.oracle);
  read(j, "domain", t.domain);
  return t;
}

}  // namespace

void RunConfig::validate() const {
  if (n < 1) throw UsageError("n must be >= 1");
  if (M < 2) throw UsageError("M must be >= 2");
  if (K < 1) throw UsageError("K must be >= 1");
  if (!(offset >= 0.0 && offset < 1.0)) throw UsageError("offset must lie in [0, 1)");
  if (!(policy.eps_rank > 0.0 && policy.eps_rank < 1.0))
    throw UsageError("eps_rank must lie in (0, 1)");
  if (!(policy.eps_abs > 0.0)) throw UsageError("eps_abs must be > 0");
  if (s_values.empty()) throw UsageError("s list is empty");
  if (verify.k_max < 0 || verify.random_trials < 1 || verify.quadratic_form_trials < 1 ||
      verify.frame_samples < 1)
    throw UsageError("verify settings out of range");
  if (verify.oracle_q != 0 && verify.oracle_q < 2) throw UsageError("oracle_q must be >= 2");
  for (const auto& g : generators) {
    static const std::set<std::string> forms{"gaussian", "bspline", "shannon", "box", "tabulated"};
    if (!forms.count(g.form)) throw UsageError("unknown generator form '" + g.form + "'");
    if (g.form == "tabulated" && g.path.empty())
      throw UsageError("tabulated generator needs a path");
  }
}

ojson to_json(const RunConfig& c) {
  ojson gens = ojson::array();
  for (const auto& g : c.generators) {
    ojson d{{"form", g.form}};
    if (g.form == "bspline") d["order"] = g.order;
    if (g.form == "gaussian") d["alpha"] = g.alpha;
    if (g.form == "tabulated") d["path"] = g.path;
    d["scale"] = g.scale;
    d["potential"] = g.potential;
    if (!g.label.empty()) d["label"] = g.label;
    gens.push_back(std::move(d));
  }
  return {{"generators", gens},
          {"s", c.s_values},
          {"n", c.n},
          {"M", c.M},
          {"K", c.K},
          {"offset", c.offset},
          {"eps_rank", c.policy.eps_rank},
          {"eps_abs", c.policy.eps_abs},
          {"transport", c.transport},
          {"tolerances", tolerances_json(c.tolerances)},
          {"verify",
           {{"random_trials", c.verify.random_trials},
            {"quadratic_form_trials", c.verify.quadratic_form_trials},
            {"frame_samples", c.verify.frame_samples},
            {"k_max", c.verify.k_max},
            {"oracle_q", c.verify.oracle_q},
            {"perturb_gramian", c.verify.perturb_gramian}}},
          {"output_dir", c.output_dir.generic_string()},
          {"seed", c.seed},
          {"threads", c.threads}};
}

RunConfig config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  reject_unknown(j,
                 {"generators", "s", "n", "M", "K", "offset", "eps_rank", "eps_abs", "transport",
                  "tolerances", "verify", "output_dir", "seed", "threads"},
                 "config");
  RunConfig c;
  if (j.contains("generators")) {
    if (!j["generators"].is_array()) throw UsageError("generators must be an array");
    for (const auto& g : j["generators"]) {
      reject_unknown(g, {"form", "order", "alpha", "path", "scale", "potential", "label"},
                     "generator");
      GeneratorDescriptor d;
      read(g, "form", d.form);
      read(g, "order", d.order);
      read(g, "alpha", d.alpha);
      read(g, "path", d.path);
      read(g, "scale", d.scale);
      read(g, "potential", d.potential);
      read(g, "label", d.label);
      if (!d.path.empty() && fs::path(d.path).is_relative() && !base_dir.empty())
        d.path = (base_dir / d.path).lexically_normal().generic_string();
      c.generators.push_back(std::move(d));
    }
  }
  read(j, "s", c.s_values);
  read(j, "n", c.n);
  read(j, "M", c.M);
  read(j, "K", c.K);
  read(j, "offset", c.offset);
  read(j, "eps_rank", c.policy.eps_rank);
  read(j, "eps_abs", c.policy.eps_abs);
  read(j, "transport", c.transport);
  if (j.contains("tolerances")) c.tolerances = tolerances_from(j["tolerances"]);
  if (j.contains("verify")) {
    const auto& v = j["verify"];
    reject_unknown(v,
                   {"random_trials", "quadratic_form_trials", "frame_samples", "k_max",
                    "oracle_q", "perturb_gramian"},
                   "verify");
    read(v, "random_trials", c.verify.random_trials);
    read(v, "quadratic_form_trials", c.verify.quadratic_form_trials);
    read(v, "frame_samples", c.verify.frame_samples);
    read(v, "k_max", c.verify.k_max);
    read(v, "oracle_q", c.verify.oracle_q);
    read(v, "perturb_gramian", c.verify.perturb_gramian);
  }
  std::string out;
  read(j, "output_dir", out);
  if (!out.empty()) c.output_dir = out;
  read(j, "seed", c.seed);
  read(j, "threads", c.threads);
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config " + path.string() + ": " + e.what(), 0);
  }
  return config_from_json(j, path.parent_path());
}

std::vector<GeneratorDescriptor> default_bank() {
  std::vector<GeneratorDescriptor> bank(4);
  bank[0].form = "shannon";
  bank[1].form = "box";
  bank[2].form = "bspline";
  bank[2].order = 1;
  bank[3].form = "gaussian";
  return bank;
}

GeneratorSpec build_generator(const GeneratorDescriptor& d, int n) {
  auto base = [&]() {
    if (d.form == "gaussian") return GeneratorSpec::gaussian(d.alpha, n, d.label);
    if (d.form == "bspline") return GeneratorSpec::bspline(d.order, n, d.label);
    if (d.form == "shannon") return GeneratorSpec::shannon(n, d.label);
    if (d.form == "box") return GeneratorSpec::box(n, d.label);
    if (d.form == "tabulated") {
      auto spec = load_tabulated(d.path, d.label);
      if (spec.n() != n)
        throw UsageError("tabulated generator " + d.path + " has dimension " +
                         std::to_string(spec.n()) + ", config has n = " + std::to_string(n));
      return spec;
    }
    throw UsageError("unknown generator form '" + d.form + "'");
  }();
  if (d.scale != 1.0) base = base.scaled(d.scale);
  if (d.potential != 0.0) base = base.with_bessel_potential(d.potential);
  return base;
}

std::vector<GeneratorSpec> build_generators(const RunConfig& config) {
  std::vector<GeneratorSpec> out;
  const auto& descs = config.generators.empty() ? default_bank() : config.generators;
  for (const auto& d : descs) out.push_back(build_generator(d, config.n));
  return out;
}

void apply_environment(RunConfig& config) {
  if (const char* dir = std::getenv("SISLAB_OUTPUT_DIR"); dir && *dir) config.output_dir = dir;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash() const {
  // Where results land and how many threads compute them do not change the results.
  auto canonical = to_json(*this);
  canonical.erase("output_dir");
  canonical.erase("threads");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical.dump())));
  return buf;
}

}  // namespace sislab
