// Command-line front end: solve-one, sweep and validate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "covert/bench.hpp"
#include "covert/validate.hpp"

namespace fs = std::filesystem;
using namespace covert;

namespace {

enum Exit { kOk = 0, kConfig = 2, kInfeasible = 3, kInternal = 4 };

struct RunConfig {
  std::string config_path;
  std::string command = "solve-one";
  std::vector<std::string> schemes{"proposed_A_FD"};
  std::string param;
  std::string grid;
  int trials = 10;
  std::uint64_t seed = 1;
  std::string out_dir;
  int workers = 0;
  bool verbose = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes through a temporary file and renames it into place.
void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    if (item == "-inf") {
      out.push_back(-kInf);
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw UsageError("bad grid value: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--grid is empty");
  return out;
}

std::vector<SchemeKind> parse_schemes(const std::vector<std::string>& names) {
  std::vector<SchemeKind> out;
  for (const std::string& list : names) {
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(parse_scheme(item));
  }
  if (out.empty()) throw UsageError("no scheme given");
  return out;
}

Scenario resolve_scenario(const RunConfig& cfg) {
  Scenario s = cfg.config_path.empty() ? Scenario{} : load_scenario(cfg.config_path);
  s.rng_seed = cfg.seed;
  s.validate();
  return s;
}

std::string provenance(const RunConfig& cfg, const Scenario& s) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["config"] = cfg.config_path;
  j["schemes"] = cfg.schemes;
  j["param"] = cfg.param;
  j["grid"] = cfg.grid;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["scenario"] = to_config_text(s);
  return j.dump(2) + "\n";
}

int solve_one(const RunConfig& cfg) {
  const Scenario base = resolve_scenario(cfg);
  const SchemeKind scheme = parse_schemes(cfg.schemes).front();
  // Trial 0 of a one-point sweep that leaves the scenario unchanged.
  const TrialRecord r = run_trial(scheme, base, SweepParameter::ios_x, base.ios.x, 0, cfg.seed);

  fmt::print("scheme   {}\n", to_string(scheme));
  fmt::print("R_a      {:.4f} bps/Hz\n", r.rate_a);
  fmt::print("R_g      {:.4f} bps/Hz\n", r.rate_g);
  fmt::print("P_a      {:.6g} W\n", r.alice);
  fmt::print("P_j      {:.6g} W\n", r.jam);
  fmt::print("mdep     {:.6f}\n", r.mdep);
  fmt::print("kl       {:.6g}\n", r.kl);
  fmt::print("passes   {}\n", r.report.steps.size());
  fmt::print("status   {}\n", r.feasible ? "feasible" : "infeasible");
  if (cfg.verbose) {
    for (std::size_t i = 0; i < r.report.steps.size(); ++i) {
      const AoStep& st = r.report.steps[i];
      fmt::print("  pass {}: R_a {:.6f} surface {}{} receive {}{} transmit {}{}\n", i + 1,
                 r.report.rate_trace[i + 1], st.ios, st.ios_accepted ? "*" : "", st.receive,
                 st.receive_accepted ? "*" : "", st.transmit, st.transmit_accepted ? "*" : "");
    }
  }
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    write_atomic(fs::path(cfg.out_dir) / "run.json", provenance(cfg, base));
    write_atomic(fs::path(cfg.out_dir) / "ao_report.jsonl", to_json_line(r.report) + "\n");
  }
  if (!r.feasible) {
    std::fprintf(stderr, "no feasible solution: %s\n", r.report.reason.c_str());
    return kInfeasible;
  }
  return kOk;
}

int sweep_cmd(const RunConfig& cfg) {
  if (cfg.param.empty()) throw UsageError("sweep needs --param");
  if (cfg.out_dir.empty()) throw UsageError("sweep needs --out");
  const SweepParameter p = parse_parameter(cfg.param);
  const std::vector<double> grid = parse_grid(cfg.grid);
  const std::vector<SchemeKind> schemes = parse_schemes(cfg.schemes);
  if (cfg.trials < 1) throw UsageError("--trials must be >= 1");
  const Scenario base = resolve_scenario(cfg);
  for (double v : grid) apply_parameter(base, p, v);

  SweepOptions opt;
  opt.workers = cfg.workers;
  const SweepResult res = sweep(p, grid, base, schemes, cfg.trials, cfg.seed, opt);

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_atomic(dir / "run.json", provenance(cfg, base));
  for (SchemeKind k : schemes)
    write_atomic(dir / fmt::format("{}_{}.csv", to_string(p), to_string(k)), detail_csv(res, k));
  write_atomic(dir / fmt::format("{}_summary.csv", to_string(p)), summary_csv(res));
  std::string log;
  for (const TrialRecord& r : res.records) {
    nlohmann::json j = nlohmann::json::parse(to_json_line(r.report));
    j["scheme"] = to_string(r.scheme);
    j["value"] = r.value;
    j["trial"] = r.trial;
    log += j.dump() + "\n";
  }
  write_atomic(dir / "ao_reports.jsonl", log);

  int feasible = 0;
  for (const PointSummary& ps : res.summary) {
    feasible += ps.feasible;
    if (cfg.verbose)
      fmt::print("{:<16} {}={:<8g} R_a {:.4f} +- {:.4f} ({}/{} feasible)\n", to_string(ps.scheme),
                 to_string(p), ps.value, ps.mean_rate_a, ps.half_width, ps.feasible, ps.trials);
  }
  fmt::print("wrote {} scheme file(s) and a summary to {}\n", schemes.size(), dir.string());
  return feasible > 0 ? kOk : kInfeasible;
}

int validate_cmd(const RunConfig& cfg) {
  const Scenario s = resolve_scenario(cfg);
  const std::vector<CheckResult> checks = run_invariant_suite(s, cfg.seed);
  int passed = 0;
  for (const CheckResult& c : checks) {
    passed += c.pass;
    fmt::print("{} {:<18} {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
  }
  fmt::print("{} passed, {} failed\n", passed, checks.size() - passed);
  return passed == static_cast<int>(checks.size()) ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Covert-rate optimizer for a surface-aided uplink with a jamming receiver"};
  app.add_option("--config", cfg.config_path, "Scenario file (key = value, powers in dBm)");
  app.add_option("--command", cfg.command, "solve-one | sweep | validate")
      ->check(CLI::IsMember({"solve-one", "sweep", "validate"}));
  app.add_option("--scheme", cfg.schemes, "Scheme name(s), comma separated or repeated");
  app.add_option("--param", cfg.param, "Swept parameter: P_j_max P_a_max alpha_max K M ios_x");
  app.add_option("--grid", cfg.grid, "Comma-separated grid values (dBm, dB, counts or metres)");
  app.add_option("--trials", cfg.trials, "Trials per grid point");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_option("--workers", cfg.workers, "Worker threads (0: all cores)");
  app.add_flag("--verbose", cfg.verbose, "Print per-pass or per-point details");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (cfg.command == "solve-one") return solve_one(cfg);
    if (cfg.command == "sweep") return sweep_cmd(cfg);
    return validate_cmd(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
}
