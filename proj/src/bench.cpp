#include "covert/bench.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <omp.h>

namespace covert {

namespace {

// Salt separating the initialization stream from the channel stream.
constexpr std::uint64_t kInitSalt = 0x5bd1e995u;

bool is_passive(SchemeKind k) {
  return k == SchemeKind::passive_IOS_FD || k == SchemeKind::passive_IOS_HD;
}

std::size_t point_index(const SweepResult& r, SchemeKind scheme, std::size_t point) {
  for (std::size_t i = 0; i < r.schemes.size(); ++i)
    if (r.schemes[i] == scheme) return i * r.grid.size() + point;
  throw std::invalid_argument(std::string("scheme not in sweep: ") + to_string(scheme));
}

void check_sweep_args(const std::vector<double>& grid, const std::vector<SchemeKind>& schemes,
                      int trials) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (schemes.empty()) throw std::invalid_argument("no schemes to sweep");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

template <bool Parallel>
SweepResult run_sweep(SweepParameter p, const std::vector<double>& grid, const Scenario& base,
                      const std::vector<SchemeKind>& schemes, int trials, std::uint64_t seed,
                      const SweepOptions& opt) {
  check_sweep_args(grid, schemes, trials);
  for (double v : grid) apply_parameter(base, p, v);  // reject bad values up front

  SweepResult out;
  out.parameter = p;
  out.grid = grid;
  out.schemes = schemes;
  out.trials = trials;
  const long n_points = static_cast<long>(grid.size());
  const long jobs = static_cast<long>(schemes.size()) * n_points * trials;
  out.records.resize(jobs);
  if constexpr (Parallel) {
    const int workers = opt.workers > 0 ? opt.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long j = 0; j < jobs; ++j) {
      const long s = j / (n_points * trials);
      const long pt = (j / trials) % n_points;
      const int t = static_cast<int>(j % trials);
      out.records[j] = run_trial(schemes[s], base, p, grid[pt], t, seed, opt.ao);
    }
  } else {
    for (long j = 0; j < jobs; ++j) {
      const long s = j / (n_points * trials);
      const long pt = (j / trials) % n_points;
      const int t = static_cast<int>(j % trials);
      out.records[j] = run_trial(schemes[s], base, p, grid[pt], t, seed, opt.ao);
    }
  }
  out.summary = summarize(out.records, schemes, grid);
  return out;
}

}  // namespace

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::proposed_A_FD: return "proposed_A_FD";
    case SchemeKind::HD: return "HD";
    case SchemeKind::random_theta_A: return "random_theta_A";
    case SchemeKind::passive_IOS_FD: return "passive_IOS_FD";
    case SchemeKind::passive_IOS_HD: return "passive_IOS_HD";
  }
  return "?";
}

SchemeKind parse_scheme(const std::string& name) {
  for (SchemeKind k : all_schemes())
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown scheme: " + name);
}

std::vector<SchemeKind> all_schemes() {
  return {SchemeKind::proposed_A_FD, SchemeKind::HD, SchemeKind::random_theta_A,
          SchemeKind::passive_IOS_FD, SchemeKind::passive_IOS_HD};
}

Scenario scheme_scenario(SchemeKind kind, const Scenario& base) {
  Scenario s = base;
  if (kind == SchemeKind::HD || kind == SchemeKind::passive_IOS_HD) s.budget_jam = 0.0;
  if (is_passive(kind)) {
    s.surface = SurfaceMode::passive;
    s.budget_grace = base.budget_grace + base.budget_ios;
  }
  return s;
}

SchemeOutcome run_scheme(SchemeKind kind, const Scenario& s, const ChannelSet& ch, ChannelRng& rng,
                         const AoOptions& options) {
  SchemeOutcome out;
  AoOptions opt = options;
  InitResult init;
  if (kind == SchemeKind::random_theta_A) {
    init = initialize_random_surface(s, ch, rng);
    opt.optimize_surface = false;
  } else {
    init = initialize(s, ch, rng);
  }
  out.init_ok = init.ok;
  out.state = init.state;
  if (!init.ok) {
    out.report.reason = "infeasible_start";
    return out;
  }
  AoResult r = run_ao(s, ch, init.state, opt);
  out.state = std::move(r.state);
  out.report = std::move(r.report);
  out.feasible = check_all_constraints(s, ch, out.state).feasible();
  return out;
}

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::jam_budget: return "P_j_max";
    case SweepParameter::alice_budget: return "P_a_max";
    case SweepParameter::amp_max: return "alpha_max";
    case SweepParameter::elements: return "K";
    case SweepParameter::antennas: return "M";
    case SweepParameter::ios_x: return "ios_x";
  }
  return "?";
}

SweepParameter parse_parameter(const std::string& name) {
  for (SweepParameter p : {SweepParameter::jam_budget, SweepParameter::alice_budget,
                           SweepParameter::amp_max, SweepParameter::elements,
                           SweepParameter::antennas, SweepParameter::ios_x})
    if (name == to_string(p)) return p;
  throw std::invalid_argument("unknown sweep parameter: " + name);
}

Scenario apply_parameter(const Scenario& base, SweepParameter p, double v) {
  Scenario s = base;
  auto count = [&](const char* what) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e6)
      throw std::invalid_argument(fmt::format("{} must be a positive integer, got {}", what, v));
    return static_cast<int>(v);
  };
  switch (p) {
    case SweepParameter::jam_budget: s.budget_jam = dbm_to_watt(v); break;
    case SweepParameter::alice_budget:
      s.budget_alice = dbm_to_watt(v);
      s.budget_grace = s.budget_alice;
      break;
    case SweepParameter::amp_max: s.amp_max = std::pow(10.0, v / 20.0); break;
    case SweepParameter::elements: s.num_elements = count("K"); break;
    case SweepParameter::antennas: s.num_antennas = count("M"); break;
    case SweepParameter::ios_x: s.ios.x = v; break;
  }
  s.validate();
  return s;
}

TrialRecord run_trial(SchemeKind scheme, const Scenario& base, SweepParameter p, double value,
                      int trial, std::uint64_t seed, const AoOptions& options) {
  Scenario s = scheme_scenario(scheme, apply_parameter(base, p, value));
  s.rng_seed = seed;
  const ChannelSet ch = generate_channels(s, static_cast<std::uint64_t>(trial));
  ChannelRng rng = make_trial_rng(seed ^ kInitSalt, static_cast<std::uint64_t>(trial));
  SchemeOutcome o = run_scheme(scheme, s, ch, rng, options);

  TrialRecord r;
  r.scheme = scheme;
  r.value = value;
  r.trial = trial;
  r.feasible = o.feasible;
  r.rate_a = o.state.rate_a;
  r.rate_g = o.state.rate_g;
  r.alice = o.state.powers.alice;
  r.jam = o.state.powers.jam;
  if (o.init_ok) {
    const Gains g = effective_gains(ch, o.state.ios, o.state.fd);
    const DetectionPair d = detection_pair(g, o.state.powers, s.surface_noise(), s.noise_willie);
    r.mdep = mdep(d);
    r.kl = kl_divergence(d);
    r.worst_residual = check_all_constraints(s, ch, o.state).worst();
  }
  for (double x : o.report.rank_ratio) r.max_rank_ratio = std::max(r.max_rank_ratio, x);
  r.report = std::move(o.report);
  return r;
}

SweepResult sweep(SweepParameter p, const std::vector<double>& grid, const Scenario& base,
                  const std::vector<SchemeKind>& schemes, int trials, std::uint64_t seed,
                  const SweepOptions& options) {
  return run_sweep<true>(p, grid, base, schemes, trials, seed, options);
}

SweepResult sweep_serial(SweepParameter p, const std::vector<double>& grid, const Scenario& base,
                         const std::vector<SchemeKind>& schemes, int trials, std::uint64_t seed,
                         const SweepOptions& options) {
  return run_sweep<false>(p, grid, base, schemes, trials, seed, options);
}

std::vector<PointSummary> summarize(const std::vector<TrialRecord>& records,
                                    const std::vector<SchemeKind>& schemes,
                                    const std::vector<double>& grid) {
  std::vector<PointSummary> out;
  for (SchemeKind k : schemes) {
    for (double v : grid) {
      PointSummary ps;
      ps.scheme = k;
      ps.value = v;
      double sum = 0.0, sum2 = 0.0;
      for (const TrialRecord& r : records) {
        // Exact match is intended: values are copied from the grid.
        if (r.scheme != k || r.value != v) continue;
        ++ps.trials;
        if (!r.feasible) continue;
        ++ps.feasible;
        sum += r.rate_a;
        sum2 += r.rate_a * r.rate_a;
        ps.mean_rate_g += r.rate_g;
        ps.mean_alice += r.alice;
        ps.mean_jam += r.jam;
      }
      if (ps.feasible > 0) {
        const double n = ps.feasible;
        ps.mean_rate_a = sum / n;
        ps.mean_rate_g /= n;
        ps.mean_alice /= n;
        ps.mean_jam /= n;
        if (ps.feasible > 1) {
          const double var = std::max(0.0, (sum2 - n * ps.mean_rate_a * ps.mean_rate_a) / (n - 1.0));
          ps.half_width = 1.96 * std::sqrt(var / n);
        }
      }
      out.push_back(ps);
    }
  }
  return out;
}

const PointSummary& SweepResult::at(SchemeKind scheme, std::size_t point) const {
  return summary.at(point_index(*this, scheme, point));
}

std::string detail_csv(const SweepResult& result, SchemeKind scheme) {
  std::string out = "scheme,value,trial,R_a,R_g,P_a,P_j,mdep,kl,feasible\n";
  for (const TrialRecord& r : result.records) {
    if (r.scheme != scheme) continue;
    out += fmt::format("{},{:.10g},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{}\n",
                       to_string(r.scheme), r.value, r.trial, r.rate_a, r.rate_g, r.alice, r.jam,
                       r.mdep, r.kl, r.feasible ? 1 : 0);
  }
  return out;
}

std::string summary_csv(const SweepResult& result) {
  std::string out =
      "scheme,parameter,value,trials,feasible,mean_R_a,half_width,mean_R_g,mean_P_a,mean_P_j\n";
  for (const PointSummary& s : result.summary) {
    out += fmt::format("{},{},{:.10g},{},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n",
                       to_string(s.scheme), to_string(result.parameter), s.value, s.trials,
                       s.feasible, s.mean_rate_a, s.half_width, s.mean_rate_g, s.mean_alice,
                       s.mean_jam);
  }
  return out;
}

}  // namespace covert
