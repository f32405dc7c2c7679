#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covert/ao.hpp"

namespace covert {

/// Compared transmission schemes.
enum class SchemeKind {
  proposed_A_FD,   // active surface, full-duplex jamming receiver
  HD,              // active surface, no jamming (P_j^max = 0)
  random_theta_A,  // active surface with random fixed phases
  passive_IOS_FD,  // passive surface, jamming receiver
  passive_IOS_HD,  // passive surface, no jamming
};

const char* to_string(SchemeKind kind);
/// Throws std::invalid_argument on an unknown name.
SchemeKind parse_scheme(const std::string& name);
std::vector<SchemeKind> all_schemes();

/// Scenario seen by a scheme: HD zeroes the jamming budget; passive schemes
/// switch the surface to passive mode and give Grace P_g^max + P_o^max so the
/// radiated budget matches the active schemes.
Scenario scheme_scenario(SchemeKind kind, const Scenario& base);

struct SchemeOutcome {
  SolutionState state;
  AoReport report;
  bool init_ok = false;
  bool feasible = false;  // init succeeded and the final state passes the audit
};

/// Runs one scheme on one channel realization. `scenario` must already be the
/// scheme's scenario. The random-surface scheme draws its phases from `rng`
/// and then optimizes only powers and Bob's beams.
SchemeOutcome run_scheme(SchemeKind kind, const Scenario& scenario, const ChannelSet& channels,
                         ChannelRng& rng, const AoOptions& options = {});

/// Swept quantities. Grid values are in the natural config units: dBm for
/// budgets (-inf for 0 W), dB for the amplitude cap, counts for K and M,
/// metres for the surface x-position.
enum class SweepParameter { jam_budget, alice_budget, amp_max, elements, antennas, ios_x };

const char* to_string(SweepParameter p);
/// Accepts P_j_max, P_a_max, alpha_max, K, M, ios_x. Throws
/// std::invalid_argument otherwise.
SweepParameter parse_parameter(const std::string& name);

/// `base` with the swept parameter set to `value`. The Alice budget sweep moves
/// Grace's budget with it (equal budgets).
Scenario apply_parameter(const Scenario& base, SweepParameter p, double value);

struct TrialRecord {
  SchemeKind scheme = SchemeKind::proposed_A_FD;
  double value = 0.0;
  int trial = 0;
  double rate_a = 0.0;
  double rate_g = 0.0;
  double alice = 0.0;
  double jam = 0.0;
  double mdep = 0.0;
  double kl = 0.0;
  bool feasible = false;
  double worst_residual = 0.0;
  double max_rank_ratio = 0.0;
  AoReport report;
};

struct PointSummary {
  SchemeKind scheme = SchemeKind::proposed_A_FD;
  double value = 0.0;
  int trials = 0;
  int feasible = 0;
  double mean_rate_a = 0.0;
  double half_width = 0.0;  // 95% normal half-width from the per-trial variance
  double mean_rate_g = 0.0;
  double mean_alice = 0.0;
  double mean_jam = 0.0;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::jam_budget;
  std::vector<double> grid;
  std::vector<SchemeKind> schemes;
  int trials = 0;
  std::vector<TrialRecord> records;  // ordered by (scheme, grid point, trial)
  std::vector<PointSummary> summary; // ordered by (scheme, grid point)

  const PointSummary& at(SchemeKind scheme, std::size_t point) const;
};

struct SweepOptions {
  int workers = 0;  // OpenMP threads, 0 for the runtime default
  AoOptions ao;
};

/// One trial of one scheme at one grid point. Channels come from
/// (scenario seed, trial) and the initialization stream from (seed, trial), so
/// every scheme and grid point sees the same random numbers.
TrialRecord run_trial(SchemeKind scheme, const Scenario& base, SweepParameter p, double value,
                      int trial, std::uint64_t seed, const AoOptions& options = {});

/// Full sweep, trials in parallel. Throws std::invalid_argument on an empty
/// grid, no schemes or trials < 1. Deterministic given the seed.
SweepResult sweep(SweepParameter p, const std::vector<double>& grid, const Scenario& base,
                  const std::vector<SchemeKind>& schemes, int trials, std::uint64_t seed,
                  const SweepOptions& options = {});
/// Single-threaded reference of `sweep`; identical result.
SweepResult sweep_serial(SweepParameter p, const std::vector<double>& grid, const Scenario& base,
                         const std::vector<SchemeKind>& schemes, int trials, std::uint64_t seed,
                         const SweepOptions& options = {});

/// Mean and 95% half-width over the feasible records.
std::vector<PointSummary> summarize(const std::vector<TrialRecord>& records,
                                    const std::vector<SchemeKind>& schemes,
                                    const std::vector<double>& grid);

/// Per-trial CSV for one scheme:
/// scheme,value,trial,R_a,R_g,P_a,P_j,mdep,kl,feasible.
std::string detail_csv(const SweepResult& result, SchemeKind scheme);
/// Means and half-widths of every scheme and grid point.
std::string summary_csv(const SweepResult& result);

}  // namespace covert
