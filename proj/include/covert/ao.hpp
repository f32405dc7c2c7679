#pragma once

#include <array>
#include <string>
#include <vector>

#include "covert/beamform.hpp"
#include "covert/state.hpp"

namespace covert {

struct InitResult {
  SolutionState state;
  bool ok = false;
  int attempts = 0;
};

/// Feasible starting point: no refraction, reflection phase-aligned to Grace's
/// cascade (random phases on restarts) with budget-feasible uniform
/// amplitudes, w_r matched to Grace, random w_t and the power step on top.
/// Up to `max_attempts` tries; `ok` is false when none passes the audit.
InitResult initialize(const Scenario& scenario, const ChannelSet& channels, ChannelRng& rng,
                      int max_attempts = 20);

/// Random surface phases on both sides with uniform budget-feasible
/// amplitudes (kept fixed afterwards), w_r matched to Grace, random w_t and the
/// power step on top.
InitResult initialize_random_surface(const Scenario& scenario, const ChannelSet& channels,
                                     ChannelRng& rng, int max_attempts = 20);

struct AoOptions {
  int max_iterations = 50;
  double wall_clock_limit = 0.0;  // seconds, 0 for none
  bool optimize_surface = true;   // false keeps the initial surface fixed
  /// Penalty controls of the surface, receive and transmit subproblems.
  /// Built from the scenario when left empty.
  std::vector<PenaltyOptions> penalty;
};

/// Subproblem outcome of one outer pass.
struct AoStep {
  std::string ios, receive, transmit;
  bool ios_accepted = false, receive_accepted = false, transmit_accepted = false;
  double seconds = 0.0;
};

struct AoReport {
  std::vector<double> rate_trace;  // R_a at the start and after every outer pass
  std::vector<AoStep> steps;
  double seconds = 0.0;
  std::string reason;  // converged | max_iterations | wall_clock | infeasible_start
  int sdp_solves = 0;
  /// lambda_2 / lambda_1 of the lifted solution behind the surface, receive
  /// and transmit beams currently held (0 while a beam is still the rank-one
  /// initial one).
  std::array<double, 3> rank_ratio{0.0, 0.0, 0.0};
};

struct AoResult {
  SolutionState state;
  AoReport report;
};

/// Penalty controls for subproblem `index` (0 surface, 1 receive, 2 transmit)
/// from the scenario's rho0, decay and zeta.
PenaltyOptions penalty_options(const Scenario& scenario, int index);

/// Alternating optimization: powers, surface, receive beam, transmit beam per
/// pass. A subproblem result is accepted only when the recovered rank-one
/// state (with the power step re-solved) passes the full audit and does not
/// lower R_a, so the trace is monotone. Stops when the pass gain is below
/// zeta[3].
AoResult run_ao(const Scenario& scenario, const ChannelSet& channels, const SolutionState& init,
                const AoOptions& options = {});

/// Compact one-line JSON record of a report.
std::string to_json_line(const AoReport& report);

}  // namespace covert
