#pragma once

#include <string>
#include <vector>

#include "covert/physics.hpp"

namespace covert {

/// Signed, scale-normalized residual of one constraint; >= 0 means satisfied.
struct Residual {
  std::string name;
  double value = 0.0;
  bool gating = true;  // informational entries do not affect feasibility
};

struct ConstraintReport {
  std::vector<Residual> residuals;
  double tolerance = 1e-6;

  bool feasible() const;
  /// Smallest gating residual (+inf when there is none).
  double worst() const;
  const Residual* find(const std::string& name) const;
  /// Names of violated gating constraints, comma separated.
  std::string violations() const;
};

/// One full candidate solution of the covert-rate problem.
struct SolutionState {
  PowerAlloc powers;
  IosBeam ios;
  FdBeam fd;
  CMat V_t;  // K x K lift of v_t
  CMat V_r;  // (K+1) x (K+1) lift of [v_r; 1]
  CMat W_t;
  CMat W_r;
  RVec p_in;    // incident-power split (decision variable)
  RVec p_elem;  // per-element budget p_k (decision variable)
  double rate_a = 0.0;
  double rate_g = 0.0;
  int iteration = 0;
};

/// Evaluates every constraint of the joint problem at `state`.
ConstraintReport check_all_constraints(const Scenario& scenario, const ChannelSet& channels,
                                       const SolutionState& state);

/// Rebuilds V_t, V_r, W_t, W_r from the raw beams.
void relift(SolutionState& state);

/// Recomputes rate_a / rate_g from the raw (non-lifted) quantities.
void refresh_rates(const Scenario& scenario, const ChannelSet& channels, SolutionState& state);

/// Makes (p_in, p_elem) consistent with the current powers and beams:
/// p_in is scaled down to respect the incident-power sum and p_elem is set to
/// the smallest per-element budget the amplitudes need.
void settle_element_budgets(const Scenario& scenario, const ChannelSet& channels,
                            SolutionState& state);

}  // namespace covert
