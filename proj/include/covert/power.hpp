#pragma once

#include "covert/physics.hpp"

namespace covert {

/// Caps and floors from rewriting the power constraints one variable at a time.
/// Xi1..Xi3 cap P_a (QoS, surface budget, covertness) at fixed (P_g, P_j);
/// Xi4, Xi5 cap P_j and Xi6 is the covertness floor on P_j at fixed (P_a, P_g).
/// A zero denominator turns a cap into +inf (or -inf when the constraint
/// cannot hold at all) and the floor into 0 (or +inf).
struct XiBundle {
  double xi1 = kInf, xi2 = kInf, xi3 = kInf;
  double xi4 = kInf, xi5 = kInf, xi6 = 0.0;
};

XiBundle xi_values(const Scenario& scenario, const Gains& gains, const PowerAlloc& powers);

struct AlicePower {
  double value = 0.0;
  bool feasible = true;  // false when the smallest cap is negative
};

/// min{P_a^max, Xi1, Xi2, Xi3}, clamped to [0, P_a^max].
AlicePower optimal_alice_power(const XiBundle& xi, double budget_alice);

/// Minimal feasible jamming: max(0, Xi6) when Xi6 <= min{P_j^max, Xi4, Xi5}, else 0.
double optimal_jamming_power(const XiBundle& xi, double budget_jam);

inline double grace_power(const Scenario& scenario) { return scenario.budget_grace; }

struct PowerSolution {
  PowerAlloc powers;
  double probe_jam = 0.0;  // jamming level at which P_a was evaluated
  bool feasible = false;
};

/// Full power step for fixed beams. P_g = P_g^max; the jamming level that
/// maximizes Alice's SINR over the (P_a, P_j) feasible polygon is found by
/// vertex enumeration, P_a follows from the closed form at that level and
/// P_j is then lowered to the minimal jamming that keeps covertness.
PowerSolution solve_power(const Scenario& scenario, const Gains& gains);

}  // namespace covert
