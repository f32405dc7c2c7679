#pragma once

// Shared instance generators and brute-force oracles for the test binaries.

#include <cmath>
#include <random>

#include "covert/physics.hpp"

namespace covert::testing {

inline CVec random_cvec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = {nd(rng), nd(rng)};
  return v;
}

inline CMat random_cmat(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  CMat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = {nd(rng), nd(rng)};
  return m;
}

inline IosBeam random_beam(std::mt19937_64& rng, int k, double amax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  IosBeam b = IosBeam::zeros(k);
  for (int i = 0; i < k; ++i) {
    b.amp_t(i) = amax * u(rng);
    b.amp_r(i) = amax * u(rng);
    b.phase_t(i) = 2.0 * kPi * u(rng);
    b.phase_r(i) = 2.0 * kPi * u(rng);
  }
  return b;
}

inline FdBeam random_fd(std::mt19937_64& rng, int m) {
  return {random_cvec(rng, m).normalized(), random_cvec(rng, m).normalized()};
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

struct GridOptimum {
  bool feasible = false;
  double alice = 0.0;
  double jam = 0.0;
  double rate = 0.0;
};

/// Exhaustive search on a (P_a, P_j) lattice with P_g = P_g^max. Feasibility
/// is evaluated from the raw rate, covertness and surface-power expressions.
/// For each P_j the feasible P_a values form a prefix of the lattice (every
/// constraint tightens with P_a), so the largest one is found by bisection.
inline GridOptimum power_grid_search(const Scenario& s, const Gains& g, int steps) {
  const double kappa = kappa_from_epsilon(s.covertness_eps);
  const double so = s.surface_noise();
  const double pg = s.budget_grace;
  auto feasible = [&](double pa, double pj) {
    const PowerAlloc p{pa, pg, pj};
    const Rates r = sinr_and_rates(g, p, s.noise_bob, so, s.si_level);
    if (r.sinr_g < s.qos_threshold()) return false;
    if (!covertness_satisfied(g, p, kappa, so, s.noise_willie, 0.0).satisfied) return false;
    if (!s.passive()) {
      const double out = pa * g.out_a + pg * g.out_g + pj * g.out_j + (g.frob_t + g.frob_r) * so;
      if (out > s.budget_ios) return false;
    }
    return true;
  };
  const double da = s.budget_alice / steps;
  const double dj = s.budget_jam / steps;
  const int jam_steps = s.budget_jam > 0.0 ? steps : 0;
  GridOptimum best;
  for (int j = 0; j <= jam_steps; ++j) {
    const double pj = j * dj;
    if (!feasible(0.0, pj)) continue;
    int lo = 0, hi = steps;
    if (feasible(hi * da, pj)) {
      lo = hi;
    } else {
      while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (feasible(mid * da, pj) ? lo : hi) = mid;
      }
    }
    const double rate = sinr_and_rates(g, {lo * da, pg, pj}, s.noise_bob, so, s.si_level).rate_a;
    if (!best.feasible || rate > best.rate * (1.0 + 1e-12)) best = {true, lo * da, pj, rate};
  }
  return best;
}

}  // namespace covert::testing
