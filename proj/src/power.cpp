#include "covert/power.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace covert {

namespace {

// num / den as an upper bound on a nonnegative variable.
double cap(double num, double den) {
  if (den > 0.0) return num / den;
  return num >= 0.0 ? kInf : -kInf;
}

// num / den as a lower bound.
double floor_of(double num, double den) {
  if (den > 0.0) return num / den;
  return num <= 0.0 ? 0.0 : kInf;
}

}  // namespace

XiBundle xi_values(const Scenario& s, const Gains& g, const PowerAlloc& p) {
  const double so = s.surface_noise();
  const double mu = s.qos_threshold();
  const double kappa = kappa_from_epsilon(s.covertness_eps);
  const double amp_noise = (g.rx_t + g.rx_r) * so;
  const double surface_noise = (g.frob_t + g.frob_r) * so;
  const double willie_t = g.ow_t * so;
  const double willie_r = g.ow_r * so;

  XiBundle xi;
  xi.xi1 = cap(p.grace * g.gb / mu - g.omega(p.jam, so, s.si_level) - s.noise_bob, g.ab);
  xi.xi3 = cap((kappa - 1.0) * (s.noise_willie + p.grace * g.gw + p.jam * g.bw + willie_r) - willie_t, g.aw);
  xi.xi4 = cap(p.grace * g.gb / mu - p.alice * g.ab - amp_noise - s.noise_bob, s.si_level * g.si);
  xi.xi6 = floor_of((p.alice * g.aw + willie_t) / (kappa - 1.0) - p.grace * g.gw - willie_r - s.noise_willie,
                    g.bw);
  if (!s.passive()) {
    xi.xi2 = cap(s.budget_ios - p.grace * g.out_g - p.jam * g.out_j - surface_noise, g.out_a);
    xi.xi5 = cap(s.budget_ios - p.grace * g.out_g - p.alice * g.out_a - surface_noise, g.out_j);
  }
  return xi;
}

AlicePower optimal_alice_power(const XiBundle& xi, double budget_alice) {
  const double m = std::min({budget_alice, xi.xi1, xi.xi2, xi.xi3});
  if (m < 0.0) return {0.0, false};
  return {m, true};
}

double optimal_jamming_power(const XiBundle& xi, double budget_jam) {
  if (xi.xi6 <= std::min({budget_jam, xi.xi4, xi.xi5})) return std::clamp(xi.xi6, 0.0, budget_jam);
  return 0.0;
}

namespace {

// a * P_a + b * P_j <= c
struct HalfPlane {
  double a, b, c;
};

std::vector<HalfPlane> polygon(const Scenario& s, const Gains& g, double pg) {
  const double so = s.surface_noise();
  const double mu = s.qos_threshold();
  const double kappa = kappa_from_epsilon(s.covertness_eps);
  std::vector<HalfPlane> h{
      {1.0, 0.0, s.budget_alice},
      {-1.0, 0.0, 0.0},
      {0.0, 1.0, s.budget_jam},
      {0.0, -1.0, 0.0},
      {g.ab, s.si_level * g.si, pg * g.gb / mu - (g.rx_t + g.rx_r) * so - s.noise_bob},
      {g.aw, -(kappa - 1.0) * g.bw,
       (kappa - 1.0) * (pg * g.gw + g.ow_r * so + s.noise_willie) - g.ow_t * so},
  };
  if (!s.passive()) {
    h.push_back({g.out_a, g.out_j, s.budget_ios - pg * g.out_g - (g.frob_t + g.frob_r) * so});
  }
  return h;
}

bool inside(const std::vector<HalfPlane>& hs, double pa, double pj) {
  for (const auto& h : hs) {
    const double lhs = h.a * pa + h.b * pj;
    const double scale = std::max({std::abs(h.a * pa), std::abs(h.b * pj), std::abs(h.c), 1e-300});
    if (lhs - h.c > 1e-9 * scale) return false;
  }
  return true;
}

}  // namespace

PowerSolution solve_power(const Scenario& s, const Gains& g) {
  PowerSolution out;
  const double pg = grace_power(s);
  const auto hs = polygon(s, g, pg);
  const double base = (g.rx_t + g.rx_r) * s.surface_noise() + s.noise_bob;
  const double leak = s.si_level * g.si;

  // Alice's SINR is linear-fractional in (P_a, P_j), so its maximum over the
  // polygon sits at a vertex.
  double best = -1.0;
  double probe = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      const double det = hs[i].a * hs[j].b - hs[j].a * hs[i].b;
      if (det == 0.0) continue;
      const double pa = (hs[i].c * hs[j].b - hs[j].c * hs[i].b) / det;
      const double pj = (hs[i].a * hs[j].c - hs[j].a * hs[i].c) / det;
      if (!std::isfinite(pa) || !std::isfinite(pj) || !inside(hs, pa, pj)) continue;
      const double value = std::max(pa, 0.0) * g.ab / (base + leak * std::max(pj, 0.0));
      const bool better = value > best * (1.0 + 1e-12) ||
                          (value >= best * (1.0 - 1e-12) && pj < probe);
      if (!any || better) {
        best = value;
        probe = std::clamp(pj, 0.0, s.budget_jam);
        any = true;
      }
    }
  }
  if (!any) return out;

  PowerAlloc p{0.0, pg, probe};
  const AlicePower alice = optimal_alice_power(xi_values(s, g, p), s.budget_alice);
  if (!alice.feasible) return out;
  p.alice = alice.value;
  const XiBundle at_alice = xi_values(s, g, p);
  const double jam = optimal_jamming_power(at_alice, s.budget_jam);
  // The probe itself is feasible, so the floor can only come in at or below it.
  if (jam <= probe && at_alice.xi6 <= std::min({s.budget_jam, at_alice.xi4, at_alice.xi5})) p.jam = jam;
  out.powers = p;
  out.probe_jam = probe;
  out.feasible = true;
  return out;
}

}  // namespace covert
