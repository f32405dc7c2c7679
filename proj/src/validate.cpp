#include "covert/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "covert/ao.hpp"
#include "covert/beamform.hpp"
#include "covert/power.hpp"

namespace covert {

namespace {

CVec unit(ChannelRng& rng, int n) {
  std::normal_distribution<double> nd;
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = cdouble(nd(rng), nd(rng));
  return v / v.norm();
}

IosBeam random_surface(ChannelRng& rng, int k, double amax) {
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

bool power_feasible(const Scenario& s, const Gains& g, const PowerAlloc& p, double kappa) {
  const double so = s.surface_noise();
  const Rates r = sinr_and_rates(g, p, s.noise_bob, so, s.si_level);
  if (r.sinr_g < s.qos_threshold() * (1.0 - 1e-9)) return false;
  if (!covertness_satisfied(g, p, kappa, so, s.noise_willie, 1e-9).satisfied) return false;
  if (!s.passive()) {
    const double out =
        p.alice * g.out_a + p.grace * g.out_g + p.jam * g.out_j + (g.frob_t + g.frob_r) * so;
    if (out > s.budget_ios * (1.0 + 1e-9)) return false;
  }
  return true;
}

// Best Alice rate on a (P_a, P_j) lattice at P_g = P_g^max; -1 when nothing
// on the lattice is feasible.
double grid_rate(const Scenario& s, const Gains& g, int steps, double kappa) {
  double best = -1.0;
  const int jam_steps = s.budget_jam > 0.0 ? steps : 0;
  for (int j = 0; j <= jam_steps; ++j) {
    const double pj = s.budget_jam * j / steps;
    for (int a = steps; a >= 0; --a) {
      const PowerAlloc p{s.budget_alice * a / steps, s.budget_grace, pj};
      if (!power_feasible(s, g, p, kappa)) continue;
      best = std::max(best, sinr_and_rates(g, p, s.noise_bob, s.surface_noise(), s.si_level).rate_a);
      break;
    }
  }
  return best;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const Scenario& s, std::uint64_t seed, int instances) {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, bool pass, std::string detail) {
    out.push_back({std::move(name), pass, std::move(detail)});
  };

  {
    const double v = mdep({1.0, 2.0});
    add("mdep_closed_form", std::abs(v - 0.75) < 1e-12, fmt::format("mdep(1,2) = {:.15g}", v));
    const MdepEstimate mc = mdep_monte_carlo({1.0, 2.0}, 1000000, seed);
    add("mdep_monte_carlo", std::abs(mc.estimate - 0.75) < 0.003,
        fmt::format("estimate {:.5f}", mc.estimate));
  }
  {
    double worst = 0.0;
    for (double eps : {0.01, 0.05, 0.1, 0.2, 0.5}) {
      const double k = kappa_from_epsilon(eps);
      worst = std::max(worst, std::abs(std::log(k) + 1.0 / k - 1.0 - 2.0 * eps * eps));
    }
    add("kappa_root", worst <= 1e-9 && kappa_from_epsilon(0.0) == 1.0,
        fmt::format("max residual {:.3g}", worst));
  }
  {
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
      const double ratio = std::pow(10.0, 6.0 * i / 199.0);
      const DetectionPair d{1.0, ratio};
      if (1.0 - std::sqrt(kl_divergence(d) / 2.0) > mdep(d) + 1e-12) ++bad;
    }
    add("kl_lower_bound", bad == 0, fmt::format("{} violations of 200", bad));
  }

  const double kappa = kappa_from_epsilon(s.covertness_eps);
  int power_bad = 0, lift_bad = 0, init_bad = 0;
  double lift_worst = 0.0;
  for (int t = 0; t < instances; ++t) {
    const ChannelSet ch = generate_channels(s, static_cast<std::uint64_t>(t));
    ChannelRng rng = make_trial_rng(seed, static_cast<std::uint64_t>(t));
    const int k = ch.num_elements();
    const int m = ch.num_antennas();
    const IosBeam ios = random_surface(rng, k, s.amplitude_cap() / std::sqrt(double(k)));
    const FdBeam fd{unit(rng, m), unit(rng, m)};
    const Gains g = effective_gains(ch, ios, fd);

    const PowerSolution ps = solve_power(s, g);
    const double grid = grid_rate(s, g, 200, kappa);
    if (grid >= 0.0) {
      const double r = sinr_and_rates(g, ps.powers, s.noise_bob, s.surface_noise(), s.si_level).rate_a;
      if (!ps.feasible || !power_feasible(s, g, ps.powers, kappa) || r < grid * (1.0 - 1e-9))
        ++power_bad;
    }

    const LiftedMatrices L = build_lifted(ch, ios, fd);
    const CVec vt = ios.coeff_t();
    CVec vr1(k + 1);
    vr1 << ios.coeff_r(), cdouble(1.0, 0.0);
    const TraceGains tg = trace_gains(L, vt * vt.adjoint(), vr1 * vr1.adjoint(),
                                      fd.w_r * fd.w_r.adjoint(), fd.w_t * fd.w_t.adjoint());
    double e = 0.0;
    for (auto [x, y] : {std::pair{tg.surface.ab, g.ab}, {tg.surface.gb, g.gb},
                        {tg.surface.gw, g.gw}, {tg.surface.aw, g.aw}, {tg.surface.bw, g.bw},
                        {tg.surface.si, g.si}, {tg.surface.rx_t, g.rx_t},
                        {tg.surface.rx_r, g.rx_r}, {tg.surface.out_j, g.out_j},
                        {tg.receive.ab, g.ab}, {tg.receive.gb, g.gb}, {tg.receive.si, g.si},
                        {tg.transmit.bw, g.bw}, {tg.transmit.si, g.si}})
      e = std::max(e, rel(x, y));
    lift_worst = std::max(lift_worst, e);
    if (e > 1e-9) ++lift_bad;

    const InitResult init = initialize(s, ch, rng);
    if (init.ok && !check_all_constraints(s, ch, init.state).feasible()) ++init_bad;
  }
  add("power_vs_grid", power_bad == 0, fmt::format("{} of {} instances worse than grid", power_bad, instances));
  add("trace_identities", lift_bad == 0, fmt::format("worst relative error {:.3g}", lift_worst));
  add("init_feasible", init_bad == 0, fmt::format("{} accepted inits fail the audit", init_bad));
  return out;
}

}  // namespace covert
