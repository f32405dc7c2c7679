#include "covert/ao.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <json.hpp>

#include "covert/power.hpp"

namespace covert {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CVec random_unit(ChannelRng& rng, int n) {
  std::normal_distribution<double> nd;
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = cdouble(nd(rng), nd(rng));
  return v / v.norm();
}

// Re-solves the powers for the beams in `st`, then refreshes lifts, element
// budgets and rates. Returns false when the power step finds no feasible point.
bool complete(const Scenario& s, const ChannelSet& ch, SolutionState& st) {
  const Gains g = effective_gains(ch, st.ios, st.fd);
  const PowerSolution ps = solve_power(s, g);
  if (!ps.feasible) return false;
  st.powers = ps.powers;
  relift(st);
  settle_element_budgets(s, ch, st);
  refresh_rates(s, ch, st);
  return true;
}

// Keeps the better of (new beams, re-solved powers) and (new beams, old
// powers), provided it passes the audit and does not lower R_a.
bool try_accept(const Scenario& s, const ChannelSet& ch, SolutionState& current,
                SolutionState candidate) {
  SolutionState best;
  bool have = false;
  SolutionState kept = candidate;
  relift(kept);
  settle_element_budgets(s, ch, kept);
  refresh_rates(s, ch, kept);
  if (check_all_constraints(s, ch, kept).feasible()) {
    best = kept;
    have = true;
  }
  if (complete(s, ch, candidate) && check_all_constraints(s, ch, candidate).feasible() &&
      (!have || candidate.rate_a > best.rate_a)) {
    best = candidate;
    have = true;
  }
  if (!have || best.rate_a < current.rate_a) return false;
  best.iteration = current.iteration;
  current = std::move(best);
  return true;
}

}  // namespace

double uniform_amplitude(const Scenario& s, const ChannelSet& ch, const FdBeam& fd) {
  const int k = ch.num_elements();
  const PowerAlloc full{s.budget_alice, s.budget_grace, s.budget_jam};
  double a2 = s.amplitude_cap() * s.amplitude_cap();
  if (s.passive()) return s.amplitude_cap();
  const RVec incident = incident_power(ch, fd, full);
  const double so = s.surface_noise();
  a2 = std::min(a2, 0.99 * s.budget_ios / (incident.sum() + k * so));
  a2 = std::min(a2, 0.99 * s.per_element_budget / (incident.maxCoeff() + so));
  return std::sqrt(a2);
}

bool initialize_beams(const Scenario& s, const ChannelSet& ch, const IosBeam& ios, ChannelRng& rng,
                      SolutionState& out) {
  const int m = ch.num_antennas();
  SolutionState st;
  st.ios = ios;
  const CVec g_sig = ch.H_ob * ios.coeff_r().cwiseProduct(ch.h_go);
  st.fd.w_t = random_unit(rng, m);
  st.fd.w_r = g_sig.norm() > 0.0 ? CVec(g_sig / g_sig.norm()) : random_unit(rng, m);
  if (!complete(s, ch, st)) return false;
  out = std::move(st);
  return check_all_constraints(s, ch, out).feasible();
}

InitResult initialize(const Scenario& s, const ChannelSet& ch, ChannelRng& rng, int max_attempts) {
  const int k = ch.num_elements();
  const int m = ch.num_antennas();
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  InitResult out;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    out.attempts = attempt + 1;
    CVec dir(k);
    if (attempt == 0) {
      const CMat grace_cascade = ch.H_ob * ch.h_go.asDiagonal();
      Eigen::JacobiSVD<CMat> svd(grace_cascade, Eigen::ComputeFullV);
      dir = svd.matrixV().col(0);
    } else {
      for (int i = 0; i < k; ++i) dir(i) = std::polar(1.0, phase(rng));
    }
    // The amplitude rule depends on w_t only through the jamming term; draw
    // it with the same stream position as initialize_beams will.
    ChannelRng probe = rng;
    FdBeam fd;
    fd.w_t = random_unit(probe, m);
    const double amp = uniform_amplitude(s, ch, fd);
    CVec vr(k);
    for (int i = 0; i < k; ++i)
      vr(i) = std::polar(amp, std::abs(dir(i)) > 0.0 ? std::arg(dir(i)) : 0.0);
    const IosBeam ios = IosBeam::from_coefficients(CVec::Zero(k), vr);
    if (initialize_beams(s, ch, ios, rng, out.state)) {
      out.ok = true;
      return out;
    }
  }
  return out;
}

InitResult initialize_random_surface(const Scenario& s, const ChannelSet& ch, ChannelRng& rng,
                                     int max_attempts) {
  const int k = ch.num_elements();
  const int m = ch.num_antennas();
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  InitResult out;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    out.attempts = attempt + 1;
    CVec vt(k), vr(k);
    for (int i = 0; i < k; ++i) vt(i) = std::polar(1.0, phase(rng));
    for (int i = 0; i < k; ++i) vr(i) = std::polar(1.0, phase(rng));
    ChannelRng probe = rng;
    FdBeam fd;
    fd.w_t = random_unit(probe, m);
    // Both sides share the incident power, so each gets half the uniform
    // amplitude budget.
    const double amp = uniform_amplitude(s, ch, fd) / std::sqrt(2.0);
    const IosBeam ios = IosBeam::from_coefficients(amp * vt, amp * vr);
    if (initialize_beams(s, ch, ios, rng, out.state)) {
      out.ok = true;
      return out;
    }
  }
  return out;
}

PenaltyOptions penalty_options(const Scenario& s, int index) {
  PenaltyOptions o;
  o.rho0 = s.rho0[index];
  o.decay = s.rho_decay[index];
  o.zeta = s.zeta[index];
  return o;
}

AoResult run_ao(const Scenario& s, const ChannelSet& ch, const SolutionState& init,
                const AoOptions& opt) {
  const auto t0 = Clock::now();
  std::vector<PenaltyOptions> pen = opt.penalty;
  for (int i = static_cast<int>(pen.size()); i < 3; ++i) pen.push_back(penalty_options(s, i));

  AoResult res;
  auto& rep = res.report;
  SolutionState cur = init;
  relift(cur);
  settle_element_budgets(s, ch, cur);
  refresh_rates(s, ch, cur);
  rep.rate_trace.push_back(cur.rate_a);
  if (!check_all_constraints(s, ch, cur).feasible()) {
    rep.reason = "infeasible_start";
    res.state = cur;
    rep.seconds = since(t0);
    return res;
  }

  rep.reason = "max_iterations";
  for (int it = 0; it < opt.max_iterations; ++it) {
    const auto ts = Clock::now();
    const double before = cur.rate_a;
    AoStep step;

    // Powers for the current beams.
    try_accept(s, ch, cur, cur);

    // Surface at the current jamming level and at the largest feasible one:
    // minimal jamming alone never leaves P_j = 0 once the surface has used up
    // the covertness slack.
    if (opt.optimize_surface) {
      std::vector<SolutionState> starts{cur};
      const Gains g = effective_gains(ch, cur.ios, cur.fd);
      const XiBundle xi = xi_values(s, g, cur.powers);
      const double hi = std::min({s.budget_jam, xi.xi4, xi.xi5});
      if (hi > cur.powers.jam * (1.0 + 1e-9) && hi > 0.0) {
        SolutionState jam = cur;
        jam.powers.jam = hi;
        relift(jam);
        settle_element_budgets(s, ch, jam);
        starts.push_back(jam);
      }
      for (const auto& start : starts) {
        const IosSolution sol = solve_ios_beamforming(s, ch, start, pen[0]);
        rep.sdp_solves += sol.diag.sdp_solves;
        if (step.ios.empty() || sol.diag.status == SubproblemStatus::ok) step.ios = to_string(sol.diag.status);
        if (sol.diag.status == SubproblemStatus::ok) {
          SolutionState cand = start;
          cand.ios = sol.ios;
          cand.p_in = sol.p_in;
          if (try_accept(s, ch, cur, cand)) {
            step.ios_accepted = true;
            rep.rank_ratio[0] = sol.diag.rank_ratio.back();
          }
        }
      }
    }
    {
      const BeamSolution sol = solve_receive_beamforming(s, ch, cur, pen[1]);
      rep.sdp_solves += sol.diag.sdp_solves;
      step.receive = to_string(sol.diag.status);
      if (sol.diag.status == SubproblemStatus::ok) {
        SolutionState cand = cur;
        cand.fd.w_r = sol.w;
        step.receive_accepted = try_accept(s, ch, cur, cand);
        if (step.receive_accepted) rep.rank_ratio[1] = sol.diag.rank_ratio.back();
      }
    }
    {
      const BeamSolution sol = solve_transmit_beamforming(s, ch, cur, pen[2]);
      rep.sdp_solves += sol.diag.sdp_solves;
      step.transmit = to_string(sol.diag.status);
      if (sol.diag.status == SubproblemStatus::ok) {
        SolutionState cand = cur;
        cand.fd.w_t = sol.w;
        step.transmit_accepted = try_accept(s, ch, cur, cand);
        if (step.transmit_accepted) rep.rank_ratio[2] = sol.diag.rank_ratio.back();
      }
    }
    cur.iteration = it + 1;
    step.seconds = since(ts);
    rep.steps.push_back(step);
    rep.rate_trace.push_back(cur.rate_a);
    if (cur.rate_a - before < s.zeta[3]) {
      rep.reason = "converged";
      break;
    }
    if (opt.wall_clock_limit > 0.0 && since(t0) > opt.wall_clock_limit) {
      rep.reason = "wall_clock";
      break;
    }
  }
  res.state = cur;
  rep.seconds = since(t0);
  return res;
}

std::string to_json_line(const AoReport& r) {
  nlohmann::json j;
  j["rate_trace"] = r.rate_trace;
  j["reason"] = r.reason;
  j["seconds"] = r.seconds;
  j["sdp_solves"] = r.sdp_solves;
  j["rank_ratio"] = r.rank_ratio;
  auto steps = nlohmann::json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"ios", s.ios},
                     {"ios_accepted", s.ios_accepted},
                     {"receive", s.receive},
                     {"receive_accepted", s.receive_accepted},
                     {"transmit", s.transmit},
                     {"transmit_accepted", s.transmit_accepted},
                     {"seconds", s.seconds}});
  }
  j["steps"] = steps;
  return j.dump();
}

}  // namespace covert
