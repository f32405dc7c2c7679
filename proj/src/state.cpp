#include "covert/state.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace covert {

bool ConstraintReport::feasible() const { return worst() >= -tolerance; }

double ConstraintReport::worst() const {
  double w = kInf;
  for (const auto& r : residuals)
    if (r.gating) w = std::min(w, r.value);
  return w;
}

const Residual* ConstraintReport::find(const std::string& name) const {
  for (const auto& r : residuals)
    if (r.name == name) return &r;
  return nullptr;
}

std::string ConstraintReport::violations() const {
  std::string out;
  for (const auto& r : residuals) {
    if (r.gating && r.value < -tolerance) {
      if (!out.empty()) out += ", ";
      out += fmt::format("{}={:.3e}", r.name, r.value);
    }
  }
  return out;
}

namespace {

// (available - used) / scale, with scale = max(|available|, |used|, floor).
double normalized(double available, double used, double floor = 1e-300) {
  const double scale = std::max({std::abs(available), std::abs(used), floor});
  return (available - used) / scale;
}

}  // namespace

ConstraintReport check_all_constraints(const Scenario& s, const ChannelSet& ch,
                                       const SolutionState& st) {
  const Gains g = effective_gains(ch, st.ios, st.fd);
  const double so = s.surface_noise();
  const auto& p = st.powers;
  ConstraintReport rep;
  auto add = [&rep](std::string name, double v, bool gating = true) {
    rep.residuals.push_back({std::move(name), v, gating});
  };

  add("P_a<=max", normalized(s.budget_alice, p.alice));
  add("P_g<=max", normalized(s.budget_grace, p.grace));
  add("P_j<=max", normalized(s.budget_jam, p.jam));
  add("powers>=0", std::min({p.alice, p.grace, p.jam}) >= 0.0 ? 0.0 : -1.0);

  add("sic_order", normalized(g.cascade_g, g.cascade_a));
  add("sic_order_projected", normalized(g.gb, g.ab));

  const double mu = s.qos_threshold();
  const double omega = g.omega(p.jam, so, s.si_level);
  add("qos_grace", normalized(p.grace * g.gb, mu * (p.alice * g.ab + omega + s.noise_bob)));

  bool phases_ok = true;
  for (int k = 0; k < st.ios.size(); ++k) {
    for (double th : {st.ios.phase_t(k), st.ios.phase_r(k)})
      phases_ok = phases_ok && th >= 0.0 && th < 2.0 * kPi;
  }
  add("phase_range", phases_ok ? 0.0 : -1.0);

  const double cap = s.amplitude_cap();
  const double amp_peak = std::max(st.ios.amp_t.maxCoeff(), st.ios.amp_r.maxCoeff());
  add("amplitude", normalized(cap, amp_peak));
  if (s.passive()) {
    const double split =
        (st.ios.amp_t.array().square() + st.ios.amp_r.array().square()).maxCoeff();
    add("passive_split", normalized(1.0, split));
  }

  const double nt = st.fd.w_t.norm();
  const double nr = st.fd.w_r.norm();
  add("unit_norm", std::abs(nt * nt - 1.0) <= 1e-9 && std::abs(nr * nr - 1.0) <= 1e-9 ? 0.0 : -1.0);

  const double kappa = kappa_from_epsilon(s.covertness_eps);
  const double cov_lhs = p.alice * g.aw + g.ow_t * so;
  const double cov_base = p.grace * g.gw + p.jam * g.bw + g.ow_r * so + s.noise_willie;
  add("covertness", normalized((kappa - 1.0) * cov_base, cov_lhs, (kappa - 1.0) * s.noise_willie));

  if (!s.passive()) {
    const double out = ios_output_power(ch, st.ios, st.fd, p, so);
    add("ios_output", normalized(s.budget_ios, out));

    const int k = st.ios.size();
    const RVec incident = incident_power(ch, st.fd, p);
    const RVec p_in = st.p_in.size() == k ? st.p_in : incident;
    const RVec p_elem = st.p_elem.size() == k ? st.p_elem : per_element_power(st.ios, p_in, so);
    const RVec need = per_element_power(st.ios, p_in, so);
    double elem = kInf;
    for (int i = 0; i < k; ++i) elem = std::min(elem, normalized(p_elem(i), need(i), so));
    add("element_power", elem);
    add("element_budget", normalized(s.per_element_budget, p_elem.maxCoeff()));
    add("incident_split", normalized(incident.sum(), p_in.sum(), so));
    add("p_in>=0", p_in.minCoeff() >= 0.0 ? 0.0 : -1.0);
    add("element_total", normalized(s.budget_ios, p_elem.sum()));
    // Same budget with p_in set to the physical incident power.
    add("element_total_physical",
        normalized(s.budget_ios, per_element_power(st.ios, incident, so).sum()), false);
  }
  return rep;
}

void relift(SolutionState& st) {
  const CVec vt = st.ios.coeff_t();
  CVec vr(vt.size() + 1);
  vr << st.ios.coeff_r(), cdouble(1.0, 0.0);
  st.V_t = vt * vt.adjoint();
  st.V_r = vr * vr.adjoint();
  st.W_t = st.fd.w_t * st.fd.w_t.adjoint();
  st.W_r = st.fd.w_r * st.fd.w_r.adjoint();
}

void refresh_rates(const Scenario& s, const ChannelSet& ch, SolutionState& st) {
  const Gains g = effective_gains(ch, st.ios, st.fd);
  const Rates r = sinr_and_rates(g, st.powers, s.noise_bob, s.surface_noise(), s.si_level);
  st.rate_a = r.rate_a;
  st.rate_g = r.rate_g;
}

void settle_element_budgets(const Scenario& s, const ChannelSet& ch, SolutionState& st) {
  const int k = st.ios.size();
  const RVec incident = incident_power(ch, st.fd, st.powers);
  RVec p_in = st.p_in.size() == k ? st.p_in.cwiseMax(0.0) : incident;
  const double total = incident.sum();
  if (p_in.sum() > total) p_in *= total / p_in.sum();
  st.p_in = p_in;
  st.p_elem = per_element_power(st.ios, p_in, s.surface_noise());
}

}  // namespace covert
