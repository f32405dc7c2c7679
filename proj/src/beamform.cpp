#include "covert/beamform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "covert/conic/dinkelbach.hpp"
#include "covert/conic/rank_one.hpp"

namespace covert {

using conic::LinearForm;
using conic::Sense;
using conic::SdpProblem;

const char* to_string(SubproblemStatus status) {
  switch (status) {
    case SubproblemStatus::ok: return "ok";
    case SubproblemStatus::skipped: return "skipped";
    case SubproblemStatus::infeasible: return "infeasible";
    case SubproblemStatus::solver_failed: return "solver_failed";
    case SubproblemStatus::rank_failed: return "rank_failed";
  }
  return "unknown";
}

CMat LiftedMatrices::ab_coef() const {
  const CVec x = B.adjoint() * w_r;
  return x * x.adjoint();
}

CMat LiftedMatrices::gb_coef() const {
  const CVec x = A.adjoint() * w_r;
  return x * x.adjoint();
}

LiftedMatrices build_lifted(const ChannelSet& ch, const IosBeam& ios, const FdBeam& fd) {
  const int k = ch.num_elements();
  const int m = ch.num_antennas();
  if (ios.size() != k || fd.w_t.size() != m || fd.w_r.size() != m || ch.H_ob.rows() != m ||
      ch.H_ob.cols() != k || ch.H_bo.rows() != k || ch.H_bo.cols() != m || ch.h_go.size() != k ||
      ch.h_ow.size() != k || ch.h_bw.size() != m) {
    throw std::invalid_argument("build_lifted: dimension mismatch");
  }
  LiftedMatrices L;
  L.k = k;
  L.m = m;
  L.w_r = fd.w_r;
  L.w_t = fd.w_t;

  const CVec vt = ios.coeff_t();
  const CVec vr = ios.coeff_r();
  const CVec jam_in = ch.H_bo * fd.w_t;
  const CVec rx = (fd.w_r.adjoint() * ch.H_ob).transpose();  // [w_r^H H_ob]_k
  const CVec ow = ch.h_ow.transpose();

  L.A = CMat::Zero(m, k + 1);
  L.A.leftCols(k) = ch.H_ob * ch.h_go.asDiagonal();
  L.B = ch.H_ob * ch.h_ao.asDiagonal();

  // The gain of a row vector a acting on v is |a v|^2 = tr(conj(a) a^T V),
  // so the stored vectors are conjugated rows.
  L.c = CVec::Zero(k + 1);
  L.c.head(k) = ow.cwiseProduct(ch.h_go).conjugate();
  L.d = ow.cwiseProduct(ch.h_ao).conjugate();
  L.e.resize(k + 1);
  L.e.head(k) = ow.cwiseProduct(jam_in).conjugate();
  L.e(k) = std::conj((ch.h_bw * fd.w_t)(0));
  L.f.resize(k + 1);
  L.f.head(k) = rx.cwiseProduct(jam_in).conjugate();
  L.f(k) = std::conj((fd.w_r.adjoint() * ch.H_bb * fd.w_t)(0));

  auto padded = [k](const RVec& x) {
    RVec out = RVec::Zero(k + 1);
    out.head(k) = x;
    return out;
  };
  const RVec ow2 = ow.cwiseAbs2();
  const RVec rx2 = rx.cwiseAbs2();
  L.phi_rw = padded(ow2);
  L.phi_tw = ow2;
  L.phi_go = padded(ch.h_go.cwiseAbs2());
  L.phi_ao = ch.h_ao.cwiseAbs2();
  L.phi_rb = padded(rx2);
  L.phi_tb = rx2;
  L.phi_bo = padded(jam_in.cwiseAbs2());
  L.pi = padded(RVec::Ones(k));

  const CMat ht = ch.H_ob * vt.asDiagonal();
  const CMat hr = ch.H_ob * vr.asDiagonal();
  L.G_t = ht * ht.adjoint();
  L.G_r = hr * hr.adjoint();
  const CVec s = ch.H_bb * fd.w_t + hr * jam_in;
  L.G_b = s * s.adjoint();
  const CVec a_sig = L.B * vt;
  L.G_a = a_sig * a_sig.adjoint();
  CVec vr1(k + 1);
  vr1 << vr, cdouble(1.0, 0.0);
  const CVec g_sig = L.A * vr1;
  L.G_g = g_sig * g_sig.adjoint();

  const CMat rb = vr.asDiagonal() * ch.H_bo;
  L.Gt_r = rb.adjoint() * rb;
  const CRow gw = ch.h_ow * rb + ch.h_bw;
  L.Gt_w = gw.adjoint() * gw;
  const CRow q = fd.w_r.adjoint() * (ch.H_bb + ch.H_ob * rb);
  L.Gt_j = q.adjoint() * q;
  return L;
}

TraceGains trace_gains(const LiftedMatrices& L, const CMat& V_t, const CMat& V_r, const CMat& W_r,
                       const CMat& W_t) {
  auto tr = [](const CMat& coef, const CMat& v) { return (coef * v).trace().real(); };
  auto outer = [](const CVec& x) -> CMat { return x * x.adjoint(); };
  auto dg = [](const RVec& x) -> CMat { return x.cast<cdouble>().asDiagonal(); };
  TraceGains out;
  Gains& s = out.surface;
  s.ab = tr(L.ab_coef(), V_t);
  s.gb = tr(L.gb_coef(), V_r);
  s.gw = tr(outer(L.c), V_r);
  s.aw = tr(outer(L.d), V_t);
  s.bw = tr(outer(L.e), V_r);
  s.si = tr(outer(L.f), V_r);
  s.rx_t = tr(dg(L.phi_tb), V_t);
  s.rx_r = tr(dg(L.phi_rb), V_r);
  s.ow_t = tr(dg(L.phi_tw), V_t);
  s.ow_r = tr(dg(L.phi_rw), V_r);
  s.out_a = tr(dg(L.phi_ao), V_t);
  s.out_g = tr(dg(L.phi_go), V_r);
  s.out_j = tr(dg(L.phi_bo), V_r);
  s.frob_t = V_t.trace().real();
  s.frob_r = tr(dg(L.pi), V_r);
  Gains& r = out.receive;
  r.ab = tr(L.G_a, W_r);
  r.gb = tr(L.G_g, W_r);
  r.rx_t = tr(L.G_t, W_r);
  r.rx_r = tr(L.G_r, W_r);
  r.si = tr(L.G_b, W_r);
  Gains& t = out.transmit;
  t.out_j = tr(L.Gt_r, W_t);
  t.bw = tr(L.Gt_w, W_t);
  t.si = tr(L.Gt_j, W_t);
  return out;
}

RVec agm_update(const CMat& V_t, const CMat& V_r, const RVec& p_in, double sigma_ios) {
  const int k = static_cast<int>(V_t.rows());
  RVec mu(k);
  for (int i = 0; i < k; ++i) {
    const double x = V_t(i, i).real() + V_r(i, i).real();
    const double y = p_in(i) + sigma_ios;
    mu(i) = x < 1e-12 ? 1.0 : std::sqrt(std::max(y, 0.0) / x);
    if (!(mu(i) > 0.0)) mu(i) = 1.0;
  }
  return mu;
}

namespace {

CMat diag_of(const RVec& x) { return x.cast<cdouble>().asDiagonal(); }

double tr(const CMat& coef, const CMat& v) { return (coef.cwiseProduct(v.transpose())).sum().real(); }

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// A solver result is usable when it is optimal, or inaccurate but with a
// primal residual that is small against the largest right-hand side.
bool usable(const conic::SdpSolution& sol, const conic::SdpProblem& prob) {
  if (sol.status == conic::SdpStatus::optimal) return true;
  if (sol.status != conic::SdpStatus::inaccurate) return false;
  double scale = 1.0;
  for (const auto& c : prob.constraints()) scale = std::max(scale, std::abs(c.rhs - c.form.constant));
  return sol.primal_residual <= 1e-6 * scale;
}

SubproblemStatus failure_of(const conic::SdpSolution& sol) {
  return sol.status == conic::SdpStatus::infeasible ? SubproblemStatus::infeasible
                                                    : SubproblemStatus::solver_failed;
}

double rank_ratio(const CMat& v) {
  const auto lp = conic::leading_eigenpair(v);
  return lp.value > 0.0 ? std::max(lp.second, 0.0) / lp.value : 1.0;
}

// ---------------------------------------------------------------- surface --

// Rank-one lift [x; 1] closest in spirit to V = [X y; y^H 1]: x is the leading
// eigenvector of X scaled by its eigenvalue's root, rotated to align with y.
// When nothing couples v_r to the trailing slot the relaxation can return a
// block-diagonal V whose plain leading eigenvector has no trailing component;
// the completion still gives a usable rank-one point.
CVec trailing_completion(const CMat& v) {
  const int k = static_cast<int>(v.rows()) - 1;
  const auto lp = conic::leading_eigenpair(v.topLeftCorner(k, k));
  CVec x = std::sqrt(std::max(lp.value, 0.0)) * lp.vector;
  const cdouble c = x.dot(v.col(k).head(k));  // x^H y
  if (std::abs(c) > 0.0) x *= c / std::abs(c);
  CVec out(k + 1);
  out << x, cdouble(1.0, 0.0);
  return out;
}

struct IosIterate {
  CMat V_t, V_r;
  RVec p_in, p_elem;
};

// Coefficients of the surface subproblem that do not depend on eta or the
// penalty linearization. Everything is expressed in units of sigma_b^2.
struct IosData {
  int k = 0;
  bool passive = false;
  double sb = 1.0;
  CMat num_t;                  // P_a B^H W_r B / sb
  CMat den_t, den_r;           // noise and SI terms / sb
  double scale = 1.0;          // power unit of the element-budget variables
  double sigma_o = 0.0;
};

IosData ios_data(const Scenario& s, const LiftedMatrices& L, const PowerAlloc& p) {
  IosData d;
  d.k = L.k;
  d.passive = s.passive();
  d.sb = s.noise_bob;
  d.sigma_o = s.surface_noise();
  d.num_t = p.alice * L.ab_coef() / d.sb;
  d.den_t = d.sigma_o * diag_of(L.phi_tb) / d.sb;
  d.den_r = (d.sigma_o * diag_of(L.phi_rb) + s.si_level * p.jam * (L.f * L.f.adjoint())) / d.sb;
  return d;
}

double ios_num(const IosData& d, const IosIterate& x) { return tr(d.num_t, x.V_t); }

double ios_den(const IosData& d, const IosIterate& x) {
  return tr(d.den_t, x.V_t) + tr(d.den_r, x.V_r) + 1.0;
}

struct IosProgram {
  SdpProblem prob;
  int bt = 0, br = 0;
  std::vector<int> z;   // AGM blocks
  std::vector<int> pin; // incident-split scalars
};

IosProgram build_ios_program(const Scenario& s, const ChannelSet& ch, const LiftedMatrices& L,
                             const PowerAlloc& p, const IosData& d, const RVec& mu,
                             const CMat& pen_t, const CMat& pen_r, double weight, double eta) {
  const int k = L.k;
  const double so = d.sigma_o;
  IosProgram P;
  SdpProblem& prob = P.prob;
  P.bt = prob.add_matrix(k, "V_t");
  P.br = prob.add_matrix(k + 1, "V_r");

  LinearForm obj;
  obj.trace(P.bt, d.num_t - eta * d.den_t - weight * pen_t);
  obj.trace(P.br, -eta * d.den_r - weight * pen_r);
  obj.offset(-eta);
  prob.maximize(obj);

  const CMat gb = L.gb_coef();
  const CMat ab = L.ab_coef();
  const double mu_g = s.qos_threshold();

  // Grace's QoS.
  {
    LinearForm f;
    f.trace(P.br, (p.grace * gb - mu_g * (so * diag_of(L.phi_rb) +
                                          s.si_level * p.jam * (L.f * L.f.adjoint()))) /
                      d.sb);
    f.trace(P.bt, -mu_g * (p.alice * ab + so * diag_of(L.phi_tb)) / d.sb);
    prob.add_constraint(std::move(f), Sense::ge, mu_g, "qos");
  }
  // Covertness, in units of sigma_w^2.
  {
    const double km1 = kappa_from_epsilon(s.covertness_eps) - 1.0;
    const double sw = s.noise_willie;
    LinearForm f;
    f.trace(P.bt, (p.alice * (L.d * L.d.adjoint()) + so * diag_of(L.phi_tw)) / sw);
    f.trace(P.br, -km1 * (p.grace * (L.c * L.c.adjoint()) + p.jam * (L.e * L.e.adjoint()) +
                          so * diag_of(L.phi_rw)) /
                      sw);
    prob.add_constraint(std::move(f), Sense::le, km1, "covertness");
  }
  // Decoding order, projected and unprojected.
  {
    LinearForm f;
    f.trace(P.br, gb).trace(P.bt, -ab);
    prob.add_constraint(std::move(f), Sense::ge, 0.0, "sic_projected");
    LinearForm g;
    g.trace(P.br, L.A.adjoint() * L.A).trace(P.bt, -(L.B.adjoint() * L.B));
    prob.add_constraint(std::move(g), Sense::ge, 0.0, "sic_cascade");
  }
  // Lift normalization and amplitude caps.
  prob.add_constraint(LinearForm{}.entry(P.br, k, k, 1.0), Sense::eq, 1.0, "trailing_one");
  const double cap2 = s.amplitude_cap() * s.amplitude_cap();
  for (int i = 0; i < k; ++i) {
    if (d.passive) {
      prob.add_constraint(LinearForm{}.entry(P.bt, i, i, 1.0).entry(P.br, i, i, 1.0), Sense::le,
                          1.0, "split");
    } else {
      prob.add_constraint(LinearForm{}.entry(P.bt, i, i, 1.0), Sense::le, cap2, "cap_t");
      prob.add_constraint(LinearForm{}.entry(P.br, i, i, 1.0), Sense::le, cap2, "cap_r");
    }
  }
  if (d.passive) return P;

  // Surface output budget, in units of the budget.
  {
    const double po = s.budget_ios;
    LinearForm f;
    f.trace(P.bt, diag_of(p.alice * L.phi_ao + RVec::Constant(k, so)) / po);
    f.trace(P.br, diag_of(p.grace * L.phi_go + p.jam * L.phi_bo + so * L.pi) / po);
    prob.add_constraint(std::move(f), Sense::le, 1.0, "surface_budget");
  }

  // Element budgets. Power scalars are in units of d.scale; the bilinear
  // requirement (V_t,kk + V_r,kk)(p_in + sigma^2) <= p_k is replaced by the
  // AGM bound (mu x)^2 + (y / mu)^2 <= 2 p_k, written as a 3 x 3 PSD block
  // [[2 p_k, mu x, y / mu], [., 1, 0], [., 0, 1]].
  const double sc = d.scale;
  const double so_s = so / sc;
  const double total_in = incident_power(ch, FdBeam{L.w_t, L.w_r}, p).sum() / sc;
  LinearForm sum_in, sum_elem;
  for (int i = 0; i < k; ++i) {
    const int pi = prob.add_scalar("p_in");
    const int z = prob.add_matrix(3, "agm");
    P.pin.push_back(pi);
    P.z.push_back(z);
    prob.add_constraint(
        LinearForm{}.entry(z, 0, 1, 1.0).entry(P.bt, i, i, -mu(i)).entry(P.br, i, i, -mu(i)),
        Sense::eq, 0.0, "agm_x");
    prob.add_constraint(LinearForm{}.entry(z, 0, 2, 1.0).scalar(pi, -1.0 / mu(i)), Sense::eq,
                        so_s / mu(i), "agm_y");
    prob.add_constraint(LinearForm{}.entry(z, 1, 1, 1.0), Sense::eq, 1.0, "agm_11");
    prob.add_constraint(LinearForm{}.entry(z, 2, 2, 1.0), Sense::eq, 1.0, "agm_22");
    prob.add_constraint(LinearForm{}.entry(z, 1, 2, 1.0), Sense::eq, 0.0, "agm_12");
    prob.add_constraint(LinearForm{}.entry(z, 0, 0, 0.5), Sense::le, s.per_element_budget / sc,
                        "element_cap");
    sum_in.scalar(pi, 1.0);
    sum_elem.entry(z, 0, 0, 0.5);
  }
  prob.add_constraint(std::move(sum_in), Sense::le, total_in, "incident_split");
  prob.add_constraint(std::move(sum_elem), Sense::le, s.budget_ios / sc, "element_total");
  return P;
}

}  // namespace

IosSolution solve_ios_beamforming(const Scenario& s, const ChannelSet& ch, const SolutionState& st,
                                  const PenaltyOptions& opt) {
  const auto t0 = Clock::now();
  const int k = ch.num_elements();
  const LiftedMatrices L = build_lifted(ch, st.ios, st.fd);
  IosData d = ios_data(s, L, st.powers);
  const RVec incident = incident_power(ch, st.fd, st.powers);
  d.scale = std::max(incident.sum(), k * s.noise_ios);

  IosIterate cur;
  cur.V_t = st.V_t;
  cur.V_r = st.V_r;
  cur.p_in = st.p_in.size() == k ? st.p_in : incident;
  cur.p_elem = st.p_elem.size() == k ? st.p_elem : per_element_power(st.ios, cur.p_in, d.sigma_o);

  IosSolution out;
  auto& diag = out.diag;
  double rho = opt.rho0;
  bool done = false;
  for (int round = 0; round < opt.max_iterations && !done; ++round) {
    const auto pen_t = conic::rank_penalty(cur.V_t);
    const CVec comp = trailing_completion(cur.V_r);
    const auto pen_r = conic::rank_penalty(comp * comp.adjoint());
    // A zero lift has no preferred direction; leave it unpenalized.
    const CMat ct = pen_t.norm_prev > 0.0 ? pen_t.coefficient() : CMat::Zero(k, k);
    const CMat cr = pen_r.coefficient();
    const RVec mu = agm_update(cur.V_t, cur.V_r, cur.p_in, d.sigma_o);
    const double weight = round == 0 ? 0.0 : 1.0 / rho;

    std::optional<conic::SdpSolution> failed;
    auto inner = [&](double eta) -> std::optional<IosIterate> {
      IosProgram P = build_ios_program(s, ch, L, st.powers, d, mu, ct, cr, weight, eta);
      const auto sol = conic::solve(P.prob, opt.solver);
      ++diag.sdp_solves;
      if (!usable(sol, P.prob)) {
        failed = sol;
        return std::nullopt;
      }
      IosIterate x;
      x.V_t = sol.matrices[P.bt];
      x.V_r = sol.matrices[P.br];
      if (d.passive) {
        x.p_in = cur.p_in;
        x.p_elem = cur.p_elem;
      } else {
        x.p_in.resize(k);
        x.p_elem.resize(k);
        for (int i = 0; i < k; ++i) {
          x.p_in(i) = std::max(sol.scalars(P.pin[i]), 0.0) * d.scale;
          x.p_elem(i) = 0.5 * sol.matrices[P.z[i]](0, 0).real() * d.scale;
        }
      }
      return x;
    };
    const auto res = conic::dinkelbach<IosIterate>(
        [&](const IosIterate& x) { return ios_num(d, x); },
        [&](const IosIterate& x) { return ios_den(d, x); }, inner, cur, opt.dinkelbach_tolerance,
        opt.max_dinkelbach);
    diag.eta.insert(diag.eta.end(), res.eta_trace.begin(), res.eta_trace.end());
    diag.penalty_rounds = round + 1;
    if (res.status == conic::DinkelbachStatus::inner_failed) {
      diag.status = failure_of(*failed);
      diag.seconds = elapsed(t0);
      out.V_t = st.V_t;
      out.V_r = st.V_r;
      out.ios = st.ios;
      out.p_in = cur.p_in;
      out.p_elem = cur.p_elem;
      return out;
    }
    cur = res.solution;
    const double pen = weight * (conic::rank_gap(cur.V_t) + conic::rank_gap(cur.V_r));
    const double ratio = std::max(rank_ratio(cur.V_t), rank_ratio(cur.V_r));
    diag.penalty.push_back(pen);
    diag.rank_ratio.push_back(ratio);
    done = pen <= opt.zeta && ratio <= opt.rank_tolerance;
    if (round > 0) rho *= opt.decay;
  }

  out.V_t = cur.V_t;
  out.V_r = cur.V_r;
  out.p_in = cur.p_in;
  out.p_elem = cur.p_elem;
  const auto et = conic::extract_rank_one(cur.V_t, conic::RankOneScaling::eigen, opt.rank_tolerance);
  const bool r_ok = rank_ratio(cur.V_r) <= opt.rank_tolerance;
  CVec vt = et.vector;
  CVec vr = trailing_completion(cur.V_r).head(k);
  // Remove rank residue from the amplitudes.
  const double cap = s.amplitude_cap();
  for (int i = 0; i < k; ++i) {
    if (s.passive()) {
      const double e = std::norm(vt(i)) + std::norm(vr(i));
      if (e > 1.0) {
        vt(i) /= std::sqrt(e);
        vr(i) /= std::sqrt(e);
      }
    } else {
      if (std::abs(vt(i)) > cap) vt(i) *= cap / std::abs(vt(i));
      if (std::abs(vr(i)) > cap) vr(i) *= cap / std::abs(vr(i));
    }
  }
  // The decoding-order constraints are homogeneous in v_t and often active;
  // rank residue can leave them marginally violated. Shrinking v_t restores
  // them and only relaxes QoS, covertness and the budgets.
  {
    const Gains g = effective_gains(ch, IosBeam::from_coefficients(vt, vr), st.fd);
    double f = 1.0;
    if (g.cascade_a > 0.0) f = std::min(f, g.cascade_g / g.cascade_a);
    if (g.ab > 0.0) f = std::min(f, g.gb / g.ab);
    if (f < 1.0) vt *= std::sqrt(f * (1.0 - 1e-9));
  }
  out.ios = IosBeam::from_coefficients(vt, vr);
  diag.status = done && et.ok && r_ok ? SubproblemStatus::ok : SubproblemStatus::rank_failed;
  diag.seconds = elapsed(t0);
  return out;
}

// ------------------------------------------------------------ Bob's beams --

BeamSolution solve_receive_beamforming(const Scenario& s, const ChannelSet& ch,
                                       const SolutionState& st, const PenaltyOptions& opt) {
  const auto t0 = Clock::now();
  const int m = ch.num_antennas();
  const LiftedMatrices L = build_lifted(ch, st.ios, st.fd);
  const auto& p = st.powers;
  const double sb = s.noise_bob;
  const double so = s.surface_noise();
  const double mu_g = s.qos_threshold();

  // Signal and interference coefficients of W_r from the fixed surface lifts.
  const CMat Ga = p.alice * L.B * st.V_t * L.B.adjoint() / sb;
  const CMat Gg = L.A * st.V_r * L.A.adjoint();
  const CMat Gn = (so * (L.G_t + L.G_r) + s.si_level * p.jam * L.G_b) / sb;

  BeamSolution out;
  auto& diag = out.diag;
  if (!(Ga.trace().real() > 1e-12)) {
    // Alice is not heard through the surface: every beam gives zero SINR.
    out.W = st.W_r;
    out.w = st.fd.w_r;
    diag.status = SubproblemStatus::skipped;
    return out;
  }
  CMat cur = st.W_r;
  double rho = opt.rho0;
  bool done = false;
  for (int round = 0; round < opt.max_iterations && !done; ++round) {
    const auto pen = conic::rank_penalty(cur);
    const CMat pc = pen.coefficient();
    const double weight = round == 0 ? 0.0 : 1.0 / rho;
    auto num = [&](const CMat& w) { return tr(Ga, w); };
    auto den = [&](const CMat& w) { return tr(Gn, w) + 1.0 + weight * tr(pc, w); };

    std::optional<conic::SdpSolution> failed;
    auto inner = [&](double eta) -> std::optional<CMat> {
      SdpProblem prob;
      const int b = prob.add_matrix(m, "W_r");
      prob.maximize(LinearForm{}.trace(b, Ga - eta * (Gn + weight * pc)).offset(-eta));
      prob.add_constraint(LinearForm{}.trace(b, CMat::Identity(m, m)), Sense::eq, 1.0, "trace");
      prob.add_constraint(
          LinearForm{}.trace(b, (p.grace * Gg - mu_g * p.alice * L.B * st.V_t * L.B.adjoint()) / sb -
                                    mu_g * Gn),
          Sense::ge, mu_g, "qos");
      prob.add_constraint(LinearForm{}.trace(b, Gg - L.B * st.V_t * L.B.adjoint()), Sense::ge, 0.0,
                          "sic_projected");
      const auto sol = conic::solve(prob, opt.solver);
      ++diag.sdp_solves;
      if (!usable(sol, prob)) {
        failed = sol;
        return std::nullopt;
      }
      return sol.matrices[b];
    };
    const auto res = conic::dinkelbach<CMat>(num, den, inner, cur, opt.dinkelbach_tolerance,
                                             opt.max_dinkelbach);
    diag.eta.insert(diag.eta.end(), res.eta_trace.begin(), res.eta_trace.end());
    diag.penalty_rounds = round + 1;
    if (res.status == conic::DinkelbachStatus::inner_failed) {
      diag.status = failure_of(*failed);
      diag.seconds = elapsed(t0);
      out.W = st.W_r;
      out.w = st.fd.w_r;
      return out;
    }
    cur = res.solution;
    const double pv = weight * conic::rank_gap(cur);
    const double ratio = rank_ratio(cur);
    diag.penalty.push_back(pv);
    diag.rank_ratio.push_back(ratio);
    done = pv <= opt.zeta && ratio <= opt.rank_tolerance;
    if (round > 0) rho *= opt.decay;
  }
  out.W = cur;
  const auto ex = conic::extract_rank_one(cur, conic::RankOneScaling::unit_norm, opt.rank_tolerance);
  out.w = ex.vector;
  diag.status = done && ex.ok ? SubproblemStatus::ok : SubproblemStatus::rank_failed;
  diag.seconds = elapsed(t0);
  return out;
}

BeamSolution solve_transmit_beamforming(const Scenario& s, const ChannelSet& ch,
                                        const SolutionState& st, const PenaltyOptions& opt) {
  const auto t0 = Clock::now();
  BeamSolution out;
  auto& diag = out.diag;
  const auto& p = st.powers;
  if (p.jam <= 0.0) {
    out.W = st.W_t;
    out.w = st.fd.w_t;
    diag.status = SubproblemStatus::skipped;
    return out;
  }
  const int m = ch.num_antennas();
  const LiftedMatrices L = build_lifted(ch, st.ios, st.fd);
  const Gains g = effective_gains(ch, st.ios, st.fd);
  const double so = s.surface_noise();
  const double km1 = kappa_from_epsilon(s.covertness_eps) - 1.0;
  const double sw = s.noise_willie;

  CMat cur = st.W_t;
  double rho = opt.rho0;
  bool done = false;
  for (int round = 0; round < opt.max_iterations && !done; ++round) {
    const auto pen = conic::rank_penalty(cur);
    const double weight = round == 0 ? 0.0 : 1.0 / rho;
    SdpProblem prob;
    const int b = prob.add_matrix(m, "W_t");
    prob.minimize(LinearForm{}.trace(b, L.Gt_j + weight * pen.coefficient()));
    prob.add_constraint(LinearForm{}.trace(b, CMat::Identity(m, m)), Sense::eq, 1.0, "trace");
    // Covertness in units of sigma_w^2: jamming raises Willie's floor.
    const double fixed_lhs = (p.alice * g.aw + g.ow_t * so) / sw;
    const double fixed_rhs = km1 * (p.grace * g.gw + g.ow_r * so + sw) / sw;
    prob.add_constraint(LinearForm{}.trace(b, km1 * p.jam * L.Gt_w / sw), Sense::ge,
                        fixed_lhs - fixed_rhs, "covertness");
    if (!s.passive()) {
      const double fixed_out = p.alice * g.out_a + p.grace * g.out_g + so * (g.frob_t + g.frob_r);
      prob.add_constraint(LinearForm{}.trace(b, p.jam * L.Gt_r / s.budget_ios), Sense::le,
                          1.0 - fixed_out / s.budget_ios, "surface_budget");
    }
    const auto sol = conic::solve(prob, opt.solver);
    ++diag.sdp_solves;
    diag.penalty_rounds = round + 1;
    if (!usable(sol, prob)) {
      diag.status = failure_of(sol);
      diag.seconds = elapsed(t0);
      out.W = st.W_t;
      out.w = st.fd.w_t;
      return out;
    }
    cur = sol.matrices[b];
    const double pv = weight * conic::rank_gap(cur);
    const double ratio = rank_ratio(cur);
    diag.penalty.push_back(pv);
    diag.rank_ratio.push_back(ratio);
    done = pv <= opt.zeta && ratio <= opt.rank_tolerance;
    if (round > 0) rho *= opt.decay;
  }
  out.W = cur;
  const auto ex = conic::extract_rank_one(cur, conic::RankOneScaling::unit_norm, opt.rank_tolerance);
  out.w = ex.vector;
  diag.status = done && ex.ok ? SubproblemStatus::ok : SubproblemStatus::rank_failed;
  diag.seconds = elapsed(t0);
  return out;
}

}  // namespace covert
