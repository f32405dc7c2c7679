#include "covert/physics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <omp.h>

namespace covert {

IosBeam IosBeam::zeros(int k) {
  IosBeam b;
  b.amp_t = RVec::Zero(k);
  b.amp_r = RVec::Zero(k);
  b.phase_t = RVec::Zero(k);
  b.phase_r = RVec::Zero(k);
  return b;
}

namespace {

double wrap_phase(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t >= 2.0 * kPi) t = 0.0;
  return t;
}

CVec compose(const RVec& amp, const RVec& phase) {
  CVec v(amp.size());
  for (Eigen::Index i = 0; i < amp.size(); ++i) v(i) = std::polar(amp(i), phase(i));
  return v;
}

}  // namespace

IosBeam IosBeam::from_coefficients(const CVec& v_t, const CVec& v_r) {
  if (v_t.size() != v_r.size()) throw std::invalid_argument("IosBeam: size mismatch");
  IosBeam b = zeros(static_cast<int>(v_t.size()));
  for (Eigen::Index i = 0; i < v_t.size(); ++i) {
    b.amp_t(i) = std::abs(v_t(i));
    b.amp_r(i) = std::abs(v_r(i));
    b.phase_t(i) = wrap_phase(std::arg(v_t(i)));
    b.phase_r(i) = wrap_phase(std::arg(v_r(i)));
  }
  return b;
}

CVec IosBeam::coeff_t() const { return compose(amp_t, phase_t); }
CVec IosBeam::coeff_r() const { return compose(amp_r, phase_r); }

Gains effective_gains(const ChannelSet& ch, const IosBeam& ios, const FdBeam& fd) {
  const int k = ch.num_elements();
  const int m = ch.num_antennas();
  if (ios.size() != k || fd.w_t.size() != m || fd.w_r.size() != m) {
    throw std::invalid_argument("effective_gains: dimension mismatch");
  }
  const CVec vt = ios.coeff_t();
  const CVec vr = ios.coeff_r();
  const CRow rx = fd.w_r.adjoint() * ch.H_ob;  // w_r^H H_ob
  const CVec jam_in = ch.H_bo * fd.w_t;         // H_bo w_t

  Gains g;
  g.ab = std::norm((rx.array() * vt.transpose().array() * ch.h_ao.transpose().array()).sum());
  g.gb = std::norm((rx.array() * vr.transpose().array() * ch.h_go.transpose().array()).sum());
  g.gw = std::norm((ch.h_ow.array() * vr.transpose().array() * ch.h_go.transpose().array()).sum());
  g.aw = std::norm((ch.h_ow.array() * vt.transpose().array() * ch.h_ao.transpose().array()).sum());
  const cdouble bw = (ch.h_ow.array() * vr.transpose().array() * jam_in.transpose().array()).sum() +
                     (ch.h_bw * fd.w_t)(0);
  g.bw = std::norm(bw);
  const cdouble si = (fd.w_r.adjoint() * ch.H_bb * fd.w_t)(0) +
                     (rx.array() * vr.transpose().array() * jam_in.transpose().array()).sum();
  g.si = std::norm(si);
  g.rx_t = (rx.array().abs2() * vt.transpose().array().abs2()).sum();
  g.rx_r = (rx.array().abs2() * vr.transpose().array().abs2()).sum();
  g.ow_t = (ch.h_ow.array().abs2() * vt.transpose().array().abs2()).sum();
  g.ow_r = (ch.h_ow.array().abs2() * vr.transpose().array().abs2()).sum();
  g.out_a = (vt.array().abs2() * ch.h_ao.array().abs2()).sum();
  g.out_g = (vr.array().abs2() * ch.h_go.array().abs2()).sum();
  g.out_j = (vr.array().abs2() * jam_in.array().abs2()).sum();
  g.frob_t = vt.squaredNorm();
  g.frob_r = vr.squaredNorm();
  g.cascade_a = (ch.H_ob * (vt.array() * ch.h_ao.array()).matrix()).squaredNorm();
  g.cascade_g = (ch.H_ob * (vr.array() * ch.h_go.array()).matrix()).squaredNorm();
  g.in_a = ch.h_ao.squaredNorm();
  g.in_g = ch.h_go.squaredNorm();
  g.in_j = jam_in.squaredNorm();
  return g;
}

Rates sinr_and_rates(const Gains& g, const PowerAlloc& p, double sigma_bob, double sigma_ios,
                     double si_level) {
  const double interference = g.omega(p.jam, sigma_ios, si_level) + sigma_bob;
  Rates r;
  r.sinr_a = p.alice * g.ab / interference;
  r.sinr_g = p.grace * g.gb / (p.alice * g.ab + interference);
  r.rate_a = std::log2(1.0 + r.sinr_a);
  r.rate_g = std::log2(1.0 + r.sinr_g);
  return r;
}

double ios_output_power(const ChannelSet& ch, const IosBeam& ios, const FdBeam& fd,
                        const PowerAlloc& p, double sigma_ios) {
  const CVec vt = ios.coeff_t();
  const CVec vr = ios.coeff_r();
  const CVec jam_in = ch.H_bo * fd.w_t;
  return p.alice * (vt.array() * ch.h_ao.array()).matrix().squaredNorm() +
         p.grace * (vr.array() * ch.h_go.array()).matrix().squaredNorm() +
         p.jam * (vr.array() * jam_in.array()).matrix().squaredNorm() +
         (vt.squaredNorm() + vr.squaredNorm()) * sigma_ios;
}

RVec per_element_power(const IosBeam& ios, const RVec& p_in, double sigma_ios) {
  if (p_in.size() != ios.size()) throw std::invalid_argument("per_element_power: size mismatch");
  return ((ios.amp_t.array().square() + ios.amp_r.array().square()) * (p_in.array() + sigma_ios))
      .matrix();
}

RVec incident_power(const ChannelSet& ch, const FdBeam& fd, const PowerAlloc& p) {
  const CVec jam_in = ch.H_bo * fd.w_t;
  return (p.alice * ch.h_ao.array().abs2() + p.grace * ch.h_go.array().abs2() +
          p.jam * jam_in.array().abs2())
      .matrix();
}

DetectionPair detection_pair(const Gains& g, const PowerAlloc& p, double sigma_ios,
                             double sigma_willie) {
  DetectionPair d;
  d.lambda0 = p.grace * g.gw + p.jam * g.bw + g.ow_r * sigma_ios + sigma_willie;
  d.lambda1 = d.lambda0 + (p.alice * g.aw + g.ow_t * sigma_ios);
  return d;
}

double optimal_threshold(const DetectionPair& pair) {
  if (!(pair.lambda0 > 0.0) || !(pair.lambda1 > pair.lambda0)) {
    throw std::domain_error("optimal_threshold: requires lambda1 > lambda0 > 0");
  }
  const double delta = (pair.lambda1 - pair.lambda0) / pair.lambda0;
  return pair.lambda1 * std::log1p(delta) / delta;
}

double mdep(const DetectionPair& pair) {
  if (!(pair.lambda0 > 0.0) || pair.lambda1 < pair.lambda0) {
    throw std::domain_error("mdep: requires lambda1 >= lambda0 > 0");
  }
  const double delta = (pair.lambda1 - pair.lambda0) / pair.lambda0;
  if (delta == 0.0) return 1.0;
  // 1 + r^{-(1+d)/d} - r^{-1/d} with r = 1 + d.
  const double base = std::exp(-std::log1p(delta) / delta);
  return 1.0 - base * delta / (1.0 + delta);
}

double kl_divergence(const DetectionPair& pair) {
  if (!(pair.lambda0 > 0.0) || !(pair.lambda1 > 0.0)) {
    throw std::domain_error("kl_divergence: requires positive variances");
  }
  const double delta = (pair.lambda1 - pair.lambda0) / pair.lambda0;
  return std::log1p(delta) - delta / (1.0 + delta);
}

double kappa_from_epsilon(double eps, double tol) {
  if (!(eps >= 0.0)) throw std::invalid_argument("kappa_from_epsilon: eps must be >= 0");
  const double target = 2.0 * eps * eps;
  if (target == 0.0) return 1.0;
  // f(1 + x) = log1p(x) - x / (1 + x), increasing in x >= 0.
  auto f = [target](double x) { return std::log1p(x) - x / (1.0 + x) - target; };
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  boost::uintmax_t max_iter = 200;
  auto done = [tol](double a, double b) { return std::abs(b - a) <= tol * std::max(1.0, std::abs(a)); };
  const auto [lo_x, hi_x] = boost::math::tools::toms748_solve(f, 0.0, hi, done, max_iter);
  return 1.0 + 0.5 * (lo_x + hi_x);
}

Covertness covertness_satisfied(const Gains& g, const PowerAlloc& p, double kappa,
                                double sigma_ios, double sigma_willie, double tolerance) {
  if (kappa < 1.0) throw std::invalid_argument("covertness_satisfied: kappa must be >= 1");
  const double lhs = p.alice * g.aw + g.ow_t * sigma_ios;
  const double base = p.grace * g.gw + p.jam * g.bw + g.ow_r * sigma_ios + sigma_willie;
  const double rhs = (kappa - 1.0) * base;
  Covertness c;
  c.slack = rhs - lhs;
  c.satisfied = c.slack >= -tolerance * std::max(lhs + rhs, base);
  return c;
}

namespace {

constexpr std::uint64_t kChunk = 1u << 16;

struct ChunkCount {
  std::uint64_t false_alarm = 0;
  std::uint64_t miss = 0;
};

// Exponential |y|^2 under each hypothesis for one chunk.
ChunkCount count_chunk(const DetectionPair& pair, double threshold, std::uint64_t seed,
                       std::uint64_t chunk, std::uint64_t n) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                    0x6d646570u};
  std::mt19937_64 rng(seq);
  std::exponential_distribution<double> unit(1.0);
  ChunkCount c;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (pair.lambda0 * unit(rng) > threshold) ++c.false_alarm;
    if (pair.lambda1 * unit(rng) < threshold) ++c.miss;
  }
  return c;
}

double threshold_for(const DetectionPair& pair) {
  return pair.lambda1 > pair.lambda0 ? optimal_threshold(pair) : pair.lambda0;
}

MdepEstimate finish(std::uint64_t fa, std::uint64_t md, std::uint64_t samples) {
  const double n = static_cast<double>(samples);
  const double p_fa = static_cast<double>(fa) / n;
  const double p_md = static_cast<double>(md) / n;
  MdepEstimate e;
  e.estimate = p_fa + p_md;
  e.std_error = std::sqrt((p_fa * (1.0 - p_fa) + p_md * (1.0 - p_md)) / n);
  e.samples = samples;
  return e;
}

}  // namespace

MdepEstimate mdep_monte_carlo(const DetectionPair& pair, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("mdep_monte_carlo: samples must be > 0");
  const double threshold = threshold_for(pair);
  const auto chunks = static_cast<std::int64_t>((samples + kChunk - 1) / kChunk);
  std::uint64_t fa = 0;
  std::uint64_t md = 0;
#pragma omp parallel for reduction(+ : fa, md) schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const auto start = static_cast<std::uint64_t>(c) * kChunk;
    const std::uint64_t n = std::min<std::uint64_t>(kChunk, samples - start);
    const ChunkCount cc = count_chunk(pair, threshold, seed, static_cast<std::uint64_t>(c), n);
    fa += cc.false_alarm;
    md += cc.miss;
  }
  return finish(fa, md, samples);
}

MdepEstimate mdep_monte_carlo_serial(const DetectionPair& pair, std::uint64_t samples,
                                     std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("mdep_monte_carlo: samples must be > 0");
  const double threshold = threshold_for(pair);
  std::uint64_t fa = 0;
  std::uint64_t md = 0;
  for (std::uint64_t start = 0, c = 0; start < samples; start += kChunk, ++c) {
    const ChunkCount cc =
        count_chunk(pair, threshold, seed, c, std::min<std::uint64_t>(kChunk, samples - start));
    fa += cc.false_alarm;
    md += cc.miss;
  }
  return finish(fa, md, samples);
}

}  // namespace covert
