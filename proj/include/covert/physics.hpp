#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covert/scenario.hpp"
#include "covert/types.hpp"

namespace covert {

/// Refraction (t) and reflection (r) coefficients of the surface.
struct IosBeam {
  RVec amp_t, amp_r;      // alpha_k >= 0
  RVec phase_t, phase_r;  // theta_k in [0, 2 pi)

  static IosBeam zeros(int k);

  /// Builds amplitudes/phases from complex coefficients alpha e^{j theta}.
  static IosBeam from_coefficients(const CVec& v_t, const CVec& v_r);

  int size() const { return static_cast<int>(amp_t.size()); }

  /// Diagonal entries of Theta_t / Theta_r.
  CVec coeff_t() const;
  CVec coeff_r() const;
};

/// Bob's unit-norm transmit (jamming) and receive beamformers.
struct FdBeam {
  CVec w_t;
  CVec w_r;
};

/// Transmit powers in watts.
struct PowerAlloc {
  double alice = 0.0;
  double grace = 0.0;
  double jam = 0.0;
};

/// Received power at Willie under H0 (lambda0) and H1 (lambda1).
struct DetectionPair {
  double lambda0 = 1.0;
  double lambda1 = 1.0;
};

/// Power-independent gains for a fixed surface and beam configuration.
struct Gains {
  double ab = 0.0;        // |w_r^H H_ob Theta_t h_ao|^2
  double gb = 0.0;        // |w_r^H H_ob Theta_r h_go|^2
  double gw = 0.0;        // |h_ow Theta_r h_go|^2
  double aw = 0.0;        // |h_ow Theta_t h_ao|^2
  double bw = 0.0;        // |(h_ow Theta_r H_bo + h_bw) w_t|^2
  double si = 0.0;        // |w_r^H (H_bb + H_ob Theta_r H_bo) w_t|^2
  double rx_t = 0.0;      // ||w_r^H H_ob Theta_t||^2
  double rx_r = 0.0;      // ||w_r^H H_ob Theta_r||^2
  double ow_t = 0.0;      // ||h_ow Theta_t||^2
  double ow_r = 0.0;      // ||h_ow Theta_r||^2
  double out_a = 0.0;     // ||Theta_t h_ao||^2
  double out_g = 0.0;     // ||Theta_r h_go||^2
  double out_j = 0.0;     // ||Theta_r H_bo w_t||^2
  double frob_t = 0.0;    // ||Theta_t||_F^2
  double frob_r = 0.0;    // ||Theta_r||_F^2
  double cascade_a = 0.0; // ||H_ob Theta_t h_ao||^2
  double cascade_g = 0.0; // ||H_ob Theta_r h_go||^2
  double in_a = 0.0;      // ||h_ao||^2
  double in_g = 0.0;      // ||h_go||^2
  double in_j = 0.0;      // ||H_bo w_t||^2

  /// Interference plus amplified noise at Bob (excludes sigma_b^2).
  double omega(double p_jam, double sigma_ios, double si_level) const {
    return (rx_t + rx_r) * sigma_ios + si_level * p_jam * si;
  }
};

Gains effective_gains(const ChannelSet& ch, const IosBeam& ios, const FdBeam& fd);

struct Rates {
  double sinr_a = 0.0;
  double sinr_g = 0.0;
  double rate_a = 0.0;  // bps/Hz
  double rate_g = 0.0;
};

/// SINRs and rates with SIC decoding Grace first and Alice last.
Rates sinr_and_rates(const Gains& g, const PowerAlloc& p, double sigma_bob, double sigma_ios,
                     double si_level);

/// Total power leaving the surface (left side of the surface budget).
double ios_output_power(const ChannelSet& ch, const IosBeam& ios, const FdBeam& fd,
                        const PowerAlloc& p, double sigma_ios);

/// ((alpha_t)^2 + (alpha_r)^2)(p_in + sigma_o^2) per element.
RVec per_element_power(const IosBeam& ios, const RVec& p_in, double sigma_ios);

/// Mean incident power |[y_o]_k|^2 per element.
RVec incident_power(const ChannelSet& ch, const FdBeam& fd, const PowerAlloc& p);

DetectionPair detection_pair(const Gains& g, const PowerAlloc& p, double sigma_ios,
                             double sigma_willie);

/// Radiometer threshold lambda1 lambda0 / (lambda1 - lambda0) ln(lambda1 / lambda0).
/// Throws std::domain_error unless lambda1 > lambda0 > 0.
double optimal_threshold(const DetectionPair& pair);

/// Minimum detection error probability; 1 when lambda1 == lambda0.
double mdep(const DetectionPair& pair);

/// D(p0 || p1) in nats.
double kl_divergence(const DetectionPair& pair);

/// Root kappa >= 1 of ln(x) + 1/x - 1 = 2 eps^2.
double kappa_from_epsilon(double eps, double tol = 1e-13);

struct Covertness {
  bool satisfied = false;
  double slack = 0.0;  // RHS - LHS
};

Covertness covertness_satisfied(const Gains& g, const PowerAlloc& p, double kappa,
                                double sigma_ios, double sigma_willie, double tolerance = 1e-6);

struct MdepEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Empirical false-alarm + miss rate at the optimal threshold. Samples are
/// drawn in fixed-size chunks keyed by (seed, chunk), so the OpenMP kernel and
/// the serial reference return identical counts.
MdepEstimate mdep_monte_carlo(const DetectionPair& pair, std::uint64_t samples, std::uint64_t seed);
MdepEstimate mdep_monte_carlo_serial(const DetectionPair& pair, std::uint64_t samples,
                                     std::uint64_t seed);

}  // namespace covert
