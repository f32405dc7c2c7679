#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "covert/types.hpp"

namespace covert {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Large-scale and small-scale fading parameters.
///
/// Links touching the surface (h_ao, h_go, h_ow, H_ob, H_bo) are Rician with
/// a geometric line-of-sight component; h_bw is Rayleigh; H_bb is i.i.d.
/// CN(0, 1) without path loss.
struct FadingModel {
  double rician_k_db = 3.0;
  double ref_loss_db = -30.0;  // path loss at 1 m
  double exponent_ios = 2.2;
  double exponent_bw = 3.0;
};

/// Active surfaces amplify (and add thermal noise); passive ones only split
/// the incident energy, (alpha_t)^2 + (alpha_r)^2 <= 1 per element.
enum class SurfaceMode { active, passive };

/// Static system parameters. Powers and noise variances are in watts.
struct Scenario {
  int num_elements = 16;  // K
  int num_antennas = 4;   // M

  double noise_ios = 1e-12;
  double noise_bob = 1e-12;
  double noise_willie = 1e-12;

  double budget_alice = 0.1;
  double budget_grace = 0.1;
  double budget_jam = 0.1;
  double budget_ios = 0.1;
  double per_element_budget = 0.1;  // upper bound on each p_k

  double amp_max = 3.1622776601683795;  // amplitude, 10 dB
  double si_level = 1e-14;              // phi, -140 dB
  double covertness_eps = 0.1;
  double target_rate = 1.0;  // bps/Hz

  Point alice{70.0, 15.0};
  Point grace{70.0, -5.0};
  Point willie{20.0, -5.0};
  Point bob{0.0, 0.0};
  Point ios{35.0, 5.0};

  FadingModel fading;
  SurfaceMode surface = SurfaceMode::active;

  // zeta[0..2]: penalty stopping thresholds, zeta[3]: outer AO threshold.
  std::array<double, 4> zeta{1e-4, 1e-4, 1e-4, 1e-2};
  std::array<double, 3> rho0{1.0, 1.0, 1.0};
  std::array<double, 3> rho_decay{0.5, 0.5, 0.5};

  std::uint64_t rng_seed = 1;

  /// Throws std::invalid_argument when an invariant does not hold.
  void validate() const;

  bool passive() const { return surface == SurfaceMode::passive; }

  /// Noise variance added by the surface; zero for a passive surface.
  double surface_noise() const { return passive() ? 0.0 : noise_ios; }

  /// Per-element amplitude cap; a passive element cannot exceed unit gain.
  double amplitude_cap() const { return passive() ? 1.0 : amp_max; }

  /// mu_g = 2^R_g - 1.
  double qos_threshold() const { return std::exp2(target_rate) - 1.0; }
};

/// Error in a scenario file, carrying "path:line: message" context.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses flat `key = value` text. Powers are given in dBm (`-inf` for 0 W),
/// `amp_max_db` as 20 log10(alpha_max) and `si_level_db` in dB.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario(const std::string& path);

/// Serializes every field in the same format `parse_scenario` accepts.
std::string to_config_text(const Scenario& s);

/// One realization of all channel objects.
struct ChannelSet {
  CMat H_ob;  // M x K, surface -> Bob receive array
  CMat H_bo;  // K x M, Bob transmit array -> surface
  CVec h_ao;  // K
  CVec h_go;  // K
  CRow h_ow;  // 1 x K
  CRow h_bw;  // 1 x M
  CMat H_bb;  // M x M self-interference

  int num_elements() const { return static_cast<int>(h_ao.size()); }
  int num_antennas() const { return static_cast<int>(H_bb.rows()); }

  /// Throws std::invalid_argument on inconsistent shapes or non-finite entries.
  void validate() const;
};

/// gain = ref_loss * distance^(-exponent).
double path_loss(double distance_m, double ref_loss, double exponent);

using ChannelRng = std::mt19937_64;

/// Independent stream keyed by (seed, trial).
ChannelRng make_trial_rng(std::uint64_t seed, std::uint64_t trial);

ChannelSet generate_channels(const Scenario& scenario, ChannelRng& rng);

/// Realization for trial index `trial` under scenario.rng_seed.
ChannelSet generate_channels(const Scenario& scenario, std::uint64_t trial);

}  // namespace covert
