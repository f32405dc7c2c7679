#pragma once

#include <string>
#include <vector>

#include "covert/conic/sdp.hpp"
#include "covert/state.hpp"

namespace covert {

/// Coefficient matrices of the lifted (semidefinite) reformulation. With
/// V_t = v_t v_t^H, V_r = [v_r; 1][v_r; 1]^H, W_r = w_r w_r^H, W_t = w_t w_t^H
/// every gain of `Gains` is a trace of one of these against a lifted variable.
///
/// Vectors c, d, e, f are stored so that the outer product x x^H is the
/// coefficient, i.e. |x^H v|^2 = tr(x x^H V): they are the conjugates of the
/// row vectors that act on v.
struct LiftedMatrices {
  int k = 0;
  int m = 0;

  CMat A;  // M x (K+1): [H_ob diag(h_go), 0], Grace's cascade acting on [v_r; 1]
  CMat B;  // M x K: H_ob diag(h_ao), Alice's cascade acting on v_t
  CVec c;  // K+1: Grace -> surface -> Willie, zero in the trailing slot
  CVec d;  // K: Alice -> surface -> Willie
  CVec e;  // K+1: jamming at Willie via the surface, direct path in the trailing slot
  CVec f;  // K+1: self-interference at w_r via the surface, direct path in the trailing slot

  // Diagonal weights (stored as vectors). Reflection-side weights have K+1
  // entries with a zero trailing slot.
  RVec phi_rw, phi_tw;  // |h_ow,k|^2
  RVec phi_go, phi_ao;  // |h_go,k|^2, |h_ao,k|^2
  RVec phi_rb, phi_tb;  // |[w_r^H H_ob]_k|^2
  RVec phi_bo;          // |[H_bo w_t]_k|^2
  RVec pi;              // selector of the first K entries of the reflection lift

  // Receive-side (M x M) coefficients for W_r.
  CMat G_t;  // (H_ob Theta_t)(H_ob Theta_t)^H
  CMat G_r;  // (H_ob Theta_r)(H_ob Theta_r)^H
  CMat G_b;  // s s^H with s = (H_bb + H_ob Theta_r H_bo) w_t
  CMat G_a;  // B v_t (B v_t)^H, Alice's cascade at the array
  CMat G_g;  // A v (A v)^H, Grace's cascade at the array
  // Transmit-side (M x M) coefficients for W_t.
  CMat Gt_r;  // (Theta_r H_bo)^H (Theta_r H_bo)
  CMat Gt_w;  // g^H g with g = h_ow Theta_r H_bo + h_bw
  CMat Gt_j;  // q^H q with q = w_r^H (H_bb + H_ob Theta_r H_bo)

  /// Coefficient of V_t giving |w_r^H B v_t|^2 for the context w_r.
  CMat ab_coef() const;
  /// Coefficient of V_r giving |w_r^H A [v_r; 1]|^2.
  CMat gb_coef() const;

  CVec w_r;  // context beams used to build the matrices above
  CVec w_t;
};

/// Lifted matrices for the given channel realization and beam context. Throws
/// std::invalid_argument on inconsistent dimensions.
LiftedMatrices build_lifted(const ChannelSet& channels, const IosBeam& ios, const FdBeam& fd);

/// Gains recomputed as traces of the lifted coefficients. `surface` fills
/// every field from (V_t, V_r); `receive` fills ab, gb, rx_t, rx_r, si from
/// W_r; `transmit` fills out_j, bw, si from W_t. Other fields stay zero.
struct TraceGains {
  Gains surface;
  Gains receive;
  Gains transmit;
};

TraceGains trace_gains(const LiftedMatrices& lifted, const CMat& V_t, const CMat& V_r,
                       const CMat& W_r, const CMat& W_t);

/// Per-element AGM weights mu_k = sqrt((p_in_k + sigma^2) / (V_t,kk + V_r,kk))
/// making the convex upper bound of the bilinear element budget tight at the
/// given point; mu_k = 1 when the diagonal sum is below 1e-12.
RVec agm_update(const CMat& V_t, const CMat& V_r, const RVec& p_in, double sigma_ios);

/// Rank-penalty and Dinkelbach controls for one subproblem call. Round 0
/// solves the plain relaxation; when that is not rank one, the penalized
/// rounds are linearized at it with weight 1/rho, rho starting at rho0 on
/// every call.
struct PenaltyOptions {
  double rho0 = 1.0;
  double decay = 0.5;
  double zeta = 1e-4;
  int max_iterations = 30;
  double rank_tolerance = 1e-3;
  double dinkelbach_tolerance = 1e-7;
  int max_dinkelbach = 30;
  conic::SolverOptions solver;
};

enum class SubproblemStatus {
  ok,
  skipped,       // nothing to optimize (no jamming power, or Alice unheard)
  infeasible,    // an SDP was infeasible; previous iterate kept
  solver_failed, // inaccurate SDP solution; previous iterate kept
  rank_failed,   // penalty loop ended without a rank-one solution
};

const char* to_string(SubproblemStatus status);

struct SubproblemDiagnostics {
  SubproblemStatus status = SubproblemStatus::ok;
  std::vector<double> eta;         // Dinkelbach parameters, all penalty rounds
  std::vector<double> penalty;     // (1/rho) times the rank surrogate per round
  std::vector<double> rank_ratio;  // lambda_2 / lambda_1 per round (worst block)
  int penalty_rounds = 0;
  int sdp_solves = 0;
  double seconds = 0.0;
};

struct IosSolution {
  CMat V_t, V_r;
  IosBeam ios;
  RVec p_in;    // incident-power split
  RVec p_elem;  // per-element budgets
  SubproblemDiagnostics diag;
};

/// Surface beamforming for fixed powers and Bob beams, warm started from
/// `state` (its lifts and budget split).
IosSolution solve_ios_beamforming(const Scenario& scenario, const ChannelSet& channels,
                                  const SolutionState& state, const PenaltyOptions& options = {});

struct BeamSolution {
  CMat W;
  CVec w;
  SubproblemDiagnostics diag;
};

/// Receive beamformer for fixed powers and surface, warm started from state.W_r.
/// Returns `skipped` when Alice's signal does not reach the array (no refraction).
BeamSolution solve_receive_beamforming(const Scenario& scenario, const ChannelSet& channels,
                                       const SolutionState& state,
                                       const PenaltyOptions& options = {});

/// Jamming beamformer minimizing self-interference leakage subject to
/// covertness and the surface budget. Returns `skipped` when P_j = 0.
BeamSolution solve_transmit_beamforming(const Scenario& scenario, const ChannelSet& channels,
                                        const SolutionState& state,
                                        const PenaltyOptions& options = {});

}  // namespace covert
