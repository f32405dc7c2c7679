#pragma once

#include "covert/types.hpp"

namespace covert::conic {

struct LeadingPair {
  double value = 0.0;  // largest eigenvalue
  double second = 0.0; // second largest (0 for 1 x 1)
  CVec vector;         // unit-norm, phase fixed so the first nonzero entry is real > 0
};

/// Largest eigenpair of a Hermitian matrix. When the top eigenvalue is
/// (numerically) repeated, the vector is the normalized projection of the
/// first standard basis vector that has a nonzero component in that
/// eigenspace, which makes the choice independent of the eigensolver basis.
LeadingPair leading_eigenpair(const CMat& v);

/// tr(V) - ||V||_2, zero exactly at rank one.
double rank_gap(const CMat& v);

/// Linearization of the rank gap at V_prev: tr(V) - ||V_prev||_2
/// - u^H (V - V_prev) u, which is affine in V, equal to the gap at V_prev and
/// an upper bound on it everywhere. Because u^H V_prev u = ||V_prev||_2 it
/// reduces to tr((I - u u^H) V).
struct RankPenalty {
  CVec u;
  double norm_prev = 0.0;

  /// Coefficient matrix I - u u^H so that the surrogate is Re tr(P V).
  CMat coefficient() const;
  double surrogate(const CMat& v) const;
};

RankPenalty rank_penalty(const CMat& v_prev);

enum class RankOneScaling {
  unit_norm,      // beamformers: ||v|| = 1
  trailing_one,   // lifted surface vector [v; 1]
  eigen,          // sqrt(lambda_1) u
};

struct RankOneResult {
  CVec vector;
  double ratio = 0.0;  // lambda_2 / lambda_1
  bool ok = false;     // ratio within tolerance and scaling well defined
};

/// Rank-one recovery v with V ~ v v^H.
RankOneResult extract_rank_one(const CMat& v, RankOneScaling scaling, double tolerance = 1e-3);

}  // namespace covert::conic
