#include "covert/conic/rank_one.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace covert::conic {

namespace {

void fix_phase(CVec& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-12) {
      u *= std::conj(u(i)) / std::abs(u(i));
      return;
    }
  }
}

}  // namespace

LeadingPair leading_eigenpair(const CMat& v) {
  const Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (v + v.adjoint()));
  const auto n = v.rows();
  const RVec& lam = es.eigenvalues();
  LeadingPair out;
  out.value = lam(n - 1);
  out.second = n > 1 ? lam(n - 2) : 0.0;
  const double tie = 1e-9 * std::max(std::abs(out.value), 1e-300);
  Eigen::Index first = n - 1;
  while (first > 0 && out.value - lam(first - 1) <= tie) --first;
  if (first == n - 1) {
    out.vector = es.eigenvectors().col(n - 1);
  } else {
    const CMat basis = es.eigenvectors().rightCols(n - first);
    for (Eigen::Index i = 0; i < n; ++i) {
      const CVec proj = basis * basis.row(i).adjoint();
      if (proj.norm() > 1e-6) {
        out.vector = proj.normalized();
        break;
      }
    }
  }
  fix_phase(out.vector);
  return out;
}

double rank_gap(const CMat& v) {
  const Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (v + v.adjoint()), Eigen::EigenvaluesOnly);
  return v.trace().real() - es.eigenvalues().maxCoeff();
}

CMat RankPenalty::coefficient() const {
  return CMat::Identity(u.size(), u.size()) - u * u.adjoint();
}

double RankPenalty::surrogate(const CMat& v) const {
  return v.trace().real() - (u.adjoint() * v * u)(0).real();
}

RankPenalty rank_penalty(const CMat& v_prev) {
  const LeadingPair lp = leading_eigenpair(v_prev);
  return {lp.vector, lp.value};
}

RankOneResult extract_rank_one(const CMat& v, RankOneScaling scaling, double tolerance) {
  const LeadingPair lp = leading_eigenpair(v);
  RankOneResult out;
  if (!(lp.value > 0.0)) {
    out.vector = CVec::Zero(v.rows());
    out.ratio = kInf;
    return out;
  }
  out.ratio = std::max(lp.second, 0.0) / lp.value;
  out.ok = out.ratio <= tolerance;
  switch (scaling) {
    case RankOneScaling::unit_norm:
      out.vector = lp.vector;
      break;
    case RankOneScaling::eigen:
      out.vector = std::sqrt(lp.value) * lp.vector;
      break;
    case RankOneScaling::trailing_one: {
      const cdouble last = lp.vector(lp.vector.size() - 1);
      if (std::abs(last) < 1e-12) {
        out.vector = lp.vector;
        out.ok = false;
      } else {
        out.vector = lp.vector / last;
      }
      break;
    }
  }
  return out;
}

}  // namespace covert::conic
