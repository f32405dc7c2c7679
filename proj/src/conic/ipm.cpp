#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "covert/conic/sdp.hpp"

namespace covert::conic {

namespace {

// Hermitian coefficient matrix on one block, stored dense or as a full
// (both triangles) triplet list. Inner product <A, X> = Re tr(A X).
struct Part {
  int block = 0;
  bool dense = false;
  CMat mat;
  std::vector<std::tuple<int, int, cdouble>> trips;  // A(p, q) = v
};

struct Row {
  std::vector<Part> parts;
  std::vector<std::pair<int, double>> lp;
  double rhs = 0.0;
};

struct StandardForm {
  std::vector<int> dims;
  int n_lp = 0;
  std::vector<Row> rows;
  Row cost;  // minimize <C, X>
  double cost_scale = 1.0;
};

double inner(const Part& a, const CMat& x) {
  if (a.dense) return (a.mat.transpose().array() * x.array()).sum().real();
  double v = 0.0;
  for (const auto& [p, q, c] : a.trips) v += (c * x(q, p)).real();
  return v;
}

void accumulate(const Part& a, double scale, CMat& out) {
  if (a.dense) {
    out += scale * a.mat;
  } else {
    for (const auto& [p, q, c] : a.trips) out(p, q) += scale * c;
  }
}

double frob2(const Part& a) {
  if (a.dense) return a.mat.squaredNorm();
  double s = 0.0;
  for (const auto& t : a.trips) s += std::norm(std::get<2>(t));
  return s;
}

// Turns a user form into per-block parts; returns the constant.
Row build_row(const LinearForm& f, const std::vector<int>& dims) {
  std::map<int, CMat> dense;
  std::map<int, std::map<std::pair<int, int>, cdouble>> sparse;
  for (const auto& d : f.dense) {
    auto [it, fresh] = dense.try_emplace(d.block, CMat::Zero(dims[d.block], dims[d.block]));
    it->second += 0.5 * (d.coef + d.coef.adjoint());
  }
  for (const auto& e : f.entries) {
    auto& m = sparse[e.block];
    if (e.row == e.col) {
      m[{e.row, e.row}] += e.coef.real();
    } else {
      // Re(c X_ij) = <A, X> with A(j, i) = c / 2 and A(i, j) = conj(c) / 2.
      m[{e.col, e.row}] += 0.5 * e.coef;
      m[{e.row, e.col}] += 0.5 * std::conj(e.coef);
    }
  }
  Row row;
  for (auto& [b, m] : sparse) {
    if (auto it = dense.find(b); it != dense.end()) {
      for (const auto& [pq, v] : m) it->second(pq.first, pq.second) += v;
      continue;
    }
    Part part;
    part.block = b;
    for (const auto& [pq, v] : m)
      if (v != cdouble(0.0)) part.trips.emplace_back(pq.first, pq.second, v);
    const auto n = static_cast<std::size_t>(dims[b]);
    if (part.trips.size() * 4 > n * n) {
      part.dense = true;
      part.mat = CMat::Zero(dims[b], dims[b]);
      for (const auto& [p, q, v] : part.trips) part.mat(p, q) += v;
      part.trips.clear();
    }
    if (part.dense || !part.trips.empty()) row.parts.push_back(std::move(part));
  }
  for (auto& [b, m] : dense) {
    Part part;
    part.block = b;
    part.dense = true;
    part.mat = std::move(m);
    row.parts.push_back(std::move(part));
  }
  std::sort(row.parts.begin(), row.parts.end(), [](const Part& a, const Part& b) { return a.block < b.block; });
  std::map<int, double> lp;
  for (const auto& [i, a] : f.scalars) lp[i] += a;
  for (const auto& [i, a] : lp)
    if (a != 0.0) row.lp.emplace_back(i, a);
  return row;
}

double row_norm(const Row& r) {
  double s = 0.0;
  for (const auto& p : r.parts) s += frob2(p);
  for (const auto& [i, a] : r.lp) s += a * a;
  return std::sqrt(s);
}

void scale_row(Row& r, double k) {
  for (auto& p : r.parts) {
    if (p.dense) {
      p.mat *= k;
    } else {
      for (auto& t : p.trips) std::get<2>(t) *= k;
    }
  }
  for (auto& [i, a] : r.lp) a *= k;
  r.rhs *= k;
}

struct Built {
  StandardForm form;
  bool trivially_infeasible = false;
};

Built standardize(const SdpProblem& p) {
  Built out;
  StandardForm& sf = out.form;
  for (int b = 0; b < p.num_blocks(); ++b) sf.dims.push_back(p.block_dim(b));
  sf.n_lp = p.num_scalars();
  auto new_slack = [&sf]() { return sf.n_lp++; };

  for (const auto& c : p.constraints()) {
    Row row = build_row(c.form, sf.dims);
    row.rhs = c.rhs - c.form.constant;
    if (c.sense == Sense::le) row.lp.emplace_back(new_slack(), 1.0);
    if (c.sense == Sense::ge) row.lp.emplace_back(new_slack(), -1.0);
    sf.rows.push_back(std::move(row));
  }
  for (int s = 0; s < p.num_scalars(); ++s) {
    if (std::isinf(p.scalar_upper(s))) continue;
    Row row;
    row.lp = {{s, 1.0}, {new_slack(), 1.0}};
    row.rhs = p.scalar_upper(s);
    sf.rows.push_back(std::move(row));
  }
  std::vector<Row> kept;
  for (auto& r : sf.rows) {
    const double n = row_norm(r);
    if (n == 0.0) {
      if (std::abs(r.rhs) > 1e-12) out.trivially_infeasible = true;
      continue;
    }
    scale_row(r, 1.0 / n);
    kept.push_back(std::move(r));
  }
  sf.rows = std::move(kept);

  sf.cost = build_row(p.objective(), sf.dims);
  if (p.is_maximize()) scale_row(sf.cost, -1.0);
  const double cn = row_norm(sf.cost);
  if (cn > 0.0) {
    sf.cost_scale = 1.0 / cn;
    scale_row(sf.cost, sf.cost_scale);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Point {
  std::vector<CMat> X, Z;
  RVec x, z, y;
};

struct Ops {
  const StandardForm& sf;
  // rows touching each block: (row, part index)
  std::vector<std::vector<std::pair<int, int>>> by_block;
  std::vector<std::vector<std::pair<int, double>>> lp_cols;  // per lp variable: (row, coef)

  explicit Ops(const StandardForm& f) : sf(f), by_block(f.dims.size()), lp_cols(f.n_lp) {
    for (int i = 0; i < static_cast<int>(f.rows.size()); ++i) {
      const Row& r = f.rows[i];
      for (int k = 0; k < static_cast<int>(r.parts.size()); ++k) by_block[r.parts[k].block].emplace_back(i, k);
      for (const auto& [j, a] : r.lp) lp_cols[j].emplace_back(i, a);
    }
  }

  int m() const { return static_cast<int>(sf.rows.size()); }

  RVec apply(const std::vector<CMat>& X, const RVec& x) const {
    RVec out(m());
    for (int i = 0; i < m(); ++i) {
      double v = 0.0;
      for (const auto& part : sf.rows[i].parts) v += inner(part, X[part.block]);
      for (const auto& [j, a] : sf.rows[i].lp) v += a * x(j);
      out(i) = v;
    }
    return out;
  }

  void adjoint(const RVec& y, std::vector<CMat>& S, RVec& s) const {
    S.resize(sf.dims.size());
    for (std::size_t b = 0; b < sf.dims.size(); ++b) S[b] = CMat::Zero(sf.dims[b], sf.dims[b]);
    s = RVec::Zero(sf.n_lp);
    for (int i = 0; i < m(); ++i) {
      for (const auto& part : sf.rows[i].parts) accumulate(part, y(i), S[part.block]);
      for (const auto& [j, a] : sf.rows[i].lp) s(j) += a * y(i);
    }
  }

  double cost(const std::vector<CMat>& X, const RVec& x) const {
    double v = 0.0;
    for (const auto& part : sf.cost.parts) v += inner(part, X[part.block]);
    for (const auto& [j, a] : sf.cost.lp) v += a * x(j);
    return v;
  }

  void cost_matrices(std::vector<CMat>& C, RVec& c) const {
    C.resize(sf.dims.size());
    for (std::size_t b = 0; b < sf.dims.size(); ++b) C[b] = CMat::Zero(sf.dims[b], sf.dims[b]);
    c = RVec::Zero(sf.n_lp);
    for (const auto& part : sf.cost.parts) accumulate(part, 1.0, C[part.block]);
    for (const auto& [j, a] : sf.cost.lp) c(j) += a;
  }

  // M_ij = Re tr(A_i X A_j Z^-1) + sum_k a_ik a_jk x_k / z_k
  RMat schur(const std::vector<CMat>& X, const std::vector<CMat>& Zi, const RVec& x, const RVec& z) const {
    RMat M = RMat::Zero(m(), m());
    for (std::size_t b = 0; b < sf.dims.size(); ++b) {
      const auto& touch = by_block[b];
      const int nt = static_cast<int>(touch.size());
      std::vector<CMat> T(nt);
      for (int a = 0; a < nt; ++a) {
        const Part& pa = sf.rows[touch[a].first].parts[touch[a].second];
        if (pa.dense) T[a] = X[b] * pa.mat * Zi[b];
      }
      for (int a = 0; a < nt; ++a) {
        const int i = touch[a].first;
        const Part& pa = sf.rows[i].parts[touch[a].second];
        for (int c = a; c < nt; ++c) {
          const int j = touch[c].first;
          const Part& pc = sf.rows[j].parts[touch[c].second];
          double v = 0.0;
          if (pa.dense || pc.dense) {
            const CMat& t = pa.dense ? T[a] : T[c];
            const Part& other = pa.dense ? pc : pa;
            // tr(A_other T^H) = sum A_other(s, t) conj(T(s, t))
            if (other.dense) {
              v = (other.mat.array() * t.array().conjugate()).sum().real();
            } else {
              for (const auto& [s, u, val] : other.trips) v += (val * std::conj(t(s, u))).real();
            }
          } else {
            for (const auto& [p, q, va] : pa.trips) {
              for (const auto& [s, t, vc] : pc.trips) v += (va * X[b](q, s) * vc * Zi[b](t, p)).real();
            }
          }
          M(i, j) += v;
          if (i != j) M(j, i) += v;
        }
      }
    }
    for (int k = 0; k < sf.n_lp; ++k) {
      const double d = x(k) / z(k);
      const auto& col = lp_cols[k];
      for (std::size_t a = 0; a < col.size(); ++a) {
        for (std::size_t c = a; c < col.size(); ++c) {
          const double v = col[a].second * col[c].second * d;
          M(col[a].first, col[c].first) += v;
          if (col[a].first != col[c].first) M(col[c].first, col[a].first) += v;
        }
      }
    }
    return M;
  }

};

CMat herm(const CMat& a) { return 0.5 * (a + a.adjoint()); }

// Largest alpha with X + alpha dX PSD (inf when unbounded).
double max_step(const CMat& X, const CMat& dX) {
  Eigen::LLT<CMat> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  CMat w = llt.matrixL().solve(dX);
  w = llt.matrixL().solve(w.adjoint().eval()).adjoint();
  const Eigen::SelfAdjointEigenSolver<CMat> es(herm(w), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

double max_step_lp(const RVec& x, const RVec& dx) {
  double a = kInf;
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (dx(k) < 0.0) a = std::min(a, -x(k) / dx(k));
  return a;
}

double dot(const std::vector<CMat>& A, const std::vector<CMat>& B) {
  double v = 0.0;
  for (std::size_t b = 0; b < A.size(); ++b) v += (A[b].array().conjugate() * B[b].array()).sum().real();
  return v;
}

// Vectorized constraint data, used only to diagnose a singular Schur matrix.
bool inconsistent_rows(const StandardForm& sf) {
  Eigen::Index cols = sf.n_lp;
  for (int n : sf.dims) cols += 2 * n * n;
  const auto m = static_cast<Eigen::Index>(sf.rows.size());
  RMat A = RMat::Zero(m, cols + 1);
  std::vector<Eigen::Index> offset(sf.dims.size());
  Eigen::Index o = sf.n_lp;
  for (std::size_t b = 0; b < sf.dims.size(); ++b) {
    offset[b] = o;
    o += 2 * sf.dims[b] * sf.dims[b];
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const Row& r = sf.rows[i];
    for (const auto& part : r.parts) {
      const int n = sf.dims[part.block];
      CMat full = CMat::Zero(n, n);
      accumulate(part, 1.0, full);
      for (int q = 0; q < n; ++q) {
        for (int p = 0; p < n; ++p) {
          A(i, offset[part.block] + 2 * (q * n + p)) = full(p, q).real();
          A(i, offset[part.block] + 2 * (q * n + p) + 1) = full(p, q).imag();
        }
      }
    }
    for (const auto& [j, a] : r.lp) A(i, j) = a;
    A(i, cols) = r.rhs;
  }
  Eigen::ColPivHouseholderQR<RMat> qa(A.leftCols(cols));
  Eigen::ColPivHouseholderQR<RMat> qb(A);
  qa.setThreshold(1e-10);
  qb.setThreshold(1e-10);
  return qb.rank() > qa.rank();
}

// Cholesky factor of M with positive pivots. Ill-conditioning alone is not
// a failure: the Schur matrix is expected to degrade near the optimum.
bool factor(const RMat& M, Eigen::LLT<RMat>& llt) {
  llt.compute(M);
  if (llt.info() != Eigen::Success) return false;
  const RVec d = llt.matrixLLT().diagonal();
  return d.allFinite() && d.minCoeff() > 0.0;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& opt) {
  problem.validate();
  SdpSolution sol;
  const Built built = standardize(problem);
  const StandardForm& sf = built.form;
  const Ops ops(sf);
  const int nb = static_cast<int>(sf.dims.size());
  const int m = ops.m();

  auto finish = [&](const Point& pt, SdpStatus status, double residual, double gap, int iters) {
    sol.status = status;
    sol.matrices.resize(nb);
    for (int b = 0; b < nb; ++b) sol.matrices[b] = herm(pt.X[b]);
    sol.scalars = pt.x.head(problem.num_scalars());
    sol.objective = evaluate(problem.objective(), sol.matrices, sol.scalars);
    sol.primal_residual = residual;
    sol.gap = gap;
    sol.iterations = iters;
    return sol;
  };

  // Initial point in the spirit of SDPT3.
  Point pt;
  RVec bvec(m);
  for (int i = 0; i < m; ++i) bvec(i) = sf.rows[i].rhs;
  double cmax = 0.0;
  for (const auto& part : sf.cost.parts) cmax = std::max(cmax, std::sqrt(frob2(part)));
  pt.X.resize(nb);
  pt.Z.resize(nb);
  for (int b = 0; b < nb; ++b) {
    const double n = sf.dims[b];
    double xi = std::max(10.0, std::sqrt(n));
    for (const auto& [i, k] : ops.by_block[b]) {
      const double an = std::sqrt(frob2(sf.rows[i].parts[k]));
      xi = std::max(xi, n * (1.0 + std::abs(bvec(i))) / (1.0 + an));
    }
    const double eta = std::max({10.0, std::sqrt(n), 1.0 + cmax});
    pt.X[b] = xi * CMat::Identity(sf.dims[b], sf.dims[b]);
    pt.Z[b] = eta * CMat::Identity(sf.dims[b], sf.dims[b]);
  }
  double xi_lp = 10.0;
  for (int i = 0; i < m; ++i) xi_lp = std::max(xi_lp, 1.0 + std::abs(bvec(i)));
  pt.x = RVec::Constant(sf.n_lp, xi_lp);
  pt.z = RVec::Constant(sf.n_lp, 10.0);
  pt.y = RVec::Zero(m);

  if (built.trivially_infeasible) return finish(pt, SdpStatus::infeasible, kInf, kInf, 0);
  if (m == 0 && sf.n_lp == 0 && nb == 0) return finish(pt, SdpStatus::optimal, 0.0, 0.0, 0);

  std::vector<CMat> C;
  RVec c;
  ops.cost_matrices(C, c);
  const double bnorm = bvec.norm();
  double cnorm = c.squaredNorm();
  for (const auto& cb : C) cnorm += cb.squaredNorm();
  cnorm = std::sqrt(cnorm);
  const int total_dim = std::accumulate(sf.dims.begin(), sf.dims.end(), 0) + sf.n_lp;

  bool dependency_checked = false;
  const bool trace = opt.verbose;
  for (int it = 0; it < opt.max_iterations; ++it) {
    // Residuals.
    const RVec rp = bvec - ops.apply(pt.X, pt.x);
    std::vector<CMat> AtY;
    RVec aty;
    ops.adjoint(pt.y, AtY, aty);
    std::vector<CMat> Rd(nb);
    double rd2 = 0.0;
    for (int b = 0; b < nb; ++b) {
      Rd[b] = herm(C[b] - AtY[b] - pt.Z[b]);
      rd2 += Rd[b].squaredNorm();
    }
    const RVec rd_lp = c - aty - pt.z;
    rd2 += rd_lp.squaredNorm();
    const double pobj = ops.cost(pt.X, pt.x);
    const double dobj = bvec.dot(pt.y);
    const double xz = dot(pt.X, pt.Z) + pt.x.dot(pt.z);
    const double mu = xz / total_dim;
    const double relp = rp.norm() / (1.0 + bnorm);
    const double reld = std::sqrt(rd2) / (1.0 + cnorm);
    const double gap = std::max(std::abs(pobj - dobj), std::max(xz, 0.0)) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double res_inf = m > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;

    if (trace)
      std::fprintf(stderr, "it %3d relp %.2e reld %.2e gap %.2e pobj %.6e dobj %.6e resinf %.2e\n", it, relp,
                   reld, gap, pobj, dobj, res_inf);
    if (relp <= opt.tol_residual && reld <= opt.tol_residual && gap <= opt.tol_gap) {
      return finish(pt, SdpStatus::optimal, res_inf, gap, it);
    }

    // Farkas-type certificate of primal infeasibility: b'y > 0 with A'y <= 0.
    if (dobj > 1e6 * (1.0 + std::abs(pobj))) {
      bool cert = (aty.array() <= 1e-9 * dobj).all();
      for (int b = 0; b < nb && cert; ++b) {
        const Eigen::SelfAdjointEigenSolver<CMat> es(herm(AtY[b]) / dobj, Eigen::EigenvaluesOnly);
        cert = es.eigenvalues().maxCoeff() <= 1e-8;
      }
      if (cert) return finish(pt, SdpStatus::infeasible, res_inf, gap, it);
    }

    // Factorizations.
    std::vector<CMat> Zi(nb);
    bool ok = true;
    for (int b = 0; b < nb && ok; ++b) {
      Eigen::LLT<CMat> lz(pt.Z[b]);
      ok = lz.info() == Eigen::Success;
      if (ok) Zi[b] = herm(lz.solve(CMat::Identity(sf.dims[b], sf.dims[b])));
    }
    const RVec zi = pt.z.cwiseInverse();
    RMat M = ops.schur(pt.X, Zi, pt.x, pt.z);
    Eigen::LLT<RMat> llt;
    bool ridged = false;
    if (ok && m > 0 && !factor(M, llt)) {
      if (!dependency_checked) {
        dependency_checked = true;
        if (inconsistent_rows(sf)) return finish(pt, SdpStatus::infeasible, res_inf, gap, it);
      }
      RMat Mr = M;
      Mr.diagonal().array() += 1e-12 * std::max(1.0, M.diagonal().maxCoeff());
      ok = factor(Mr, llt);
      ridged = true;
    }
    if (!ok) break;
    // Solves M dy = r; with a regularized factor, refines against the true M.
    auto schur_solve = [&](const RVec& r) {
      RVec d = llt.solve(r);
      for (int k = 0; ridged && k < 3; ++k) d += llt.solve(r - M * d);
      return d;
    };

    // Solves for the direction given the centering/correction target G.
    auto direction = [&](const std::vector<CMat>& G, const RVec& g, std::vector<CMat>& dX, RVec& dx,
                         std::vector<CMat>& dZ, RVec& dz, RVec& dy) {
      std::vector<CMat> H(nb);
      for (int b = 0; b < nb; ++b) H[b] = herm(G[b] - pt.X[b] * Rd[b] * Zi[b]);
      const RVec h = g - pt.x.cwiseProduct(rd_lp).cwiseProduct(zi);
      const RVec rhs = bvec - ops.apply(H, h);
      dy = m > 0 ? schur_solve(rhs) : RVec();
      std::vector<CMat> AtD;
      RVec atd;
      ops.adjoint(dy, AtD, atd);
      dZ.resize(nb);
      dX.resize(nb);
      for (int b = 0; b < nb; ++b) {
        dZ[b] = herm(Rd[b] - AtD[b]);
        dX[b] = herm(G[b] - pt.X[b] - pt.X[b] * dZ[b] * Zi[b]);
      }
      dz = rd_lp - atd;
      dx = g - pt.x - pt.x.cwiseProduct(dz).cwiseProduct(zi);
    };
    auto steps = [&](const std::vector<CMat>& dX, const RVec& dx, const std::vector<CMat>& dZ, const RVec& dz) {
      double ap = max_step_lp(pt.x, dx);
      double ad = max_step_lp(pt.z, dz);
      for (int b = 0; b < nb; ++b) {
        ap = std::min(ap, max_step(pt.X[b], dX[b]));
        ad = std::min(ad, max_step(pt.Z[b], dZ[b]));
      }
      return std::pair{ap, ad};
    };

    // Predictor.
    std::vector<CMat> G0(nb);
    for (int b = 0; b < nb; ++b) G0[b] = CMat::Zero(sf.dims[b], sf.dims[b]);
    std::vector<CMat> dXa, dZa;
    RVec dxa, dza, dya;
    direction(G0, RVec::Zero(sf.n_lp), dXa, dxa, dZa, dza, dya);
    auto [apa, ada] = steps(dXa, dxa, dZa, dza);
    apa = std::min(1.0, apa);
    ada = std::min(1.0, ada);
    double xz_aff = (pt.x + apa * dxa).dot(pt.z + ada * dza);
    for (int b = 0; b < nb; ++b) {
      xz_aff += ((pt.X[b] + apa * dXa[b]).array().conjugate() * (pt.Z[b] + ada * dZa[b]).array()).sum().real();
    }
    const double sigma = std::clamp(std::pow(std::max(xz_aff, 0.0) / std::max(xz, 1e-300), 3.0), 0.0, 1.0);

    // Corrector.
    std::vector<CMat> G(nb);
    for (int b = 0; b < nb; ++b) G[b] = sigma * mu * Zi[b] - dXa[b] * dZa[b] * Zi[b];
    const RVec g = (sigma * mu) * zi - dxa.cwiseProduct(dza).cwiseProduct(zi);
    std::vector<CMat> dX, dZ;
    RVec dx, dz, dy;
    direction(G, g, dX, dx, dZ, dz, dy);
    auto [ap, ad] = steps(dX, dx, dZ, dz);
    const double gamma = opt.step_fraction;
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (trace) std::fprintf(stderr, "    sigma %.2e step %.2e %.2e\n", sigma, ap, ad);
    if (ap < 1e-12 && ad < 1e-12) break;

    for (int b = 0; b < nb; ++b) {
      pt.X[b] = herm(pt.X[b] + ap * dX[b]);
      pt.Z[b] = herm(pt.Z[b] + ad * dZ[b]);
    }
    pt.x += ap * dx;
    pt.z += ad * dz;
    if (m > 0) pt.y += ad * dy;
  }

  // Out of iterations or stalled: accept at the looser targets if met.
  const RVec rp = bvec - ops.apply(pt.X, pt.x);
  const double res_inf = m > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;
  std::vector<CMat> AtY;
  RVec aty;
  ops.adjoint(pt.y, AtY, aty);
  double rd2 = (c - aty - pt.z).squaredNorm();
  for (int b = 0; b < nb; ++b) rd2 += (C[b] - AtY[b] - pt.Z[b]).squaredNorm();
  const double reld = std::sqrt(rd2) / (1.0 + cnorm);
  const double pobj = ops.cost(pt.X, pt.x);
  const double dobj = bvec.dot(pt.y);
  const double xz = dot(pt.X, pt.Z) + pt.x.dot(pt.z);
  const double gap = std::max(std::abs(pobj - dobj), std::max(xz, 0.0)) / (1.0 + std::abs(pobj) + std::abs(dobj));
  const bool acceptable = res_inf <= opt.accept_residual && reld <= opt.accept_residual && gap <= opt.accept_gap;
  return finish(pt, acceptable ? SdpStatus::optimal : SdpStatus::inaccurate, res_inf, gap, opt.max_iterations);
}

}  // namespace covert::conic
