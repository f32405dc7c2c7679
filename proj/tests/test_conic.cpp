#include <gtest/gtest.h>

#include <sstream>

#include <Eigen/Eigenvalues>

#include "covert/conic/sdp.hpp"
#include "support.hpp"

using namespace covert;
using namespace covert::conic;
using namespace covert::testing;

namespace {

CMat random_herm(std::mt19937_64& rng, int n) {
  const CMat a = random_cmat(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

double lambda_max(const CMat& c) { return Eigen::SelfAdjointEigenSolver<CMat>(c).eigenvalues().maxCoeff(); }

}  // namespace

TEST(Sdp, EigenvalueProblem) {
  SdpProblem p;
  const int x = p.add_matrix(3);
  CMat c = CMat::Zero(3, 3);
  c.diagonal() << 1.0, 3.0, 2.0;
  p.maximize(LinearForm{}.trace(x, c));
  p.add_constraint(LinearForm{}.trace(x, CMat::Identity(3, 3)), Sense::eq, 1.0);
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective, 3.0, 1e-7);
  EXPECT_LE(s.primal_residual, 1e-7);
  EXPECT_LE(s.gap, 1e-6);
}

TEST(Sdp, RandomHermitianEigenvalue) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    const CMat c = random_herm(rng, 6);
    SdpProblem p;
    const int x = p.add_matrix(6);
    p.maximize(LinearForm{}.trace(x, c));
    p.add_constraint(LinearForm{}.trace(x, CMat::Identity(6, 6)), Sense::eq, 1.0);
    const SdpSolution s = solve(p);
    ASSERT_EQ(s.status, SdpStatus::optimal);
    EXPECT_NEAR(s.objective, lambda_max(c), 1e-6 * (1.0 + std::abs(lambda_max(c))));
  }
}

TEST(Sdp, InconsistentTraceIsInfeasible) {
  SdpProblem p;
  const int x = p.add_matrix(2);
  p.minimize(LinearForm{}.trace(x, CMat::Identity(2, 2)));
  p.add_constraint(LinearForm{}.trace(x, CMat::Identity(2, 2)), Sense::eq, 1.0);
  p.add_constraint(LinearForm{}.trace(x, CMat::Identity(2, 2)), Sense::eq, 2.0);
  EXPECT_EQ(solve(p).status, SdpStatus::infeasible);
}

TEST(Sdp, NegativeTraceIsInfeasible) {
  SdpProblem p;
  const int x = p.add_matrix(3);
  const int s = p.add_scalar();
  p.minimize(LinearForm{}.scalar(s, 1.0));
  p.add_constraint(LinearForm{}.trace(x, CMat::Identity(3, 3)).scalar(s, 1.0), Sense::le, -1.0);
  EXPECT_EQ(solve(p).status, SdpStatus::infeasible);
}

TEST(Sdp, ScalarsAndBounds) {
  // max s1 + 2 s2, s1 + s2 <= 3, s2 <= 1 (bound) -> 4
  SdpProblem p;
  const int a = p.add_scalar("a");
  const int b = p.add_scalar("b", 1.0);
  p.maximize(LinearForm{}.scalar(a, 1.0).scalar(b, 2.0).offset(0.5));
  p.add_constraint(LinearForm{}.scalar(a, 1.0).scalar(b, 1.0), Sense::le, 3.0);
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective, 4.5, 1e-7);
  EXPECT_NEAR(s.scalars(0), 2.0, 1e-6);
  EXPECT_NEAR(s.scalars(1), 1.0, 1e-6);
}

TEST(Sdp, EntryTermsMatchTrace) {
  // min Re X(0,1) with diag(X) = 1 and X PSD: optimum -1 (X = [[1,-1],[-1,1]]).
  SdpProblem p;
  const int x = p.add_matrix(2);
  p.minimize(LinearForm{}.entry(x, 0, 1, 1.0));
  p.add_constraint(LinearForm{}.entry(x, 0, 0, 1.0), Sense::eq, 1.0);
  p.add_constraint(LinearForm{}.entry(x, 1, 1, 1.0), Sense::eq, 1.0);
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective, -1.0, 1e-7);
  // Imaginary coefficient: min Re(i X(0,1)) = Im-part driven, also -1.
  SdpProblem q;
  const int y = q.add_matrix(2);
  q.minimize(LinearForm{}.entry(y, 0, 1, cdouble(0.0, 1.0)));
  q.add_constraint(LinearForm{}.entry(y, 0, 0, 1.0), Sense::eq, 1.0);
  q.add_constraint(LinearForm{}.entry(y, 1, 1, 1.0), Sense::eq, 1.0);
  const SdpSolution t = solve(q);
  ASSERT_EQ(t.status, SdpStatus::optimal);
  EXPECT_NEAR(t.objective, -1.0, 1e-7);
  EXPECT_NEAR(t.matrices[0](0, 1).imag(), 1.0, 1e-5);
}

TEST(Sdp, Deterministic) {
  std::mt19937_64 rng(3);
  SdpProblem p;
  const int x = p.add_matrix(5);
  p.maximize(LinearForm{}.trace(x, random_herm(rng, 5)));
  p.add_constraint(LinearForm{}.trace(x, CMat::Identity(5, 5)), Sense::le, 2.0);
  p.add_constraint(LinearForm{}.trace(x, random_herm(rng, 5)), Sense::ge, -1.0);
  const SdpSolution a = solve(p);
  const SdpSolution b = solve(p);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.matrices[0], b.matrices[0]);
}

TEST(Sdp, RejectsMalformedProblems) {
  SdpProblem p;
  const int x = p.add_matrix(2);
  CMat bad = CMat::Zero(2, 2);
  bad(0, 1) = 1.0;
  p.minimize(LinearForm{}.trace(x, bad));
  EXPECT_THROW(solve(p), std::invalid_argument);
  SdpProblem q;
  q.add_matrix(2);
  q.minimize(LinearForm{}.entry(3, 0, 0, 1.0));
  EXPECT_THROW(solve(q), std::invalid_argument);
}

TEST(Embedding, InnerProductIdentity) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + t % 5;
    const CMat a = random_herm(rng, n);
    const CMat g = random_cmat(rng, n, n);
    const CMat x = g * g.adjoint();
    SdpProblem p;
    const int b = p.add_matrix(n);
    p.minimize(LinearForm{}.trace(b, a).entry(b, 0, n - 1, cdouble(0.3, -0.7)));
    const SdpProblem r = complex_to_real(p);
    CMat xe(2 * n, 2 * n);
    xe << x.real().cast<cdouble>(), -x.imag().cast<cdouble>(), x.imag().cast<cdouble>(), x.real().cast<cdouble>();
    const double direct = evaluate(p.objective(), {x}, RVec());
    const double embedded = evaluate(r.objective(), {xe}, RVec());
    EXPECT_NEAR(direct, embedded, 1e-12 * (1.0 + std::abs(direct)));
    EXPECT_LT((embedded_to_complex(xe) - x).norm(), 1e-12);
  }
}

TEST(Embedding, OneByOneIsRotationBlock) {
  SdpProblem p;
  const int b = p.add_matrix(1);
  CMat c(1, 1);
  c(0, 0) = 2.0;
  p.minimize(LinearForm{}.trace(b, c));
  const SdpProblem r = complex_to_real(p);
  ASSERT_EQ(r.block_dim(0), 2);
  const CMat e = r.objective().dense[0].coef;
  EXPECT_NEAR(e(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(e(1, 1).real(), 1.0, 1e-15);
  EXPECT_EQ(e(0, 1), cdouble(0.0));
  EXPECT_EQ(e.imag().norm(), 0.0);
}

TEST(Embedding, SolveRoundTrip) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    SdpProblem p;
    const int x = p.add_matrix(4);
    const int s = p.add_scalar();
    p.maximize(LinearForm{}.trace(x, random_herm(rng, 4)).scalar(s, -0.5));
    p.add_constraint(LinearForm{}.trace(x, CMat::Identity(4, 4)), Sense::eq, 1.0);
    p.add_constraint(LinearForm{}.trace(x, random_herm(rng, 4)).scalar(s, 1.0), Sense::ge, 0.2);
    p.add_constraint(LinearForm{}.entry(x, 0, 1, cdouble(1.0, 2.0)), Sense::le, 0.1);
    const SdpSolution a = solve(p);
    const SdpSolution b = solve(complex_to_real(p));
    ASSERT_EQ(a.status, SdpStatus::optimal);
    ASSERT_EQ(b.status, SdpStatus::optimal);
    EXPECT_NEAR(a.objective, b.objective, 1e-6 * (1.0 + std::abs(a.objective)));
    const CMat back = embedded_to_complex(b.matrices[0]);
    EXPECT_NEAR(evaluate(p.objective(), {back}, b.scalars), a.objective, 1e-5 * (1.0 + std::abs(a.objective)));
  }
}

TEST(Dump, Format) {
  SdpProblem p;
  const int x = p.add_matrix(2);
  const int s = p.add_scalar("s", 3.0);
  p.maximize(LinearForm{}.entry(x, 0, 1, cdouble(1.0, 2.0)).scalar(s, 1.0));
  p.add_constraint(LinearForm{}.trace(x, CMat::Identity(2, 2)), Sense::eq, 1.0);
  std::ostringstream os;
  write_dump(os, p);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("sdp-dump 1\nsense max\nblocks 1\n2\nscalars 1\n3\n", 0), 0u) << text;
  EXPECT_NE(text.find("T 0 0 1 1 2\n"), std::string::npos);
  EXPECT_NE(text.find("eq 1 0 2\n"), std::string::npos);
  EXPECT_NE(text.find("end\n"), std::string::npos);
}

TEST(Dump, ReadWriteRoundTrip) {
  std::mt19937_64 rng(17);
  SdpProblem p;
  const int x = p.add_matrix(3);
  const int y = p.add_matrix(2);
  const int s = p.add_scalar("s", 5.0);
  p.maximize(LinearForm{}.trace(x, random_herm(rng, 3)).trace(y, random_herm(rng, 2)).scalar(s, -0.5));
  p.add_constraint(LinearForm{}.trace(x, CMat::Identity(3, 3)), Sense::eq, 1.0);
  p.add_constraint(LinearForm{}.entry(y, 0, 1, cdouble(0.25, -1.0)).scalar(s, 2.0), Sense::le, 3.0);
  p.add_constraint(LinearForm{}.trace(y, random_herm(rng, 2)), Sense::ge, -1.0);
  std::ostringstream first;
  write_dump(first, p);
  std::istringstream in(first.str());
  const SdpProblem q = read_dump(in);
  std::ostringstream second;
  write_dump(second, q);
  EXPECT_EQ(first.str(), second.str());

  const SdpSolution a = solve(p);
  const SdpSolution b = solve(q);
  ASSERT_EQ(a.status, b.status);
  EXPECT_NEAR(a.objective, b.objective, 1e-9 * std::max(1.0, std::abs(a.objective)));
}

TEST(Dump, MalformedInputThrows) {
  for (const char* text : {"", "sdp-dump 2\n", "sdp-dump 1\nsense max\nblocks x\n",
                           "sdp-dump 1\nsense max\nblocks 1\n2\nscalars 0\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_dump(in), std::invalid_argument) << text;
  }
}
