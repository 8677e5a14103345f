#include "jpvi/errors.hpp"
#include "jpvi/painleve.hpp"
#include "test_support.hpp"

using namespace jpvi;
using jpvi::test::below;
using jpvi::test::close;
using jpvi::test::X;

namespace {
WeightParams wp(const char* a, const char* b, const char* A, const char* B) {
  return WeightParams{X(a), X(b), X(A), X(B)};
}
}  // namespace

TEST(SigmaConstantsTest, SmallCase) {
  const WeightParams p = wp("1", "1", "0", "1");
  EXPECT_TRUE(sigma_d1(1, p) == XReal(-4));
  EXPECT_TRUE(sigma_d2(1, p) == XReal(2));
  const auto nu = sigma_nu(1, p);
  EXPECT_TRUE(nu[0] == XReal(1));
  EXPECT_TRUE(nu[1].is_zero());
  EXPECT_TRUE(nu[2] == XReal(2));
  EXPECT_TRUE(nu[3] == XReal(2));
}

TEST(SigmaTraceTest, InitialValues) {
  const WeightParams p = wp("1.5", "0.5", "1", "1");
  const SigmaTrace s = sigma_trace(3, p, XReal(0));
  EXPECT_TRUE(close(s.sigma, sigma_d2(3, p), 1e-70));
  EXPECT_TRUE(close(s.sigma1, sigma_d1(3, p), 1e-70));
}

TEST(SigmaTraceTest, ResidualAtReferencePoint) {
  const SigmaTrace s = sigma_trace(3, wp("1.5", "0.5", "1", "1"), X("0.3"));
  EXPECT_TRUE(below(s.residual, 1e-20));
  EXPECT_TRUE(s.lhs.is_finite() && s.rhs.is_finite());
}

TEST(SigmaTraceTest, ResidualSmallAcrossGridAndParameterSets) {
  for (auto [n, p] : {std::pair{2, wp("1", "1", "1", "1")}, std::pair{5, wp("0.7", "2.3", "2", "-1")}}) {
    for (int i = 2; i <= 18; i += 4) {
      const XReal t = XReal::ratio(i, 20);
      EXPECT_TRUE(below(sigma_trace(n, p, t).residual, 1e-20)) << "n=" << n << " i=" << i;
    }
  }
}

TEST(SigmaTraceTest, InvariantUnderWeightScaling) {
  const WeightParams p = wp("1.5", "0.5", "1", "1");
  const XReal t = X("0.65");
  const SigmaTrace a = sigma_trace(3, p, t);
  for (const char* c : {"0.5", "2", "10"}) {
    const SigmaTrace b = sigma_trace(3, p.scaled(X(c)), t);
    EXPECT_TRUE(close(a.sigma, b.sigma, 1e-60));
    EXPECT_TRUE(close(a.sigma2, b.sigma2, 1e-60));
    EXPECT_TRUE(below(abs(a.residual - b.residual), 1e-60));
  }
}

TEST(SigmaTraceTest, SigmaDerivativesMatchFiniteDifferences) {
  const WeightParams p = wp("2", "3", "1", "2");
  const XReal t = X("0.55"), h = X("1e-10");
  const SigmaTrace s = sigma_trace(4, p, t);
  const XReal d1 = (sigma_trace(4, p, t + h).sigma - sigma_trace(4, p, t - h).sigma) / (2 * h);
  const XReal d2 = (sigma_trace(4, p, t + h).sigma1 - sigma_trace(4, p, t - h).sigma1) / (2 * h);
  EXPECT_TRUE(close(s.sigma1, d1, 1e-15));
  EXPECT_TRUE(close(s.sigma2, d2, 1e-15));
}

TEST(PviConstantsTest, SmallCase) {
  const PviConstants k = pvi_constants(1, wp("1", "1", "0", "1"));
  EXPECT_TRUE(k.a == XReal::ratio(25, 2));
  EXPECT_TRUE(k.b == XReal::ratio(-1, 2));
  EXPECT_TRUE(k.c == XReal::ratio(1, 2));
  EXPECT_TRUE(k.d == XReal::ratio(1, 2));
}

TEST(PviRhsTest, SingularLocusRejected) {
  PviState s;
  s.n = 1;
  s.k = pvi_constants(1, wp("1", "1", "0", "1"));
  s.t = X("0.5");
  s.W = X("0.5");
  s.W1 = XReal(1);
  EXPECT_THROW(pvi_rhs(s), SingularLocus);
  s.W = XReal(0);
  EXPECT_THROW(pvi_rhs(s), SingularLocus);
  s.W = X("0.2");
  s.t = XReal(0);
  EXPECT_THROW(pvi_rhs(s), SingularLocus);
}

TEST(WnTest, InitialConditions) {
  const WeightParams p = wp("1", "1", "0", "1");
  EXPECT_TRUE(below(abs(wn_value(2, p, XReal(0))), 1e-70));
  const WnPoint w = wn_from_pipeline(2, p, XReal(0));
  EXPECT_TRUE(below(abs(w.W1 - 1), 1e-4));
}

TEST(WnTest, PipelineSatisfiesPviPointwise) {
  EXPECT_TRUE(below(pvi_pipeline_residual(1, wp("1", "1", "0", "1"), X("0.5")), 1e-8));
  for (const char* t : {"0.2", "0.5", "0.8"})
    EXPECT_TRUE(below(pvi_pipeline_residual(3, wp("1.5", "0.5", "1", "1"), X(t)), 1e-8)) << t;
}

TEST(WnTest, InvariantUnderWeightScaling) {
  const WeightParams p = wp("1.5", "0.5", "1", "1");
  EXPECT_TRUE(close(wn_value(2, p, X("0.4")), wn_value(2, p.scaled(XReal(10)), X("0.4")), 1e-60));
}

class PviIntegrateTest : public ::testing::Test {
 protected:
  const WeightParams p = wp("1", "1", "0", "1");
  const int n = 2;
  const XReal t0 = X("0.1");
};

TEST_F(PviIntegrateTest, ReproducesPipelineAtMidpoint) {
  const WnPoint seed = wn_from_pipeline(n, p, t0);
  const PviTrajectory tr = pvi_integrate(n, p, t0, seed, {X("0.5")});
  ASSERT_TRUE(tr.completed) << tr.stop_reason;
  EXPECT_TRUE(tr.states.back().t == X("0.5"));
  EXPECT_TRUE(below(abs(tr.states.back().W - wn_value(n, p, X("0.5"))), 1e-8));
}

TEST_F(PviIntegrateTest, ReverseIntegrationRecoversSeed) {
  PviOptions opts;
  opts.local_tol = X("1e-16");
  const WnPoint seed = wn_from_pipeline(n, p, t0);
  const PviTrajectory fwd = pvi_integrate(n, p, t0, seed, {X("0.3")}, opts);
  ASSERT_TRUE(fwd.completed);
  const PviState& end = fwd.states.back();
  const PviTrajectory back = pvi_integrate(n, p, end.t, WnPoint{end.W, end.W1}, {t0}, opts);
  ASSERT_TRUE(back.completed);
  EXPECT_TRUE(below(abs(back.states.back().W - seed.W), 10 * opts.local_tol));
}

TEST_F(PviIntegrateTest, TighterToleranceShrinksDefect) {
  const WnPoint seed = wn_from_pipeline(n, p, t0);
  const XReal target = X("0.3");
  const XReal exact = wn_value(n, p, target);
  auto defect = [&](const char* tol) {
    PviOptions opts;
    opts.local_tol = X(tol);
    const PviTrajectory tr = pvi_integrate(n, p, t0, seed, {target}, opts);
    EXPECT_TRUE(tr.completed);
    return abs(tr.states.back().W - exact);
  };
  const XReal loose = defect("1e-12");
  const XReal tight = defect("1e-14");
  EXPECT_TRUE(below(10 * tight, loose)) << loose.to_string(4) << " vs " << tight.to_string(4);
}

TEST_F(PviIntegrateTest, StopsBeforeSingularLocus) {
  // A seed placed on W = t sits on the moving singularity.
  const PviTrajectory tr = pvi_integrate(n, p, t0, WnPoint{t0, XReal(1)}, {X("0.5")});
  EXPECT_FALSE(tr.completed);
  EXPECT_FALSE(tr.stop_reason.empty());
}
