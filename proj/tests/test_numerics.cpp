#include <random>

#include "jpvi/errors.hpp"
#include "jpvi/finite_difference.hpp"
#include "jpvi/linalg.hpp"
#include "jpvi/moments.hpp"
#include "jpvi/quadrature.hpp"
#include "test_support.hpp"

using namespace jpvi;
using jpvi::test::below;
using jpvi::test::close;
using jpvi::test::X;

TEST(XRealTest, DecimalParseIsExactToWorkingPrecision) {
  EXPECT_TRUE(X("0.1") == XReal::ratio(1, 10));
  EXPECT_TRUE(X("1.5") == XReal::ratio(3, 2));
  EXPECT_THROW(X("1.5x"), DomainError);
  EXPECT_THROW(X("  "), DomainError);
}

TEST(XRealTest, PrecisionScopeRestores) {
  EXPECT_EQ(working_precision(), kDefaultPrecisionBits);
  {
    PrecisionScope s(512);
    EXPECT_EQ(working_precision(), 512);
    EXPECT_EQ(XReal(1).precision_bits(), 512);
  }
  EXPECT_EQ(working_precision(), kDefaultPrecisionBits);
}

TEST(XRealTest, MixedPrecisionArithmeticUsesWiderOperand) {
  XReal lo = [] {
    PrecisionScope s(64);
    return XReal::ratio(1, 3);
  }();
  XReal hi = [] {
    PrecisionScope s(512);
    return XReal(1);
  }();
  EXPECT_EQ((hi + lo).precision_bits(), 512);
  EXPECT_EQ((lo + hi).precision_bits(), 512);
}

TEST(SpdFactorTest, ScalarLogDet) {
  XMatrix m(1, 1);
  m(0, 0) = XReal(4);
  EXPECT_TRUE(close(factor_spd(m).log_det(), log(XReal(4)), 1e-70));
}

TEST(SpdFactorTest, IdentityHasZeroLogDet) {
  EXPECT_TRUE(factor_spd(XMatrix::identity(3)).log_det().is_zero());
}

TEST(SpdFactorTest, ClassicalJacobiHankelTwoByTwo) {
  // mu_k = B(k+2, 2): 1/6, 1/12, 1/20; det = 1/120 - 1/144 = 1/720.
  const WeightParams p{XReal(1), XReal(1), XReal(1), XReal(0)};
  const MomentTable mt = moment_table(2, p, X("0.3"));
  EXPECT_TRUE(close(factor_spd(hankel_matrix(mt.mu, 2)).det(), XReal::ratio(1, 720), 1e-70));
}

TEST(SpdFactorTest, RejectsIndefinite) {
  XMatrix m(2, 2);
  m(0, 0) = XReal(1);
  m(0, 1) = XReal(2);
  m(1, 0) = XReal(2);
  m(1, 1) = XReal(1);
  EXPECT_THROW(factor_spd(m), NotPositiveDefinite);
}

TEST(SpdFactorTest, RandomSpdDeterminantsMatchTriangularProduct) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> diag(0.2, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + trial % 8;
    XMatrix l(n, n);
    XReal det_oracle(1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) l(i, j) = XReal(off(rng));
      for (int j = i + 1; j < n; ++j) l(i, j) = XReal(0);
      l(i, i) = XReal(diag(rng));
      det_oracle *= square(l(i, i));
    }
    XMatrix lt(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lt(i, j) = l(j, i);
    const SpdFactorization f = factor_spd(l * lt);
    EXPECT_TRUE(close(f.det(), det_oracle, std::ldexp(1.0, -kDefaultPrecisionBits / 2))) << "n=" << n;
  }
}

TEST(SpdFactorTest, SolveInvertsMatrix) {
  XMatrix m = XMatrix::symmetric(4, [](int i, int j) { return XReal(1) / (i + j + 1); });
  const SpdFactorization f = factor_spd(m);
  std::vector<XReal> b{XReal(1), XReal(-2), XReal(3), XReal(5)};
  const auto x = f.solve(b);
  for (int i = 0; i < 4; ++i) {
    XReal s(0);
    for (int j = 0; j < 4; ++j) s += m(i, j) * x[j];
    EXPECT_TRUE(close(s, b[i], 1e-65));
  }
}

TEST(PrecisionEscalationTest, RetriesAtDoubledPrecision) {
  int calls = 0;
  const int bits = with_precision_escalation([&] {
    ++calls;
    if (working_precision() < 1024) throw NonFinitePivot(0, "cancellation");
    return working_precision();
  });
  EXPECT_EQ(bits, 1024);
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(working_precision(), kDefaultPrecisionBits);
}

TEST(PrecisionEscalationTest, GivesUpAtCeiling) {
  EXPECT_THROW(with_precision_escalation([]() -> int { throw NonFinitePivot(1, "always"); }),
               PrecisionExhausted);
}

namespace {

// M(t) = M0 + t M1 + t^2 M2 + t^3 M3 with M0 SPD and small perturbations.
struct CubicFamily {
  XMatrix c[4];
  explicit CubicFamily(int n) {
    c[0] = XMatrix::symmetric(n, [](int i, int j) { return XReal(1) / (i + j + 1) + (i == j ? 1 : 0); });
    c[1] = XMatrix::symmetric(n, [](int i, int j) { return XReal::ratio(i - j + 2, 7); });
    c[2] = XMatrix::symmetric(n, [](int i, int j) { return XReal::ratio((i + 1) * (j + 1), 11); });
    c[3] = XMatrix::symmetric(n, [](int i, int j) { return XReal::ratio(i == j ? 1 : -1, 13); });
  }
  XMatrix at(const XReal& t, int deriv) const {
    const int n = c[0].rows();
    return XMatrix::symmetric(n, [&](int i, int j) {
      XReal s(0), tp(1);
      for (int k = deriv; k < 4; ++k) {
        long coef = 1;
        for (int m = 0; m < deriv; ++m) coef *= k - m;
        s += coef * c[k](i, j) * tp;
        tp *= t;
      }
      return s;
    });
  }
};

}  // namespace

TEST(LogDetDerivativesTest, ScalarMatchesLogDerivatives) {
  // f = 2 + t + t^2 + t^3 at t = 1/2.
  const XReal t = X("0.5");
  const XReal f = 2 + t + square(t) + t * square(t);
  const XReal f1 = 1 + 2 * t + 3 * square(t);
  const XReal f2 = 2 + 6 * t;
  const XReal f3(6);
  auto one = [](const XReal& v) {
    XMatrix m(1, 1);
    m(0, 0) = v;
    return m;
  };
  const auto d = logdet_derivatives(one(f), one(f1), one(f2), one(f3));
  EXPECT_TRUE(close(d.first, f1 / f, 1e-70));
  EXPECT_TRUE(close(d.second, f2 / f - square(f1 / f), 1e-70));
  EXPECT_TRUE(close(d.third, f3 / f - 3 * f1 * f2 / square(f) + 2 * pow(f1 / f, 3L), 1e-70));
}

TEST(LogDetDerivativesTest, ConstantMatrixHasZeroDerivatives) {
  const XMatrix m = XMatrix::identity(3);
  const XMatrix zero(3, 3);
  const auto d = logdet_derivatives(m, zero, zero, zero);
  EXPECT_TRUE(d.first.is_zero());
  EXPECT_TRUE(d.second.is_zero());
  EXPECT_TRUE(d.third.is_zero());
}

TEST(LogDetDerivativesTest, AgreesWithFiniteDifferencesOnCubicFamily) {
  const CubicFamily fam(4);
  const XReal t = X("0.3");
  const XReal h = X("1e-10");
  auto lndet = [&](const XReal& s) { return factor_spd(fam.at(s, 0)).log_det(); };
  const auto d = logdet_derivatives(fam.at(t, 0), fam.at(t, 1), fam.at(t, 2), fam.at(t, 3));
  EXPECT_TRUE(close(d.first, fd_first(lndet, t, h), 1e-30));
  EXPECT_TRUE(close(d.second, fd_second(lndet, t, h), 1e-18));
  auto second = [&](const XReal& s) {
    return logdet_derivatives(fam.at(s, 0), fam.at(s, 1), fam.at(s, 2), fam.at(s, 3)).second;
  };
  EXPECT_TRUE(close(d.third, fd_first(second, t, h), 1e-30));
}

TEST(LogDetDerivativesTest, HankelFirstDerivativeMatchesFiniteDifference) {
  const WeightParams p{XReal(1), XReal(1), XReal(0), XReal(1)};
  const XReal t = X("0.5");
  auto lndet = [&](const XReal& s) { return log_hankel_det(2, p, s); };
  const XReal fd = (lndet(t + X("1e-8")) - lndet(t - X("1e-8"))) / X("2e-8");
  EXPECT_TRUE(close(hankel(2, p, t).d_logdet.first, fd, 1e-12));
}

TEST(QuadratureTest, PolynomialOnUnitInterval) {
  const auto r = integrate([](const XReal& x) { return x * (1 - x); }, XReal(0), XReal(1));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(close(r.value, XReal::ratio(1, 6), 1e-35));
}

TEST(QuadratureTest, EndpointSingularity) {
  const auto r = integrate([](const QuadPoint& q) { return 1 / sqrt(q.from_left); }, XReal(0), XReal(1));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(close(r.value, XReal(2), 1e-35));
}

TEST(QuadratureTest, UpperHalfInterval) {
  const auto r = integrate([](const XReal& x) { return x * (1 - x); }, X("0.5"), XReal(1));
  EXPECT_TRUE(close(r.value, XReal::ratio(1, 12), 1e-35));
}

TEST(QuadratureTest, ExactOnPolynomialsUpToDegreeTwenty) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> coef(-9, 9);
  for (int trial = 0; trial < 6; ++trial) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    std::vector<XReal> c;
    for (int k = 0; k <= 20; ++k) c.push_back(XReal(coef(rng)));
    auto poly = [&](const XReal& x) {
      XReal s(0);
      for (int k = 20; k >= 0; --k) s = s * x + c[k];
      return s;
    };
    auto anti = [&](const XReal& x) {
      XReal s(0);
      for (int k = 20; k >= 0; --k) s = s * x + c[k] / (k + 1);
      return s * x;
    };
    const XReal xa(a), xb(b);
    const XReal exact = anti(xb) - anti(xa);
    const auto ts = integrate(poly, xa, xb);
    const auto gl = integrate(poly, xa, xb, QuadRule::gauss_legendre(ldexp(XReal(1), -200)));
    EXPECT_TRUE(below(abs(ts.value - exact), ldexp(XReal(1), -120) * max(abs(exact), XReal(1))));
    EXPECT_TRUE(below(abs(gl.value - exact), ldexp(XReal(1), -190) * max(abs(exact), XReal(1))));
  }
}

TEST(QuadratureTest, VectorIntegrandSharesNodes) {
  auto res = integrate_many(
      [](const QuadPoint& q, std::span<XReal> out) {
        out[0] = q.x;
        out[1] = square(q.x);
        out[2] = exp(q.x);
      },
      3, XReal(0), XReal(1));
  EXPECT_TRUE(close(res[0].value, XReal::ratio(1, 2), 1e-35));
  EXPECT_TRUE(close(res[1].value, XReal::ratio(1, 3), 1e-35));
  EXPECT_TRUE(close(res[2].value, exp(XReal(1)) - 1, 1e-35));
}
