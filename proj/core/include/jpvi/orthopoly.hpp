#pragma once

#include <optional>
#include <vector>

#include "jpvi/moments.hpp"
#include "jpvi/quadrature.hpp"
#include "jpvi/xreal.hpp"

namespace jpvi {

/// Monic orthogonal polynomials P_0..P_{n_max} of the weight at fixed t.
///
/// Everything is read off the LDL^T factorization of the (n_max+1)-square
/// Hankel matrix: row j of L^{-1} holds P_j, the pivots are the norms h_j.
struct OPSystem {
  int n_max = 0;
  XReal t;
  WeightParams params;
  /// alpha_0..alpha_{n_max-1}.
  std::vector<XReal> alpha_rec;
  /// beta_rec[j] = h_j / h_{j-1} for j = 1..n_max; beta_rec[0] = 0.
  std::vector<XReal> beta_rec;
  /// h_0..h_{n_max}.
  std::vector<XReal> h;
  /// p1[j] is the coefficient of z^(j-1) in P_j; p1[0] = 0.
  std::vector<XReal> p1;
  /// coeffs[j] has j+1 ascending coefficients; coeffs[j][j] == 1.
  std::vector<std::vector<XReal>> coeffs;
  int precision_bits = 0;

  const XReal& alpha(int j) const;
  const XReal& beta(int j) const;
};

/// n_max >= 1 and t in [0, 1). Escalates precision on pivot loss.
OPSystem build_system(int n_max, const WeightParams& p, const XReal& t);

struct PolyValue {
  XReal value;
  XReal d1;
  XReal d2;
};

/// P_n(z) with its first two z-derivatives, by Horner on the stored
/// coefficients.
PolyValue eval_poly(const OPSystem& sys, int n, const XReal& z);

/// max_{i != j} |int P_i P_j w| / sqrt(h_i h_j) by quadrature split at t.
XReal orthogonality_defect(const OPSystem& sys, const QuadRule& rule = QuadRule::standard());

/// x^alpha (1-x)^beta.
XReal w0(const WeightParams& p, const XReal& x);

struct AuxQuantities {
  int n = 0;
  XReal t;
  XReal R;
  XReal r;
  /// 2n+1+alpha+beta + t R.
  XReal x;
  /// t r - p1(n).
  XReal y;
  /// The defining integrals of x_n and y_n, when computed.
  std::optional<XReal> x_quad;
  std::optional<XReal> y_quad;
};

/// R_n, r_n from P_n(t) and the norms; x_n, y_n from the closed relations.
AuxQuantities aux_quantities(const OPSystem& sys, int n);

/// aux_quantities for j = 0..upto with x_j, y_j also evaluated by
/// quadrature of
///   x_j = beta/h_j int P_j^2 w/(1-y) dy,
///   y_j = beta/h_{j-1} int P_j P_{j-1} w/(1-y) dy,
/// split at t. Throws NotConverged if the quadrature does not settle.
std::vector<AuxQuantities> aux_quantities_with_quadrature(const OPSystem& sys, int upto,
                                                          const QuadRule& rule = QuadRule::standard());

/// -alpha/z - beta/(z-1).
XReal v0_prime(const WeightParams& p, const XReal& z);

struct LadderData {
  int n = 0;
  XReal z;
  XReal A_val;
  XReal B_val;
  XReal A_prime;
  XReal B_prime;
};

/// A_n(z), B_n(z) and their z-derivatives from the partial fractions with
/// poles at t, 1 and 0. Throws PoleEvaluation for z in {0, 1, t}.
LadderData ladder_eval(const AuxQuantities& aux, const XReal& z);

struct LadderResiduals {
  /// P_n' + B_n P_n - beta_n A_n P_{n-1}.
  XReal lowering;
  /// P_{n-1}' - (B_n + v0') P_{n-1} + A_{n-1} P_n.
  XReal raising;
};

/// Scaled residuals of the lowering and raising relations at z, n >= 1.
LadderResiduals ladder_residuals(const OPSystem& sys, const AuxQuantities& prev,
                                 const AuxQuantities& cur, const XReal& z);

}  // namespace jpvi
