#pragma once

#include <vector>

#include "jpvi/linalg.hpp"
#include "jpvi/xreal.hpp"

namespace jpvi {

/// Weight x^alpha (1-x)^beta (A + B theta(x - t)) on [0, 1].
struct WeightParams {
  XReal alpha;
  XReal beta;
  XReal A;
  XReal B;

  /// Throws DomainError unless alpha, beta > 0, A >= 0, A + B >= 0 and
  /// (A, B) != (0, 0).
  void validate() const;
  /// (alpha, beta, cA, cB).
  WeightParams scaled(const XReal& c) const;
};

/// mu_k(t) = A B(alpha+k+1, beta+1) + B int_t^1 x^(alpha+k) (1-x)^beta dx,
/// t in [0, 1].
XReal moment(int k, const WeightParams& p, const XReal& t);

/// The same moment through the 2F1 representation of the jump term. Needs
/// t in (0, 1].
XReal moment_hypergeometric(int k, const WeightParams& p, const XReal& t);

struct MomentTable {
  XReal t;
  WeightParams params;
  std::vector<XReal> mu;
  /// First three t-derivatives, from mu_k' = -B t^(alpha+k) (1-t)^beta.
  /// At t = 0 the first derivative is 0 and the higher ones are NaN where
  /// they diverge; at t = 1 all derivative rows are NaN.
  std::vector<XReal> mu1;
  std::vector<XReal> mu2;
  std::vector<XReal> mu3;
};

/// Moments 0..2n-2, enough for the n x n Hankel matrix.
MomentTable moment_table(int n, const WeightParams& p, const XReal& t);

XMatrix hankel_matrix(const std::vector<XReal>& row, int n);

struct HankelResult {
  int n = 0;
  XReal t;
  XReal log_det;
  LogDetDerivatives d_logdet;
  XReal H;   // t (t-1) (ln D_n)'
  XReal H1;  // H'
  XReal H2;  // H''
  /// Precision the factorization finally succeeded at.
  int precision_bits = 0;
};

/// ln D_n(t) and its t-derivatives from exact trace formulas. Precision is
/// escalated automatically when pivots lose too many bits.
///
/// t = 0 gives H = H' = 0 (H'' is NaN unless it is finite in the limit);
/// t = 1 gives only the log-determinant.
HankelResult hankel(int n, const WeightParams& p, const XReal& t);

/// ln D_n(t) only.
XReal log_hankel_det(int n, const WeightParams& p, const XReal& t);

/// D_n(t) as (1/n!) int_[0,1]^n Delta(x)^2 prod w(x_i) dx by a tensor
/// tanh-sinh rule split at t on every axis. n in {1, 2, 3}.
///
/// The rule level is raised until the one-dimensional moments 0..2n-2 of
/// the discrete rule settle to `rel_tol`; the level used is reported
/// through `level_used` when non-null. Cost grows steeply with the working
/// precision; 128 bits is ample for agreement near 1e-15.
XReal multiint_oracle(int n, const WeightParams& p, const XReal& t, const XReal& rel_tol,
                      int* level_used = nullptr);

}  // namespace jpvi
