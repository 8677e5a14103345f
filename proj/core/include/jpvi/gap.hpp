#pragma once

#include <vector>

#include "jpvi/xreal.hpp"

namespace jpvi {

/// Probability that no eigenvalue of the n-point Jacobi ensemble lies in
/// [0, t], by two independent routes.
struct GapResult {
  int n = 0;
  XReal t;
  XReal log_prob_hankel;
  XReal prob_hankel;
  XReal prob_gram;
  /// |prob_hankel - prob_gram| / max(prob_hankel, prob_gram).
  XReal agreement;
};

/// ln(D_n(t) / D_n(0)) for the weight with A = 0, B = 1. t in [0, 1).
XReal log_gap_hankel(int n, const XReal& alpha, const XReal& beta, const XReal& t);
XReal gap_hankel(int n, const XReal& alpha, const XReal& beta, const XReal& t);

/// ln det(I - G) with G_jk = int_0^t phi_j phi_k, phi_j the orthonormal
/// polynomials of x^alpha (1-x)^beta times the square root of that weight.
XReal log_gap_gram(int n, const XReal& alpha, const XReal& beta, const XReal& t);
XReal gap_gram(int n, const XReal& alpha, const XReal& beta, const XReal& t);

GapResult gap(int n, const XReal& alpha, const XReal& beta, const XReal& t);

/// ln F(alpha, beta) and ln K(alpha, beta, n) of the Barnes G asymptotic
/// formula; alpha >= 0, beta > 0.
XReal log_F(const XReal& alpha, const XReal& beta);
XReal log_K(const XReal& alpha, const XReal& beta, int n);

/// ln D_n(0) = -2n(n+alpha+beta) ln 2 + n ln(2 pi) + ln F + ln K.
XReal log_dn0_closed_form(int n, const XReal& alpha, const XReal& beta);

struct AsymptoticConstant {
  int n = 0;
  XReal alpha;
  XReal beta;
  /// n(n + beta).
  XReal exponent;
  XReal C;
};

/// gap(t) ~ C (1-t)^(n(n+beta)) as t -> 1-, with
/// C = 2^(2n alpha) F(0,beta) K(0,beta,n) / (F(alpha,beta) K(alpha,beta,n)).
AsymptoticConstant asymptotic_constant(int n, const XReal& alpha, const XReal& beta);

struct AsymptoticCheck {
  AsymptoticConstant closed_form;
  /// c(t) = gap(t) / (1-t)^(n(n+beta)) at each t.
  std::vector<XReal> samples;
  XReal C_est;
  /// |C_est - C| / C.
  XReal rel_err;
};

/// Extrapolates c(t) to t = 1 by a Neville polynomial in (1 - t) through
/// all samples. t_list strictly increasing inside (0, 1).
AsymptoticCheck asymptotic_check(int n, const XReal& alpha, const XReal& beta,
                                 const std::vector<XReal>& t_list);

}  // namespace jpvi
