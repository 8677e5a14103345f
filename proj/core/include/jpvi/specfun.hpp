#pragma once

#include "jpvi/xreal.hpp"

namespace jpvi {

struct SpecFunConfig {
  int precision_bits = kDefaultPrecisionBits;
  /// Relative truncation tolerance for series; at least 2^(8 - bits).
  XReal series_rel_tol;
  int max_terms = 200000;

  /// Config for the working precision with the tightest admissible
  /// tolerance.
  static SpecFunConfig for_working_precision();
  void validate() const;
};

/// Euler-Mascheroni constant, computed once per precision and cached.
XReal euler_gamma(int bits = working_precision());

/// ln Gamma(x) for x > 0.
XReal log_gamma(const XReal& x);

/// ln B(a, b) for a, b > 0.
XReal log_beta(const XReal& a, const XReal& b);

/// Gauss 2F1(a, b; c; z) on the ray z <= 0.
///
/// Sums the defining series for -1/2 <= z <= 0 and otherwise applies the
/// Pfaff transformation, which maps z into [1/3, 1). Terminating series
/// (a or b a nonpositive integer) are summed exactly.
XReal hyp2f1(const XReal& a, const XReal& b, const XReal& c, const XReal& z,
             const SpecFunConfig& cfg = SpecFunConfig::for_working_precision());

/// Defining power series, |z| < 1 (or terminating).
XReal hyp2f1_series(const XReal& a, const XReal& b, const XReal& c, const XReal& z,
                    const SpecFunConfig& cfg = SpecFunConfig::for_working_precision());

/// (1 - z)^(-a) 2F1(a, c - b; c; z / (z - 1)), z < 1.
XReal hyp2f1_pfaff(const XReal& a, const XReal& b, const XReal& c, const XReal& z,
                   const SpecFunConfig& cfg = SpecFunConfig::for_working_precision());

/// Upper tail of the Beta integral, int_t^1 x^(a-1) (1-x)^(b-1) dx, for
/// a, b > 0 and t in [0, 1].
XReal tail_beta(const XReal& a, const XReal& b, const XReal& t,
                const SpecFunConfig& cfg = SpecFunConfig::for_working_precision());

/// ln G(x) for the Barnes G-function, x > 0.
///
/// Reduces x into [1, 2] with ln G(x+1) = ln Gamma(x) + ln G(x) and
/// evaluates the Weierstrass product there. The first terms of the product
/// are summed directly; the remainder is resummed exactly as a power series
/// in x whose coefficients are Hurwitz zeta tails.
XReal log_barnes_g(const XReal& x,
                   const SpecFunConfig& cfg = SpecFunConfig::for_working_precision());

}  // namespace jpvi
