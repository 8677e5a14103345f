#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "jpvi/xreal.hpp"

namespace jpvi {

enum class QuadKind { tanh_sinh, gauss_legendre };

struct QuadRule {
  QuadKind kind = QuadKind::tanh_sinh;
  /// Target relative error; must be positive.
  XReal target_rel_tol;
  /// tanh-sinh: step h = 2^-level. Gauss-Legendre: 16 * 2^level points.
  int max_levels = 12;

  /// Default rule for the working precision: tanh-sinh, tolerance
  /// 2^(-bits/2).
  static QuadRule standard();
  static QuadRule tanh_sinh(XReal tol, int max_levels = 12);
  static QuadRule gauss_legendre(XReal tol, int max_levels = 6);
};

/// Abscissa handed to integrands together with its distances to both
/// interval ends, each computed without cancellation.
struct QuadPoint {
  const XReal& x;
  const XReal& from_left;  // x - a
  const XReal& to_right;   // b - x
};

struct QuadResult {
  XReal value;
  XReal error_estimate;
  bool converged = false;
  int levels_used = 0;
};

using Integrand = std::function<XReal(const QuadPoint&)>;
/// Writes `out.size()` integrand components at the point.
using VectorIntegrand = std::function<void(const QuadPoint&, std::span<XReal> out)>;

/// Integral of f over [a, b]. Never throws for non-convergence: the result
/// carries converged = false instead.
QuadResult integrate(const Integrand& f, const XReal& a, const XReal& b,
                     const QuadRule& rule = QuadRule::standard());
QuadResult integrate(const std::function<XReal(const XReal&)>& f, const XReal& a,
                     const XReal& b, const QuadRule& rule = QuadRule::standard());

/// Integrates `count` functions sharing one set of abscissae. Convergence is
/// judged per component relative to the integral of its absolute value.
std::vector<QuadResult> integrate_many(const VectorIntegrand& f, std::size_t count,
                                       const XReal& a, const XReal& b,
                                       const QuadRule& rule = QuadRule::standard());

/// A fixed tanh-sinh rule on [a, b] at one level, exposed so tensor-product
/// integrators can reuse the same abscissae on every axis.
struct FixedRule {
  std::vector<XReal> x;
  std::vector<XReal> from_left;
  std::vector<XReal> to_right;
  std::vector<XReal> weight;
};
FixedRule tanh_sinh_fixed_rule(const XReal& a, const XReal& b, int level);

/// Gauss-Legendre nodes and weights on [-1, 1] at the working precision.
void gauss_legendre_nodes(int npoints, std::vector<XReal>& nodes, std::vector<XReal>& weights);

}  // namespace jpvi
