#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "jpvi/moments.hpp"
#include "jpvi/xreal.hpp"

namespace jpvi {

struct SigmaTrace {
  int n = 0;
  XReal t;
  XReal d1;
  XReal d2;
  std::array<XReal, 4> nu;
  XReal H;
  XReal sigma;
  XReal sigma1;
  XReal sigma2;
  XReal lhs;
  XReal rhs;
  /// |lhs - rhs| / max(|lhs|, |rhs|, 1).
  XReal residual;
};

/// d1 = -n(n+alpha+beta) - (alpha+beta)^2/4.
XReal sigma_d1(int n, const WeightParams& p);
/// d2 = [2n(n+alpha+beta) + beta(alpha+beta)]/4.
XReal sigma_d2(int n, const WeightParams& p);
std::array<XReal, 4> sigma_nu(int n, const WeightParams& p);

/// sigma = H_n + d1 t + d2 with its derivatives from the exact Hankel
/// traces, and the defect of
///   sigma' (t(t-1) sigma'')^2 + (2 sigma'(t sigma' - sigma) - sigma'^2 - nu1 nu2 nu3 nu4)^2
///     = prod_i (sigma' + nu_i^2).
/// t = 0 returns sigma(0), sigma'(0) with the residual left NaN when
/// sigma''(0) is not finite.
SigmaTrace sigma_trace(int n, const WeightParams& p, const XReal& t);

struct PviConstants {
  XReal a;
  XReal b;
  XReal c;
  XReal d;
};

/// a = (2n+alpha+beta+1)^2/2, b = -alpha^2/2, c = beta^2/2, d = 1/2.
PviConstants pvi_constants(int n, const WeightParams& p);

struct PviState {
  int n = 0;
  PviConstants k;
  XReal t;
  XReal W;
  XReal W1;
};

/// W'' from the Painleve VI equation
///   W'' = (1/W + 1/(W-1) + 1/(W-t)) W'^2 / 2 - (1/t + 1/(t-1) + 1/(W-t)) W'
///         + W(W-1)(W-t)/(t^2 (t-1)^2) (a + b t/W^2 + c (t-1)/(W-1)^2 + d t(t-1)/(W-t)^2).
/// Throws SingularLocus when W in {0, 1, t} or t in {0, 1}.
XReal pvi_rhs(const PviState& s);

/// W = 1 - (1-t) x_n / (2n+1+alpha+beta) from the orthogonal polynomial
/// pipeline.
XReal wn_value(int n, const WeightParams& p, const XReal& t);

struct WnPoint {
  XReal W;
  XReal W1;
};

/// W_n(t) and W_n'(t) with W' by a 5-point stencil of width h (centred for
/// t > 2h, one-sided forward otherwise). t in [0, 1).
WnPoint wn_from_pipeline(int n, const WeightParams& p, const XReal& t,
                         const XReal& h = XReal(1e-6));

/// |W'' - pvi_rhs| / max(|W''|, |pvi_rhs|, 1) on the pipeline trajectory,
/// with W' and W'' by centred stencils of width h.
XReal pvi_pipeline_residual(int n, const WeightParams& p, const XReal& t,
                            const XReal& h = XReal(1e-6));

struct PviOptions {
  /// Local error tolerance per step.
  XReal local_tol = XReal(1e-20);
  /// Minimum allowed distance of W from {0, 1, t} and of t from {0, 1}.
  XReal singular_margin = XReal(1e-6);
  XReal initial_step = XReal(1e-3);
  XReal min_step = XReal(1e-40);
  long max_steps = 2000000;
};

struct PviTrajectory {
  std::vector<PviState> states;
  bool completed = false;
  /// Why the run stopped early, when it did.
  std::string stop_reason;
  long accepted_steps = 0;
  long rejected_steps = 0;
};

/// Integrates the Painleve VI equation from (t0, seed) through each point of
/// `grid` (monotone, starting beyond t0 in either direction) with an
/// embedded Dormand-Prince 5(4) pair. If the state comes within the margin
/// of a singular locus, or the step underflows, the run stops and the
/// trajectory holds the last good state with completed = false.
PviTrajectory pvi_integrate(int n, const WeightParams& p, const XReal& t0, const WnPoint& seed,
                            const std::vector<XReal>& grid, const PviOptions& opts = {});

}  // namespace jpvi
