#include "jpvi/painleve.hpp"

#include <algorithm>
#include <cmath>

#include "jpvi/errors.hpp"
#include "jpvi/finite_difference.hpp"
#include "jpvi/orthopoly.hpp"

namespace jpvi {

XReal sigma_d1(int n, const WeightParams& p) {
  const XReal ab = p.alpha + p.beta;
  return -n * (n + ab) - ab * ab / 4;
}

XReal sigma_d2(int n, const WeightParams& p) {
  const XReal ab = p.alpha + p.beta;
  return (2 * n * (n + ab) + p.beta * ab) / 4;
}

std::array<XReal, 4> sigma_nu(int n, const WeightParams& p) {
  const XReal s = (2 * n + p.alpha + p.beta) / 2;
  return {(p.alpha + p.beta) / 2, (p.beta - p.alpha) / 2, s, s};
}

SigmaTrace sigma_trace(int n, const WeightParams& p, const XReal& t) {
  if (n < 1) throw DomainError("sigma_trace needs n >= 1");
  if (!(t >= 0) || !(t < 1)) throw DomainError("sigma_trace needs t in [0, 1)");
  const HankelResult hk = hankel(n, p, t);
  SigmaTrace s;
  s.n = n;
  s.t = t;
  s.d1 = sigma_d1(n, p);
  s.d2 = sigma_d2(n, p);
  s.nu = sigma_nu(n, p);
  s.H = hk.H;
  s.sigma = hk.H + s.d1 * t + s.d2;
  s.sigma1 = hk.H1 + s.d1;
  s.sigma2 = hk.H2;
  if (!s.sigma2.is_finite()) {
    s.lhs = s.rhs = s.residual = XReal::nan();
    return s;
  }
  const XReal& sg = s.sigma;
  const XReal& s1 = s.sigma1;
  const XReal nu_prod = s.nu[0] * s.nu[1] * s.nu[2] * s.nu[3];
  s.lhs = s1 * square(t * (t - 1) * s.sigma2) + square(2 * s1 * (t * s1 - sg) - s1 * s1 - nu_prod);
  s.rhs = XReal(1);
  for (const auto& v : s.nu) s.rhs *= s1 + v * v;
  s.residual = scaled_difference(s.lhs, s.rhs);
  return s;
}

PviConstants pvi_constants(int n, const WeightParams& p) {
  PviConstants k;
  k.a = square(2 * n + p.alpha + p.beta + 1) / 2;
  k.b = -(p.alpha * p.alpha) / 2;
  k.c = p.beta * p.beta / 2;
  k.d = XReal(1) / 2;
  return k;
}

XReal pvi_rhs(const PviState& s) {
  const XReal& t = s.t;
  const XReal& w = s.W;
  const XReal& w1 = s.W1;
  if (t.is_zero() || t == 1) throw SingularLocus("PVI has fixed singularities at t = 0 and t = 1");
  if (w.is_zero() || w == 1 || w == t) throw SingularLocus("W on a singular locus {0, 1, t}");
  const XReal wm1 = w - 1;
  const XReal wmt = w - t;
  const XReal tm1 = t - 1;
  const auto& k = s.k;
  return (1 / w + 1 / wm1 + 1 / wmt) * w1 * w1 / 2 - (1 / t + 1 / tm1 + 1 / wmt) * w1 +
         w * wm1 * wmt / square(t * tm1) *
             (k.a + k.b * t / (w * w) + k.c * tm1 / (wm1 * wm1) + k.d * t * tm1 / (wmt * wmt));
}

XReal wn_value(int n, const WeightParams& p, const XReal& t) {
  const OPSystem sys = build_system(n + 1, p, t);
  const AuxQuantities a = aux_quantities(sys, n);
  return 1 - (1 - t) * a.x / ((2 * n + 1) + p.alpha + p.beta);
}

WnPoint wn_from_pipeline(int n, const WeightParams& p, const XReal& t, const XReal& h) {
  if (!(t >= 0) || !(t < 1)) throw DomainError("wn_from_pipeline needs t in [0, 1)");
  if (!(h > 0) || !(t + 4 * h < 1)) throw DomainError("wn_from_pipeline: bad stencil width");
  auto w = [&](const XReal& s) { return wn_value(n, p, s); };
  WnPoint out;
  out.W = w(t);
  out.W1 = t > 2 * h ? fd_first(w, t, h) : fd_forward(w, t, h);
  return out;
}

XReal pvi_pipeline_residual(int n, const WeightParams& p, const XReal& t, const XReal& h) {
  if (!(t - 2 * h > 0) || !(t + 2 * h < 1)) throw DomainError("pvi_pipeline_residual: stencil leaves (0, 1)");
  // Five samples shared by both stencils.
  std::array<XReal, 5> v;
  for (int k = -2; k <= 2; ++k) v[static_cast<size_t>(k + 2)] = wn_value(n, p, t + k * h);
  PviState s;
  s.n = n;
  s.k = pvi_constants(n, p);
  s.t = t;
  s.W = v[2];
  s.W1 = (v[0] - 8 * v[1] + 8 * v[3] - v[4]) / (12 * h);
  const XReal w2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h);
  return scaled_difference(w2, pvi_rhs(s));
}

namespace {

// Dormand-Prince 5(4) tableau.
struct Tableau {
  std::array<XReal, 7> c;
  std::array<std::array<XReal, 6>, 7> a;
  std::array<XReal, 7> b5;
  std::array<XReal, 7> b4;
};

Tableau dopri_tableau() {
  auto q = [](long num, long den) { return XReal::ratio(num, den); };
  Tableau tb;
  tb.c = {XReal(0), q(1, 5), q(3, 10), q(4, 5), q(8, 9), XReal(1), XReal(1)};
  for (auto& row : tb.a) row.fill(XReal(0));
  tb.a[1][0] = q(1, 5);
  tb.a[2][0] = q(3, 40);
  tb.a[2][1] = q(9, 40);
  tb.a[3][0] = q(44, 45);
  tb.a[3][1] = q(-56, 15);
  tb.a[3][2] = q(32, 9);
  tb.a[4][0] = q(19372, 6561);
  tb.a[4][1] = q(-25360, 2187);
  tb.a[4][2] = q(64448, 6561);
  tb.a[4][3] = q(-212, 729);
  tb.a[5][0] = q(9017, 3168);
  tb.a[5][1] = q(-355, 33);
  tb.a[5][2] = q(46732, 5247);
  tb.a[5][3] = q(49, 176);
  tb.a[5][4] = q(-5103, 18656);
  tb.a[6][0] = q(35, 384);
  tb.a[6][2] = q(500, 1113);
  tb.a[6][3] = q(125, 192);
  tb.a[6][4] = q(-2187, 6784);
  tb.a[6][5] = q(11, 84);
  tb.b5 = {q(35, 384), XReal(0), q(500, 1113), q(125, 192), q(-2187, 6784), q(11, 84), XReal(0)};
  tb.b4 = {q(5179, 57600),   XReal(0),       q(7571, 16695), q(393, 640),
           q(-92097, 339200), q(187, 2100), q(1, 40)};
  return tb;
}

bool near_singular(const PviState& s, const XReal& margin) {
  return abs(s.t) < margin || abs(s.t - 1) < margin || abs(s.W) < margin || abs(s.W - 1) < margin ||
         abs(s.W - s.t) < margin;
}

}  // namespace

PviTrajectory pvi_integrate(int n, const WeightParams& p, const XReal& t0, const WnPoint& seed,
                            const std::vector<XReal>& grid, const PviOptions& opts) {
  if (n < 1) throw DomainError("pvi_integrate needs n >= 1");
  if (!(t0 > 0) || !(t0 < 1)) throw DomainError("pvi_integrate needs t0 in (0, 1)");
  if (grid.empty()) throw DomainError("pvi_integrate needs a non-empty output grid");
  if (!(opts.local_tol > 0)) throw DomainError("local tolerance must be positive");
  const int dir = grid.front() > t0 ? 1 : -1;
  XReal prev = t0;
  for (const auto& g : grid) {
    if (!(g > 0) || !(g < 1)) throw DomainError("output grid must lie in (0, 1)");
    if ((dir > 0 && !(g > prev)) || (dir < 0 && !(g < prev))) {
      throw DomainError("output grid must be strictly monotone away from t0");
    }
    prev = g;
  }

  const Tableau tb = dopri_tableau();
  PviState cur;
  cur.n = n;
  cur.k = pvi_constants(n, p);
  cur.t = t0;
  cur.W = seed.W;
  cur.W1 = seed.W1;

  PviTrajectory traj;
  if (near_singular(cur, opts.singular_margin)) {
    traj.stop_reason = "SingularLocus: seed within margin of a singular locus";
    traj.states.push_back(cur);
    return traj;
  }

  XReal h = abs(opts.initial_step) * dir;
  std::array<XReal, 7> kw, kv;  // stages for W and W'
  for (const auto& target : grid) {
    while (!(cur.t == target)) {
      if (traj.accepted_steps + traj.rejected_steps >= opts.max_steps) {
        traj.stop_reason = "StepUnderflow: step budget exhausted";
        traj.states.push_back(cur);
        return traj;
      }
      bool last = false;
      XReal unclipped = h;
      if ((dir > 0 && cur.t + h >= target) || (dir < 0 && cur.t + h <= target)) {
        h = target - cur.t;
        last = true;
      }
      bool singular = false;
      for (int i = 0; i < 7 && !singular; ++i) {
        PviState st = cur;
        st.t = cur.t + tb.c[i] * h;
        for (int j = 0; j < i; ++j) {
          if (tb.a[i][j].is_zero()) continue;
          st.W += h * tb.a[i][j] * kw[j];
          st.W1 += h * tb.a[i][j] * kv[j];
        }
        if (near_singular(st, opts.singular_margin)) {
          singular = true;
          break;
        }
        kw[i] = st.W1;
        kv[i] = pvi_rhs(st);
      }
      if (singular) {
        if (abs(h) <= opts.min_step) {
          traj.stop_reason = "SingularLocus: trajectory reached the margin of {0, 1, t}";
          traj.states.push_back(cur);
          return traj;
        }
        h /= 4;
        ++traj.rejected_steps;
        continue;
      }
      XReal w5 = cur.W, v5 = cur.W1, ew(0), ev(0);
      for (int i = 0; i < 7; ++i) {
        w5 += h * tb.b5[i] * kw[i];
        v5 += h * tb.b5[i] * kv[i];
        ew += h * (tb.b5[i] - tb.b4[i]) * kw[i];
        ev += h * (tb.b5[i] - tb.b4[i]) * kv[i];
      }
      const XReal err = max(abs(ew) / (opts.local_tol * max(XReal(1), abs(w5))),
                            abs(ev) / (opts.local_tol * max(XReal(1), abs(v5))));
      const double e = std::max(err.to_double(), 1e-300);
      const double factor = std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
      if (err <= 1) {
        cur.t = last ? target : cur.t + h;
        cur.W = std::move(w5);
        cur.W1 = std::move(v5);
        ++traj.accepted_steps;
        if (near_singular(cur, opts.singular_margin)) {
          traj.stop_reason = "SingularLocus: trajectory reached the margin of {0, 1, t}";
          traj.states.push_back(cur);
          return traj;
        }
        h = last ? max(abs(unclipped), abs(h * factor)) * dir : h * factor;
      } else {
        ++traj.rejected_steps;
        h *= factor;
      }
      if (abs(h) < opts.min_step) {
        traj.stop_reason = "StepUnderflow: step size fell below the minimum";
        traj.states.push_back(cur);
        return traj;
      }
    }
    traj.states.push_back(cur);
  }
  traj.completed = true;
  return traj;
}

}  // namespace jpvi
