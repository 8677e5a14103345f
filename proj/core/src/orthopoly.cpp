#include "jpvi/orthopoly.hpp"

#include <string>

#include "jpvi/errors.hpp"
#include "jpvi/linalg.hpp"

namespace jpvi {

const XReal& OPSystem::alpha(int j) const {
  if (j < 0 || j >= static_cast<int>(alpha_rec.size())) throw DomainError("alpha index out of range");
  return alpha_rec[static_cast<size_t>(j)];
}

const XReal& OPSystem::beta(int j) const {
  if (j < 1 || j >= static_cast<int>(beta_rec.size())) throw DomainError("beta index out of range");
  return beta_rec[static_cast<size_t>(j)];
}

OPSystem build_system(int n_max, const WeightParams& p, const XReal& t) {
  if (n_max < 1) throw DomainError("build_system needs n_max >= 1");
  p.validate();
  if (!(t >= 0) || !(t < 1)) throw DomainError("build_system needs t in [0, 1)");

  OPSystem sys = with_precision_escalation([&] {
    const int size = n_max + 1;
    std::vector<XReal> mu;
    mu.reserve(static_cast<size_t>(2 * size - 1));
    for (int k = 0; k < 2 * size - 1; ++k) mu.push_back(moment(k, p, t));
    const SpdFactorization f = factor_spd(hankel_matrix(mu, size));
    const XMatrix linv = f.unit_lower_inverse();

    OPSystem s;
    s.n_max = n_max;
    s.t = t;
    s.params = p;
    s.precision_bits = working_precision();
    for (int j = 0; j < size; ++j) {
      std::vector<XReal> c;
      c.reserve(static_cast<size_t>(j + 1));
      for (int k = 0; k <= j; ++k) c.push_back(linv(j, k));
      s.coeffs.push_back(std::move(c));
      s.h.push_back(f.pivots()[static_cast<size_t>(j)]);
      s.p1.push_back(j == 0 ? XReal(0) : linv(j, j - 1));
    }
    s.beta_rec.emplace_back(0);
    for (int j = 1; j < size; ++j) s.beta_rec.push_back(s.h[j] / s.h[j - 1]);
    for (int j = 0; j < n_max; ++j) s.alpha_rec.push_back(s.p1[j] - s.p1[j + 1]);
    return s;
  });

#ifndef NDEBUG
  const XReal defect = orthogonality_defect(sys);
  if (defect > ldexp(XReal(1), -working_precision() / 4)) {
    throw Error("build_system: orthogonality check failed, defect " + defect.to_string(6));
  }
#endif
  return sys;
}

PolyValue eval_poly(const OPSystem& sys, int n, const XReal& z) {
  if (n < 0 || n > sys.n_max) throw DomainError("eval_poly degree out of range");
  const auto& c = sys.coeffs[static_cast<size_t>(n)];
  PolyValue v{XReal(0), XReal(0), XReal(0)};
  for (int k = n; k >= 0; --k) {
    v.d2 = v.d2 * z + 2 * v.d1;
    v.d1 = v.d1 * z + v.value;
    v.value = v.value * z + c[static_cast<size_t>(k)];
  }
  return v;
}

XReal w0(const WeightParams& p, const XReal& x) { return pow(x, p.alpha) * pow(1 - x, p.beta); }

namespace {

// P_0..P_upto at x by the three-term recurrence.
void recurrence_values(const OPSystem& sys, int upto, const XReal& x, std::vector<XReal>& out) {
  out.resize(static_cast<size_t>(upto + 1));
  out[0] = XReal(1);
  if (upto >= 1) out[1] = x - sys.alpha_rec[0];
  for (int j = 1; j < upto; ++j) {
    out[j + 1] = (x - sys.alpha_rec[j]) * out[j] - sys.beta_rec[j] * out[j - 1];
  }
}

// Integrates f over [0, t] and [t, 1], each piece weighted by its jump
// factor; `g` receives the point, 1 - x, and the weight x^alpha (1-x)^beta
// times the jump, and fills the components.
template <class G>
std::vector<QuadResult> integrate_split(const OPSystem& sys, std::size_t count, const QuadRule& rule,
                                        G&& g) {
  const WeightParams& p = sys.params;
  const XReal& t = sys.t;
  std::vector<QuadResult> total(count);
  for (auto& r : total) {
    r.value = XReal(0);
    r.error_estimate = XReal(0);
    r.converged = true;
  }
  auto piece = [&](const XReal& a, const XReal& b, const XReal& jump) {
    if (!(a < b) || jump.is_zero()) return;
    auto part = integrate_many(
        [&](const QuadPoint& q, std::span<XReal> out) {
          const XReal x = a + q.from_left;
          const XReal one_minus_x = (1 - b) + q.to_right;
          g(x, one_minus_x, jump * pow(x, p.alpha) * pow(one_minus_x, p.beta), out);
        },
        count, a, b, rule);
    for (std::size_t c = 0; c < count; ++c) {
      total[c].value += part[c].value;
      total[c].error_estimate += part[c].error_estimate;
      total[c].converged = total[c].converged && part[c].converged;
      total[c].levels_used = std::max(total[c].levels_used, part[c].levels_used);
    }
  };
  piece(XReal(0), t, p.A);
  piece(t, XReal(1), p.A + p.B);
  return total;
}

}  // namespace

XReal orthogonality_defect(const OPSystem& sys, const QuadRule& rule) {
  const int m = sys.n_max + 1;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  }
  if (pairs.empty()) return XReal(0);
  std::vector<XReal> vals;
  auto res = integrate_split(sys, pairs.size(), rule,
                             [&](const XReal& x, const XReal&, const XReal& w, std::span<XReal> out) {
                               recurrence_values(sys, sys.n_max, x, vals);
                               for (size_t c = 0; c < pairs.size(); ++c) {
                                 out[c] = vals[pairs[c].first] * vals[pairs[c].second] * w;
                               }
                             });
  XReal worst(0);
  for (size_t c = 0; c < pairs.size(); ++c) {
    XReal d = abs(res[c].value) / sqrt(sys.h[pairs[c].first] * sys.h[pairs[c].second]);
    if (d > worst) worst = d;
  }
  return worst;
}

AuxQuantities aux_quantities(const OPSystem& sys, int n) {
  if (n < 0 || n > sys.n_max) throw DomainError("aux_quantities: n out of range");
  const WeightParams& p = sys.params;
  const XReal& t = sys.t;
  AuxQuantities a;
  a.n = n;
  a.t = t;
  const XReal bw = p.B * w0(p, t);
  const XReal pn = eval_poly(sys, n, t).value;
  a.R = bw * pn * pn / sys.h[n];
  a.r = n == 0 ? XReal(0) : bw * pn * eval_poly(sys, n - 1, t).value / sys.h[n - 1];
  a.x = (2 * n + 1) + p.alpha + p.beta + t * a.R;
  a.y = t * a.r - sys.p1[n];
  return a;
}

std::vector<AuxQuantities> aux_quantities_with_quadrature(const OPSystem& sys, int upto,
                                                          const QuadRule& rule) {
  if (upto < 0 || upto > sys.n_max) throw DomainError("aux_quantities_with_quadrature: upto out of range");
  // Components: 2j -> P_j^2, 2j+1 -> P_j P_{j-1} (unused for j = 0).
  const std::size_t count = static_cast<std::size_t>(2 * (upto + 1));
  std::vector<XReal> vals;
  auto res = integrate_split(
      sys, count, rule,
      [&](const XReal& x, const XReal& one_minus_x, const XReal& w, std::span<XReal> out) {
        recurrence_values(sys, upto, x, vals);
        const XReal wt = w / one_minus_x;
        out[0] = wt;
        out[1] = XReal(0);
        for (int j = 1; j <= upto; ++j) {
          const XReal pw = vals[j] * wt;
          out[2 * j] = pw * vals[j];
          out[2 * j + 1] = pw * vals[j - 1];
        }
      });
  std::vector<AuxQuantities> out;
  for (int j = 0; j <= upto; ++j) {
    if (!res[2 * j].converged || (j > 0 && !res[2 * j + 1].converged)) {
      throw NotConverged("quadrature for x_" + std::to_string(j) + " / y_" + std::to_string(j) +
                         " did not converge");
    }
    AuxQuantities a = aux_quantities(sys, j);
    a.x_quad = sys.params.beta / sys.h[j] * res[2 * j].value;
    a.y_quad = j == 0 ? XReal(0) : sys.params.beta / sys.h[j - 1] * res[2 * j + 1].value;
    out.push_back(std::move(a));
  }
  return out;
}

XReal v0_prime(const WeightParams& p, const XReal& z) { return -p.alpha / z - p.beta / (z - 1); }

LadderData ladder_eval(const AuxQuantities& aux, const XReal& z) {
  if (z.is_zero() || z == 1 || z == aux.t) throw PoleEvaluation("ladder functions have poles at 0, 1 and t");
  const XReal zt = z - aux.t;
  const XReal z1 = z - 1;
  LadderData d;
  d.n = aux.n;
  d.z = z;
  const XReal a0 = aux.x - aux.R;
  const XReal b0 = aux.y - aux.r - aux.n;
  d.A_val = aux.R / zt - aux.x / z1 + a0 / z;
  d.B_val = aux.r / zt - aux.y / z1 + b0 / z;
  d.A_prime = -aux.R / (zt * zt) + aux.x / (z1 * z1) - a0 / (z * z);
  d.B_prime = -aux.r / (zt * zt) + aux.y / (z1 * z1) - b0 / (z * z);
  return d;
}

LadderResiduals ladder_residuals(const OPSystem& sys, const AuxQuantities& prev,
                                 const AuxQuantities& cur, const XReal& z) {
  const int n = cur.n;
  if (n < 1 || prev.n != n - 1) throw DomainError("ladder_residuals needs consecutive n-1, n with n >= 1");
  const LadderData ln = ladder_eval(cur, z);
  const LadderData lp = ladder_eval(prev, z);
  const PolyValue pn = eval_poly(sys, n, z);
  const PolyValue pm = eval_poly(sys, n - 1, z);
  LadderResiduals r;
  r.lowering = scaled_difference(pn.d1, -ln.B_val * pn.value + sys.beta(n) * ln.A_val * pm.value);
  r.raising = scaled_difference(pm.d1, (ln.B_val + v0_prime(sys.params, z)) * pm.value - lp.A_val * pn.value);
  return r;
}

}  // namespace jpvi
