#include "jpvi/moments.hpp"

#include <algorithm>
#include <string>

#include "jpvi/errors.hpp"
#include "jpvi/quadrature.hpp"
#include "jpvi/specfun.hpp"

namespace jpvi {

namespace {

void check_unit_interval(const XReal& t) {
  if (!(t >= 0) || !(t <= 1)) throw DomainError("t must lie in [0, 1], got " + t.to_string(20));
}

// t-derivatives of f(t) = t^p (1-t)^q at an interior point: (f, f', f'').
struct PowerDerivatives {
  XReal f, f1, f2;
};

PowerDerivatives power_derivatives(const XReal& p, const XReal& q, const XReal& t) {
  const XReal u = 1 - t;
  PowerDerivatives d;
  d.f = pow(t, p) * pow(u, q);
  const XReal g = p / t - q / u;
  const XReal g1 = -p / (t * t) - q / (u * u);
  d.f1 = d.f * g;
  d.f2 = d.f * (g * g + g1);
  return d;
}

// f^(m)(0) for f = t^p (1-t)^q, m in {1, 2}.
XReal power_derivative_at_zero(const XReal& p, const XReal& q, int m) {
  if (p > m) return XReal(0);
  if (m == 1) return p == 1 ? XReal(1) : XReal::nan();
  if (p == 2) return XReal(2);
  if (p == 1) return -2 * q;
  return XReal::nan();
}

}  // namespace

void WeightParams::validate() const {
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  if (!(beta > 0)) throw DomainError("beta must be positive");
  if (!(A >= 0)) throw DomainError("A must be nonnegative");
  if (!(A + B >= 0)) throw DomainError("A + B must be nonnegative");
  if (A.is_zero() && B.is_zero()) throw DomainError("A and B cannot both vanish");
}

WeightParams WeightParams::scaled(const XReal& c) const {
  if (!(c > 0)) throw DomainError("scale factor must be positive");
  return WeightParams{alpha, beta, A * c, B * c};
}

XReal moment(int k, const WeightParams& p, const XReal& t) {
  if (k < 0) throw DomainError("moment index must be nonnegative");
  check_unit_interval(t);
  const XReal a = p.alpha + (k + 1);
  const XReal b = p.beta + 1;
  XReal mu(0);
  if (!p.A.is_zero()) mu += p.A * exp(log_beta(a, b));
  if (!p.B.is_zero()) {
    XReal jump = p.B * tail_beta(a, b, t);
#ifndef NDEBUG
    if (t > 0) {
      XReal other = moment_hypergeometric(k, WeightParams{p.alpha, p.beta, XReal(0), p.B}, t);
      if (abs(jump - other) > ldexp(max(abs(jump), abs(other)), -working_precision() / 2)) {
        throw Error("moment: Beta and 2F1 representations disagree at k = " + std::to_string(k));
      }
    }
#endif
    mu += jump;
  }
  return mu;
}

XReal moment_hypergeometric(int k, const WeightParams& p, const XReal& t) {
  if (k < 0) throw DomainError("moment index must be nonnegative");
  if (!(t > 0) || !(t <= 1)) throw DomainError("2F1 moment form needs t in (0, 1]");
  XReal mu(0);
  if (!p.A.is_zero()) mu += p.A * exp(log_beta(p.alpha + (k + 1), p.beta + 1));
  if (!p.B.is_zero() && t < 1) {
    const XReal ak = p.alpha + k;
    const XReal z = 1 - 1 / t;
    mu += p.B / (1 + p.beta) * pow(1 - t, p.beta + 1) * pow(t, ak) *
          hyp2f1(-ak, XReal(1), p.beta + 2, z);
  }
  return mu;
}

MomentTable moment_table(int n, const WeightParams& p, const XReal& t) {
  if (n < 1) throw DomainError("moment_table needs n >= 1");
  p.validate();
  check_unit_interval(t);
  const int count = 2 * n - 1;
  MomentTable tab;
  tab.t = t;
  tab.params = p;
  tab.mu.reserve(count);
  tab.mu1.reserve(count);
  tab.mu2.reserve(count);
  tab.mu3.reserve(count);
  for (int k = 0; k < count; ++k) {
    tab.mu.push_back(moment(k, p, t));
    if (p.B.is_zero()) {
      tab.mu1.emplace_back(0);
      tab.mu2.emplace_back(0);
      tab.mu3.emplace_back(0);
      continue;
    }
    const XReal pk = p.alpha + k;
    if (t.is_zero()) {
      tab.mu1.emplace_back(0);
      tab.mu2.push_back(-p.B * power_derivative_at_zero(pk, p.beta, 1));
      tab.mu3.push_back(-p.B * power_derivative_at_zero(pk, p.beta, 2));
    } else if (t == 1) {
      tab.mu1.push_back(XReal::nan());
      tab.mu2.push_back(XReal::nan());
      tab.mu3.push_back(XReal::nan());
    } else {
      PowerDerivatives d = power_derivatives(pk, p.beta, t);
      tab.mu1.push_back(-p.B * d.f);
      tab.mu2.push_back(-p.B * d.f1);
      tab.mu3.push_back(-p.B * d.f2);
    }
  }
  return tab;
}

XMatrix hankel_matrix(const std::vector<XReal>& row, int n) {
  if (static_cast<int>(row.size()) < 2 * n - 1) throw DomainError("hankel_matrix: too few moments");
  return XMatrix::symmetric(n, [&](int i, int j) { return row[static_cast<size_t>(i + j)]; });
}

HankelResult hankel(int n, const WeightParams& p, const XReal& t) {
  if (n < 1) throw DomainError("hankel needs n >= 1");
  p.validate();
  check_unit_interval(t);
  return with_precision_escalation([&] {
    const MomentTable tab = moment_table(n, p, t);
    const SpdFactorization f = factor_spd(hankel_matrix(tab.mu, n));
    HankelResult r;
    r.n = n;
    r.t = t;
    r.precision_bits = working_precision();
    r.log_det = f.log_det();
    if (t == 1) {
      r.d_logdet = {XReal::nan(), XReal::nan(), XReal::nan()};
      r.H = r.H1 = r.H2 = XReal::nan();
      return r;
    }
    r.d_logdet = logdet_derivatives(f, hankel_matrix(tab.mu1, n), hankel_matrix(tab.mu2, n),
                                    hankel_matrix(tab.mu3, n));
    const auto& d = r.d_logdet;
    if (t.is_zero()) {
      r.H = XReal(0);
      r.H1 = -d.first;
      r.H2 = 2 * d.first - 2 * d.second;
      return r;
    }
    const XReal tt = t * (t - 1);
    r.H = tt * d.first;
    r.H1 = (2 * t - 1) * d.first + tt * d.second;
    r.H2 = 2 * d.first + 2 * (2 * t - 1) * d.second + tt * d.third;
    return r;
  });
}

XReal log_hankel_det(int n, const WeightParams& p, const XReal& t) {
  if (n < 1) throw DomainError("log_hankel_det needs n >= 1");
  p.validate();
  check_unit_interval(t);
  return with_precision_escalation([&] {
    const MomentTable tab = moment_table(n, p, t);
    return factor_spd(hankel_matrix(tab.mu, n)).log_det();
  });
}

namespace {

struct WeightedNodes {
  std::vector<XReal> x;
  std::vector<XReal> w;
};

void append_piece(const WeightParams& p, const XReal& a, const XReal& b, const XReal& jump, int level,
                  WeightedNodes& out) {
  if (!(a < b) || jump.is_zero()) return;
  const FixedRule rule = tanh_sinh_fixed_rule(a, b, level);
  for (size_t i = 0; i < rule.x.size(); ++i) {
    const XReal x = a + rule.from_left[i];
    const XReal one_minus_x = (1 - b) + rule.to_right[i];
    XReal w = rule.weight[i] * jump * pow(x, p.alpha) * pow(one_minus_x, p.beta);
    if (w.is_zero()) continue;
    out.x.push_back(x);
    out.w.push_back(std::move(w));
  }
}

WeightedNodes weighted_nodes(const WeightParams& p, const XReal& t, int level) {
  WeightedNodes nodes;
  append_piece(p, XReal(0), t, p.A, level, nodes);
  append_piece(p, t, XReal(1), p.A + p.B, level, nodes);

  // Nodes whose weight is negligible against the total mass cannot affect
  // the n-fold sum (the Vandermonde factor is bounded by 1 on the cube).
  XReal total(0);
  for (const auto& w : nodes.w) total += w;
  const XReal cutoff = ldexp(total, -working_precision());
  WeightedNodes kept;
  for (size_t i = 0; i < nodes.x.size(); ++i) {
    if (nodes.w[i] > cutoff) {
      kept.x.push_back(std::move(nodes.x[i]));
      kept.w.push_back(std::move(nodes.w[i]));
    }
  }
  return kept;
}

std::vector<XReal> discrete_moments(const WeightedNodes& nodes, int count) {
  std::vector<XReal> m(static_cast<size_t>(count), XReal(0));
  for (size_t i = 0; i < nodes.x.size(); ++i) {
    XReal term = nodes.w[i];
    for (int k = 0; k < count; ++k) {
      m[static_cast<size_t>(k)] += term;
      term *= nodes.x[i];
    }
  }
  return m;
}

}  // namespace

XReal multiint_oracle(int n, const WeightParams& p, const XReal& t, const XReal& rel_tol,
                      int* level_used) {
  if (n < 1 || n > 3) throw DomainError("multiint_oracle supports n in {1, 2, 3}");
  p.validate();
  check_unit_interval(t);
  if (!(rel_tol > 0)) throw DomainError("multiint_oracle tolerance must be positive");

  constexpr int kFirstLevel = 2;
  constexpr int kLastLevel = 8;
  WeightedNodes nodes;
  std::vector<XReal> previous;
  int level = kFirstLevel;
  for (;; ++level) {
    if (level > kLastLevel) throw NotConverged("multiint_oracle: tensor rule did not settle");
    nodes = weighted_nodes(p, t, level);
    std::vector<XReal> m = discrete_moments(nodes, 2 * n - 1);
    bool settled = !previous.empty();
    for (size_t k = 0; settled && k < m.size(); ++k) {
      if (abs(m[k] - previous[k]) > rel_tol * abs(m[k])) settled = false;
    }
    if (settled) break;
    previous = std::move(m);
  }
  if (level_used != nullptr) *level_used = level;

  const auto& x = nodes.x;
  const auto& w = nodes.w;
  const size_t m = x.size();
  if (n == 1) {
    XReal s(0);
    for (const auto& wi : w) s += wi;
    return s;
  }
  std::vector<XReal> d2(m * m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      d2[i * m + j] = square(x[i] - x[j]);
      d2[j * m + i] = d2[i * m + j];
    }
  }
  // Tuples with a repeated node vanish, so the symmetric n-fold sum over all
  // tuples equals n! times the sum over strictly increasing ones.
  XReal total(0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      XReal pair = w[i] * w[j] * d2[i * m + j];
      if (n == 2) {
        total += pair;
        continue;
      }
      XReal inner(0);
      for (size_t k = j + 1; k < m; ++k) inner += w[k] * d2[i * m + k] * d2[j * m + k];
      total += pair * inner;
    }
  }
  return total;
}

}  // namespace jpvi
