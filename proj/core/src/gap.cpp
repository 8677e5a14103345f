#include "jpvi/gap.hpp"

#include "jpvi/errors.hpp"
#include "jpvi/linalg.hpp"
#include "jpvi/moments.hpp"
#include "jpvi/orthopoly.hpp"
#include "jpvi/quadrature.hpp"
#include "jpvi/specfun.hpp"

namespace jpvi {

namespace {

WeightParams jump_only(const XReal& alpha, const XReal& beta) {
  return WeightParams{alpha, beta, XReal(0), XReal(1)};
}

void check_gap_args(int n, const XReal& t) {
  if (n < 1) throw DomainError("gap needs n >= 1");
  if (!(t >= 0) || !(t < 1)) throw DomainError("gap needs t in [0, 1)");
}

}  // namespace

XReal log_gap_hankel(int n, const XReal& alpha, const XReal& beta, const XReal& t) {
  check_gap_args(n, t);
  const WeightParams p = jump_only(alpha, beta);
  if (t.is_zero()) return XReal(0);
  return log_hankel_det(n, p, t) - log_hankel_det(n, p, XReal(0));
}

XReal gap_hankel(int n, const XReal& alpha, const XReal& beta, const XReal& t) {
  return exp(log_gap_hankel(n, alpha, beta, t));
}

XReal log_gap_gram(int n, const XReal& alpha, const XReal& beta, const XReal& t) {
  check_gap_args(n, t);
  if (t.is_zero()) return XReal(0);
  const WeightParams p0{alpha, beta, XReal(1), XReal(0)};
  return with_precision_escalation([&] {
    const OPSystem sys = build_system(std::max(n - 1, 1), p0, XReal(0));
    std::vector<std::pair<int, int>> idx;
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) idx.emplace_back(j, k);
    }
    const QuadRule rule = QuadRule::tanh_sinh(ldexp(XReal(1), -3 * working_precision() / 4), 14);
    std::vector<XReal> vals(static_cast<size_t>(n));
    auto res = integrate_many(
        [&](const QuadPoint& q, std::span<XReal> out) {
          const XReal& x = q.from_left;
          const XReal w = w0(p0, x);
          vals[0] = XReal(1);
          if (n > 1) vals[1] = x - sys.alpha(0);
          for (int j = 1; j + 1 < n; ++j) vals[j + 1] = (x - sys.alpha(j)) * vals[j] - sys.beta(j) * vals[j - 1];
          for (size_t c = 0; c < idx.size(); ++c) out[c] = vals[idx[c].first] * vals[idx[c].second] * w;
        },
        idx.size(), XReal(0), t, rule);
    XMatrix m(n, n);
    for (size_t c = 0; c < idx.size(); ++c) {
      if (!res[c].converged) throw NotConverged("gap_gram: Gram entry quadrature did not converge");
      const auto [j, k] = idx[c];
      XReal g = res[c].value / sqrt(sys.h[j] * sys.h[k]);
      m(j, k) = (j == k ? XReal(1) : XReal(0)) - g;
      m(k, j) = m(j, k);
    }
    return factor_spd(m).log_det();
  });
}

XReal gap_gram(int n, const XReal& alpha, const XReal& beta, const XReal& t) {
  return exp(log_gap_gram(n, alpha, beta, t));
}

GapResult gap(int n, const XReal& alpha, const XReal& beta, const XReal& t) {
  GapResult g;
  g.n = n;
  g.t = t;
  g.log_prob_hankel = log_gap_hankel(n, alpha, beta, t);
  g.prob_hankel = exp(g.log_prob_hankel);
  g.prob_gram = gap_gram(n, alpha, beta, t);
  g.agreement = abs(g.prob_hankel - g.prob_gram) / max(g.prob_hankel, g.prob_gram);
  return g;
}

XReal log_F(const XReal& alpha, const XReal& beta) {
  if (!(alpha >= 0) || !(beta > 0)) throw DomainError("log_F needs alpha >= 0, beta > 0");
  const XReal ab = alpha + beta;
  const XReal half = (ab + 1) / 2;
  return log_gamma(half) + 2 * log_barnes_g(half) + 2 * log_barnes_g(1 + ab / 2) -
         log_barnes_g(ab + 1) - log_barnes_g(alpha + 1) - log_barnes_g(beta + 1);
}

XReal log_K(const XReal& alpha, const XReal& beta, int n) {
  if (n < 1) throw DomainError("log_K needs n >= 1");
  if (!(alpha >= 0) || !(beta > 0)) throw DomainError("log_K needs alpha >= 0, beta > 0");
  const XReal ab = alpha + beta;
  const XReal half = n + (ab + 1) / 2;
  return log_barnes_g(XReal(n + 1)) + log_barnes_g(n + alpha + 1) + log_barnes_g(n + beta + 1) +
         log_barnes_g(n + ab + 1) - 2 * log_barnes_g(half) - 2 * log_barnes_g(n + 1 + ab / 2) -
         log_gamma(half);
}

XReal log_dn0_closed_form(int n, const XReal& alpha, const XReal& beta) {
  if (n < 1) throw DomainError("log_dn0_closed_form needs n >= 1");
  if (!(alpha > 0) || !(beta > 0)) throw DomainError("log_dn0_closed_form needs alpha, beta > 0");
  return -2 * n * (n + alpha + beta) * log2_constant() + n * log(2 * pi()) + log_F(alpha, beta) +
         log_K(alpha, beta, n);
}

AsymptoticConstant asymptotic_constant(int n, const XReal& alpha, const XReal& beta) {
  if (n < 1) throw DomainError("asymptotic_constant needs n >= 1");
  if (!(alpha >= 0) || !(beta > 0)) throw DomainError("asymptotic_constant needs alpha >= 0, beta > 0");
  AsymptoticConstant a;
  a.n = n;
  a.alpha = alpha;
  a.beta = beta;
  a.exponent = n * (n + beta);
  const XReal zero(0);
  const XReal log_c = 2 * n * alpha * log2_constant() + log_F(zero, beta) + log_K(zero, beta, n) -
                      log_F(alpha, beta) - log_K(alpha, beta, n);
  a.C = exp(log_c);
  return a;
}

AsymptoticCheck asymptotic_check(int n, const XReal& alpha, const XReal& beta,
                                 const std::vector<XReal>& t_list) {
  if (t_list.empty()) throw DomainError("asymptotic_check needs at least one t");
  for (size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0) || !(t_list[i] < 1)) throw DomainError("asymptotic_check: t must lie in (0, 1)");
    if (i > 0 && !(t_list[i] > t_list[i - 1])) throw DomainError("asymptotic_check: t_list must increase");
  }
  AsymptoticCheck out;
  out.closed_form = asymptotic_constant(n, alpha, beta);
  std::vector<XReal> u;
  for (const auto& t : t_list) {
    const XReal one_minus_t = 1 - t;
    u.push_back(one_minus_t);
    out.samples.push_back(exp(log_gap_hankel(n, alpha, beta, t) - out.closed_form.exponent * log(one_minus_t)));
  }
  // Neville's scheme evaluated at u = 0.
  std::vector<XReal> p = out.samples;
  const size_t m = p.size();
  for (size_t level = 1; level < m; ++level) {
    for (size_t i = 0; i + level < m; ++i) {
      const size_t j = i + level;
      p[i] = (u[j] * p[i] - u[i] * p[i + 1]) / (u[j] - u[i]);
    }
  }
  out.C_est = p[0];
  out.rel_err = abs(out.C_est - out.closed_form.C) / out.closed_form.C;
  return out;
}

}  // namespace jpvi
