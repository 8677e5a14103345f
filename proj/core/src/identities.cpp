#include "jpvi/identities.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "jpvi/errors.hpp"
#include "jpvi/finite_difference.hpp"

namespace jpvi {

namespace {

const std::vector<std::string> kTags = {
    "s1.pole_t",          "s1.pole_1",
    "s1.pole_0",          "s2p.pole_t",
    "s2p.pole_1",         "s2p.pole_0",
    "s2p.cross",          "sum.R",
    "sum.x",              "sum.R_minus_x",
    "sum.R_minus_x.consistent", "sum.R_logdet",
    "s2.pole_t",          "s2.pole_1",
    "s2.pole_0",          "aux.x_from_R",
    "aux.alpha_from_y_r", "aux.p1_from_y_r",
    "coef.alpha",         "coef.beta_y_r",
    "coef.beta_p1",       "coef.beta_p1_prime",
    "H.from_y_r",         "H.from_p1",
    "H.r_from_dH",        "H.y_from_H",
    "R.from_l_k",         "R.inverse_from_l",
    "sigma.squared",      "x.from_ltilde_k",
    "x.inverse_from_ltilde", "r.difference_dx",
    "r.from_x_dx_y",
};

const std::set<std::string> kFdTags = {
    "coef.beta_p1_prime", "R.from_l_k",       "R.inverse_from_l", "sigma.squared",
    "x.from_ltilde_k",    "x.inverse_from_ltilde", "r.difference_dx", "r.from_x_dx_y",
};

// Entries that divide by t and have no meaning in the t = 0 limit.
const std::set<std::string> kSingularAtZero = {"sum.R", "sum.R_minus_x", "sum.R_minus_x.consistent",
                                               "r.from_x_dx_y"};

struct RouteTwo {
  XReal x;
  XReal y;
  XReal p1;
};

RouteTwo route_two(int n, const WeightParams& p, const XReal& t) {
  const OPSystem sys = build_system(n + 1, p, t);
  AuxQuantities a = aux_quantities(sys, n);
  return RouteTwo{std::move(a.x), std::move(a.y), sys.p1[n]};
}

}  // namespace

const std::vector<std::string>& identity_tags() { return kTags; }

IdentityKind identity_kind(const std::string& tag) {
  return kFdTags.count(tag) != 0 ? IdentityKind::finite_difference : IdentityKind::exact;
}

const IdentityEntry* IdentityReport::find(const std::string& tag) const {
  for (const auto& e : entries) {
    if (e.tag == tag) return &e;
  }
  return nullptr;
}

const IdentityEntry& IdentityReport::at(const std::string& tag) const {
  const IdentityEntry* e = find(tag);
  if (e == nullptr) throw DomainError("no identity tagged " + tag);
  return *e;
}

std::pair<std::string, XReal> IdentityReport::worst(std::optional<IdentityKind> kind) const {
  std::pair<std::string, XReal> w{"", XReal(0)};
  for (const auto& e : entries) {
    if (e.skipped || (kind && e.kind != *kind)) continue;
    if (w.first.empty() || e.rel_residual > w.second || e.rel_residual.is_nan()) {
      w = {e.tag, e.rel_residual};
    }
  }
  return w;
}

std::vector<std::string> IdentityReport::failing(const XReal& exact_tol, const XReal& fd_tol) const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (e.skipped) continue;
    const XReal& tol = e.kind == IdentityKind::exact ? exact_tol : fd_tol;
    if (!(e.rel_residual <= tol)) out.push_back(e.tag);
  }
  return out;
}

SigmaFormIntermediates sigma_form_intermediates(int n, const WeightParams& p, const XReal& t,
                                                const XReal& y, const XReal& r) {
  const XReal s = 2 * n + p.alpha + p.beta;
  const XReal na = n * (n + p.alpha);
  SigmaFormIntermediates m;
  m.l = s * y - (2 * n + p.alpha) * r - 2 * t * r * r + 2 * y * r - na;
  m.k = square(y - t * r) + (2 * n + p.alpha) * t * r + (p.beta - s * t) * y + na * t;
  m.l_tilde = 2 * y * y + (2 * p.beta - (s + 2 * r) * t) * y + (2 * n + p.alpha) * t * r + na * t;
  return m;
}

IdentityReport run_suite(int n, const WeightParams& p, const XReal& t, const XReal& fd_step) {
  if (n < 1) throw DomainError("run_suite needs n >= 1");
  p.validate();
  if (!(t >= 0) || !(t < 1)) throw DomainError("run_suite needs t in [0, 1)");
  if (!(fd_step > 0)) throw DomainError("fd_step must be positive");

  const OPSystem sys = build_system(n + 2, p, t);
  const std::vector<AuxQuantities> aux = aux_quantities_with_quadrature(sys, n + 1);
  const HankelResult hk = hankel(n, p, t);

  const XReal& al = p.alpha;
  const XReal& be = p.beta;
  auto R = [&](int j) -> const XReal& { return aux[j].R; };
  auto r = [&](int j) -> const XReal& { return aux[j].r; };
  auto x = [&](int j) -> const XReal& { return *aux[j].x_quad; };
  auto y = [&](int j) -> const XReal& { return *aux[j].y_quad; };
  auto c = [&](int j) { return (2 * j + 1) + al + be; };
  const XReal& an = sys.alpha(n);
  const XReal& bn = sys.beta(n);
  const XReal& bn1 = sys.beta(n + 1);
  const XReal& p1n = sys.p1[n];
  const XReal s = 2 * n + al + be;
  const XReal na = n * (n + al);
  const XReal nab = n * (n + al + be);

  // t-derivatives by stencils of the closed-form route.
  const bool have_fd = t - 2 * fd_step > 0 && t + 2 * fd_step < 1;
  XReal dy, dx, dp1;
  if (have_fd) {
    std::map<int, RouteTwo> pts;
    for (int k : {-2, -1, 1, 2}) pts.emplace(k, route_two(n, p, t + k * fd_step));
    auto stencil = [&](auto field) {
      return (field(pts.at(-2)) - 8 * field(pts.at(-1)) + 8 * field(pts.at(1)) - field(pts.at(2))) /
             (12 * fd_step);
    };
    dy = stencil([](const RouteTwo& q) { return q.y; });
    dx = stencil([](const RouteTwo& q) { return q.x; });
    dp1 = stencil([](const RouteTwo& q) { return q.p1; });
  }

  IdentityReport rep;
  rep.n = n;
  rep.t = t;
  rep.precision_bits = working_precision();
  rep.sigma_terms = sigma_form_intermediates(n, p, t, y(n), r(n));
  const XReal& l = rep.sigma_terms.l;
  const XReal& k = rep.sigma_terms.k;
  const XReal& lt = rep.sigma_terms.l_tilde;

  auto add = [&](const std::string& tag, auto&& lhs_fn, auto&& rhs_fn) {
    IdentityEntry e;
    e.tag = tag;
    e.kind = identity_kind(tag);
    const bool skip = (e.kind == IdentityKind::finite_difference && !have_fd) ||
                      (t.is_zero() && kSingularAtZero.count(tag) != 0);
    if (skip) {
      e.skipped = true;
      e.lhs = e.rhs = e.difference = e.rel_residual = XReal::nan();
    } else {
      e.lhs = lhs_fn();
      e.rhs = rhs_fn();
      e.difference = e.lhs - e.rhs;
      e.rel_residual = scaled_difference(e.lhs, e.rhs);
    }
    rep.entries.push_back(std::move(e));
  };

  XReal sum_R(0), sum_x(0);
  for (int j = 0; j < n; ++j) {
    sum_R += R(j);
    sum_x += x(j);
  }

  add("s1.pole_t", [&] { return r(n + 1) + r(n); }, [&] { return (t - an) * R(n); });
  add("s1.pole_1", [&] { return -(y(n + 1) + y(n)); }, [&] { return (an - 1) * x(n) + be; });
  add("s1.pole_0", [&] { return y(n + 1) + y(n) - r(n + 1) - r(n); },
      [&] { return (2 * n + 1) + al - an * (x(n) - R(n)); });
  add("s2p.pole_t", [&] { return bn * R(n) * R(n - 1); }, [&] { return r(n) * r(n); });
  add("s2p.pole_1", [&] { return bn * x(n) * x(n - 1); }, [&] { return y(n) * y(n) + be * y(n); });
  add("s2p.pole_0", [&] { return bn * (x(n) - R(n)) * (x(n - 1) - R(n - 1)); },
      [&] {
        const XReal u = y(n) - r(n) - n;
        return u * u - al * u;
      });
  add("s2p.cross", [&] { return bn * (x(n) * R(n - 1) + x(n - 1) * R(n)); },
      [&] { return s * y(n) - (2 * n + al) * r(n) + 2 * y(n) * r(n) - na; });
  add("sum.R", [&] { return sum_R; },
      [&] { return (s * y(n) - na) / t + (s * (y(n) - r(n)) - na) / (1 - t); });
  add("sum.x", [&] { return sum_x; },
      [&] { return (s * (y(n) - r(n)) - na) / (1 - t) + s * r(n) + nab; });
  add("sum.R_minus_x", [&] { return sum_R - sum_x; },
      [&] { return (s * y(n) - na) / t - s * r(n) + nab; });
  add("sum.R_minus_x.consistent", [&] { return sum_R - sum_x; },
      [&] { return (s * y(n) - na) / t - s * r(n) - nab; });
  add("sum.R_logdet", [&] { return sum_R; }, [&] { return -hk.d_logdet.first; });
  add("s2.pole_t", [&] { return (t - an) * (r(n + 1) - r(n)); },
      [&] { return bn1 * R(n + 1) - bn * R(n - 1); });
  add("s2.pole_1", [&] { return (1 - an) * (y(n) - y(n + 1)); },
      [&] { return bn * x(n - 1) - bn1 * x(n + 1); });
  add("s2.pole_0", [&] { return -an * (y(n + 1) - y(n) + r(n) - r(n + 1) - 1); },
      [&] { return bn1 * x(n + 1) - bn * x(n - 1) + bn * R(n - 1) - bn1 * R(n + 1); });
  add("aux.x_from_R", [&] { return x(n); }, [&] { return c(n) + t * R(n); });
  add("aux.alpha_from_y_r", [&] { return an; },
      [&] { return y(n + 1) - y(n) + t * (r(n) - r(n + 1)); });
  add("aux.p1_from_y_r", [&] { return p1n; }, [&] { return -y(n) + t * r(n); });
  add("coef.alpha", [&] { return (2 * n + 2 + al + be) * an; },
      [&] { return 2 * t * r(n) - 2 * y(n) - be + c(n) * t + (1 - t) * x(n); });
  const XReal lhs_beta = (2 * n - 1 + al + be) * c(n) * bn;
  add("coef.beta_y_r", [&] { return lhs_beta; }, [&] { return k; });
  add("coef.beta_p1", [&] { return lhs_beta; },
      [&] { return p1n * p1n + (2 * n + al) * p1n + s * (1 - t) * y(n) + na * t; });
  add("coef.beta_p1_prime", [&] { return lhs_beta; },
      [&] { return p1n * p1n + (s * t - be) * p1n + s * t * (1 - t) * dp1 + na * t; });
  add("H.from_y_r", [&] { return hk.H; }, [&] { return s * (y(n) - t * r(n)) - na; });
  add("H.from_p1", [&] { return hk.H; }, [&] { return -s * p1n - na; });
  add("H.r_from_dH", [&] { return r(n); }, [&] { return -hk.H1 / s; });
  add("H.y_from_H", [&] { return y(n); }, [&] { return (-t * hk.H1 + hk.H + na) / s; });
  add("R.from_l_k", [&] { return R(n); }, [&] { return c(n) * (l - (1 - t) * dy) / (2 * k); });
  add("R.inverse_from_l", [&] { return R(n) * (l + (1 - t) * dy); },
      [&] { return 2 * c(n) * r(n) * r(n); });
  add("sigma.squared", [&] { return square((1 - t) * dy); }, [&] { return l * l - 4 * k * r(n) * r(n); });
  add("x.from_ltilde_k", [&] { return x(n); },
      [&] { return c(n) * (lt - t * (1 - t) * dy) / (2 * k); });
  add("x.inverse_from_ltilde", [&] { return x(n) * (lt + t * (1 - t) * dy); },
      [&] { return 2 * c(n) * (be + y(n)) * y(n); });
  add("r.difference_dx", [&] { return (2 * n + 2 + al + be) * (r(n) - r(n + 1)); },
      [&] { return 2 * r(n) - x(n) + (1 - t) * dx + c(n); });
  add("r.from_x_dx_y", [&] { return r(n); },
      [&] {
        return XReal(-1) / 2 + (c(n) + (1 - t) * dx) / (2 * x(n)) -
               (2 * y(n) + be - (1 - t) * x(n) + t) * (c(n) - x(n)) / (2 * t * x(n));
      });
  return rep;
}

std::vector<std::string> persistent_failures(const std::vector<IdentityReport>& reports,
                                             const XReal& exact_tol, const XReal& fd_tol) {
  if (reports.empty()) return {};
  std::map<std::string, int> fails;
  std::map<std::string, int> evaluated;
  for (const auto& rep : reports) {
    for (const auto& e : rep.entries) {
      if (!e.skipped) ++evaluated[e.tag];
    }
    for (const auto& tag : rep.failing(exact_tol, fd_tol)) ++fails[tag];
  }
  std::vector<std::string> out;
  for (const auto& tag : kTags) {
    auto it = fails.find(tag);
    if (it != fails.end() && it->second == evaluated[tag]) out.push_back(tag);
  }
  return out;
}

XReal ode_z_residual(const OPSystem& sys, int n, const std::vector<AuxQuantities>& aux,
                     const XReal& z) {
  if (n < 1 || static_cast<int>(aux.size()) < n + 1) throw DomainError("ode_z_residual needs aux for 0..n");
  const LadderData ln = ladder_eval(aux[n], z);
  if (ln.A_val.is_zero()) throw ZeroDenominator("A_n(z) vanishes");
  XReal sum_a(0);
  for (int j = 0; j < n; ++j) sum_a += ladder_eval(aux[j], z).A_val;
  const PolyValue pv = eval_poly(sys, n, z);
  const XReal ratio = ln.A_prime / ln.A_val;
  const XReal lhs = pv.d2;
  const XReal rhs = (v0_prime(sys.params, z) + ratio) * pv.d1 -
                    (ln.B_prime - ln.B_val * ratio + sum_a) * pv.value;
  return scaled_difference(lhs, rhs);
}

}  // namespace jpvi
