#include "jpvi/quadrature.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "jpvi/errors.hpp"

namespace jpvi {

namespace {

// Nodes of the tanh-sinh rule on [-1, 1] for tau >= 0, stored through the
// endpoint complements s_left = (1 + tanh u)/2 and s_right = (1 - tanh u)/2
// with u = (pi/2) sinh(tau).
struct TsNode {
  XReal s_left;
  XReal s_right;
  XReal weight;  // (pi/2) cosh(tau) / cosh(u)^2
  bool at_origin = false;
};

struct TsLevel {
  std::vector<TsNode> nodes;
};

class TsTable {
 public:
  explicit TsTable(int bits) : bits_(bits) {
    // Stop once both complements are below 2^(-3 bits); integrands with
    // endpoint singularities up to |x|^(-2/3) are then fully resolved.
    const double u_max = 1.5 * bits * std::numbers::ln2 + 4.0;
    tau_max_ = std::asinh(2.0 * u_max / std::numbers::pi);
  }

  std::vector<const TsLevel*> levels_up_to(int level) {
    std::lock_guard lock(mutex_);
    while (static_cast<int>(levels_.size()) <= level) build_level(static_cast<int>(levels_.size()));
    std::vector<const TsLevel*> out;
    for (int l = 0; l <= level; ++l) out.push_back(&levels_[static_cast<size_t>(l)]);
    return out;
  }

 private:
  void build_level(int level) {
    PrecisionScope scope(bits_);
    const XReal half_pi = pi() / 2;
    TsLevel lv;
    const XReal h = ldexp(XReal(1), -level);
    long k = level == 0 ? 0 : 1;
    const long stride = level == 0 ? 1 : 2;
    for (;; k += stride) {
      XReal tau = h * k;
      if (tau.to_double() > tau_max_) break;
      XReal u = half_pi * sinh(tau);
      XReal e2u = exp(2 * u);
      TsNode node;
      node.s_left = e2u / (1 + e2u);
      node.s_right = 1 / (1 + e2u);
      XReal cu = cosh(u);
      node.weight = half_pi * cosh(tau) / (cu * cu);
      node.at_origin = (k == 0);
      lv.nodes.push_back(std::move(node));
    }
    levels_.push_back(std::move(lv));
  }

  int bits_;
  double tau_max_;
  std::mutex mutex_;
  std::deque<TsLevel> levels_;
};

TsTable& ts_table(int bits) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<TsTable>> tables;
  std::lock_guard lock(mutex);
  auto& slot = tables[bits];
  if (!slot) slot = std::make_unique<TsTable>(bits);
  return *slot;
}

struct Accumulator {
  std::vector<XReal> sum;
  std::vector<XReal> abs_sum;
  std::vector<XReal> previous;
  std::vector<XReal> diff;
};

// Visits the (at most two) abscissae generated by a stored node.
template <class Visit>
void visit_node(const TsNode& node, const XReal& a, const XReal& b, const XReal& width,
                Visit&& visit) {
  XReal from_left = width * node.s_left;
  XReal to_right = width * node.s_right;
  {
    XReal x = node.s_right < node.s_left ? b - to_right : a + from_left;
    visit(QuadPoint{x, from_left, to_right}, node.weight);
  }
  if (!node.at_origin) {
    XReal x = node.s_right < node.s_left ? a + to_right : b - from_left;
    visit(QuadPoint{x, to_right, from_left}, node.weight);
  }
}

std::vector<QuadResult> tanh_sinh_many(const VectorIntegrand& f, std::size_t count, const XReal& a,
                                       const XReal& b, const QuadRule& rule) {
  const int bits = working_precision();
  TsTable& table = ts_table(bits);
  const XReal width = b - a;
  const XReal half_width = width / 2;
  const int min_level = 3;

  Accumulator acc{std::vector<XReal>(count, XReal(0)), std::vector<XReal>(count, XReal(0)), {}, {}};
  std::vector<XReal> values(count);
  std::vector<QuadResult> results(count);

  auto add_level = [&](const TsLevel& lv) {
    for (const auto& node : lv.nodes) {
      visit_node(node, a, b, width, [&](const QuadPoint& p, const XReal& w) {
        f(p, values);
        for (std::size_t c = 0; c < count; ++c) {
          XReal term = values[c] * w;
          acc.abs_sum[c] += abs(term);
          acc.sum[c] += term;
        }
      });
    }
  };

  std::vector<XReal> estimate(count);
  std::vector<XReal> abs_estimate(count);
  for (int level = 0; level <= rule.max_levels; ++level) {
    auto levels = table.levels_up_to(level);
    add_level(*levels.back());
    const XReal scale = ldexp(half_width, -level);
    bool all_converged = level >= min_level;
    for (std::size_t c = 0; c < count; ++c) {
      XReal next = acc.sum[c] * scale;
      abs_estimate[c] = acc.abs_sum[c] * scale;
      XReal err = level == 0 ? abs(next) : abs(next - estimate[c]);
      results[c].error_estimate = err;
      results[c].levels_used = level;
      const bool ok = level >= min_level && err <= rule.target_rel_tol * abs_estimate[c];
      results[c].converged = ok;
      if (!ok) all_converged = false;
      estimate[c] = std::move(next);
    }
    if (all_converged) break;
  }
  for (std::size_t c = 0; c < count; ++c) results[c].value = estimate[c];
  return results;
}

// --- Gauss-Legendre -------------------------------------------------------

struct GlKey {
  int bits;
  int n;
  auto operator<=>(const GlKey&) const = default;
};

void compute_gl(int n, std::vector<XReal>& nodes, std::vector<XReal>& weights) {
  nodes.assign(static_cast<size_t>(n), XReal(0));
  weights.assign(static_cast<size_t>(n), XReal(0));
  const XReal eps = epsilon() * 16;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    XReal x(std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)));
    XReal dp;
    for (int iter = 0; iter < 40; ++iter) {
      XReal p0(1);
      XReal p1 = x;
      for (int k = 2; k <= n; ++k) {
        XReal p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      XReal dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= eps) break;
    }
    XReal w = 2 / ((1 - x * x) * dp * dp);
    nodes[static_cast<size_t>(i)] = -x;
    nodes[static_cast<size_t>(n - 1 - i)] = x;
    weights[static_cast<size_t>(i)] = w;
    weights[static_cast<size_t>(n - 1 - i)] = w;
  }
}

std::vector<QuadResult> gauss_legendre_many(const VectorIntegrand& f, std::size_t count,
                                            const XReal& a, const XReal& b, const QuadRule& rule) {
  const XReal half = (b - a) / 2;
  const XReal mid = (a + b) / 2;
  std::vector<QuadResult> results(count);
  std::vector<XReal> prev(count);
  std::vector<XReal> values(count);
  std::vector<XReal> nodes, weights;
  for (int level = 0; level <= rule.max_levels; ++level) {
    const int n = 16 << level;
    gauss_legendre_nodes(n, nodes, weights);
    std::vector<XReal> sum(count, XReal(0)), abs_sum(count, XReal(0));
    for (int i = 0; i < n; ++i) {
      XReal x = mid + half * nodes[static_cast<size_t>(i)];
      XReal from_left = half * (1 + nodes[static_cast<size_t>(i)]);
      XReal to_right = half * (1 - nodes[static_cast<size_t>(i)]);
      f(QuadPoint{x, from_left, to_right}, values);
      for (std::size_t c = 0; c < count; ++c) {
        XReal term = values[c] * weights[static_cast<size_t>(i)];
        abs_sum[c] += abs(term);
        sum[c] += term;
      }
    }
    bool all = level > 0;
    for (std::size_t c = 0; c < count; ++c) {
      XReal est = sum[c] * half;
      XReal err = level == 0 ? abs(est) : abs(est - prev[c]);
      results[c].error_estimate = err;
      results[c].levels_used = level;
      results[c].converged = level > 0 && err <= rule.target_rel_tol * abs(abs_sum[c] * half);
      if (!results[c].converged) all = false;
      prev[c] = std::move(est);
    }
    if (all) break;
  }
  for (std::size_t c = 0; c < count; ++c) results[c].value = prev[c];
  return results;
}

}  // namespace

QuadRule QuadRule::standard() {
  QuadRule r;
  r.kind = QuadKind::tanh_sinh;
  r.target_rel_tol = ldexp(XReal(1), -working_precision() / 2);
  r.max_levels = 12;
  return r;
}

QuadRule QuadRule::tanh_sinh(XReal tol, int max_levels) {
  return QuadRule{QuadKind::tanh_sinh, std::move(tol), max_levels};
}

QuadRule QuadRule::gauss_legendre(XReal tol, int max_levels) {
  return QuadRule{QuadKind::gauss_legendre, std::move(tol), max_levels};
}

std::vector<QuadResult> integrate_many(const VectorIntegrand& f, std::size_t count, const XReal& a,
                                       const XReal& b, const QuadRule& rule) {
  if (!(rule.target_rel_tol > 0)) throw DomainError("quadrature tolerance must be positive");
  if (!(a <= b)) throw DomainError("integrate: need a <= b");
  if (a == b) {
    std::vector<QuadResult> zero(count);
    for (auto& r : zero) {
      r.value = XReal(0);
      r.error_estimate = XReal(0);
      r.converged = true;
    }
    return zero;
  }
  if (rule.kind == QuadKind::gauss_legendre) return gauss_legendre_many(f, count, a, b, rule);
  return tanh_sinh_many(f, count, a, b, rule);
}

QuadResult integrate(const Integrand& f, const XReal& a, const XReal& b, const QuadRule& rule) {
  auto r = integrate_many([&](const QuadPoint& p, std::span<XReal> out) { out[0] = f(p); }, 1, a, b,
                          rule);
  return std::move(r.front());
}

QuadResult integrate(const std::function<XReal(const XReal&)>& f, const XReal& a, const XReal& b,
                     const QuadRule& rule) {
  return integrate([&](const QuadPoint& p) { return f(p.x); }, a, b, rule);
}

FixedRule tanh_sinh_fixed_rule(const XReal& a, const XReal& b, int level) {
  TsTable& table = ts_table(working_precision());
  const XReal width = b - a;
  const XReal scale = ldexp(width / 2, -level);
  FixedRule rule;
  for (const TsLevel* lv : table.levels_up_to(level)) {
    for (const auto& node : lv->nodes) {
      visit_node(node, a, b, width, [&](const QuadPoint& p, const XReal& w) {
        rule.x.push_back(p.x);
        rule.from_left.push_back(p.from_left);
        rule.to_right.push_back(p.to_right);
        rule.weight.push_back(w * scale);
      });
    }
  }
  return rule;
}

void gauss_legendre_nodes(int npoints, std::vector<XReal>& nodes, std::vector<XReal>& weights) {
  if (npoints < 1) throw DomainError("Gauss-Legendre needs at least one point");
  static std::mutex mutex;
  static std::map<GlKey, std::pair<std::vector<XReal>, std::vector<XReal>>> cache;
  const GlKey key{working_precision(), npoints};
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }
  compute_gl(npoints, nodes, weights);
  std::lock_guard lock(mutex);
  cache.emplace(key, std::make_pair(nodes, weights));
}

}  // namespace jpvi
