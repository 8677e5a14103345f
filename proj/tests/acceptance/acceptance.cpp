// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances below are fixed; they are not tuned to the results.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "jpvi/finite_difference.hpp"
#include "jpvi/gap.hpp"
#include "jpvi/identities.hpp"
#include "jpvi/moments.hpp"
#include "jpvi/orthopoly.hpp"
#include "jpvi/painleve.hpp"
#include "jpvi/xreal.hpp"

using namespace jpvi;

namespace {

constexpr double kSigmaTol = 1e-18;
constexpr double kExactTol = 1e-18;
constexpr double kFdTol = 1e-10;
constexpr double kTodaTol = 1e-10;
constexpr double kGapClosedTol = 1e-25;
constexpr double kGapRouteTol = 1e-20;
constexpr double kConstantTol = 1e-60;
constexpr double kExtrapolationTol = 1e-3;
constexpr double kDn0Tol = 1e-20;
constexpr double kPviTol = 1e-8;
constexpr double kOracleTol = 1e-15;
constexpr double kInvarianceTol = 1e-25;

struct ParamSet {
  int n;
  const char* alpha;
  const char* beta;
  const char* A;
  const char* B;
  WeightParams weight() const {
    return WeightParams{XReal::parse(alpha), XReal::parse(beta), XReal::parse(A), XReal::parse(B)};
  }
  std::string label() const {
    return "(" + std::to_string(n) + "," + alpha + "," + beta + "," + A + "," + B + ")";
  }
};

const ParamSet kSets[] = {{2, "1", "1", "1", "1"},
                          {3, "1.5", "0.5", "0", "1"},
                          {4, "2", "3", "1", "2"},
                          {5, "0.7", "2.3", "2", "-1"}};

// t = 0.10, 0.15, ..., 0.90.
std::vector<XReal> sigma_grid() {
  std::vector<XReal> g;
  for (int i = 2; i <= 18; ++i) g.push_back(XReal::ratio(i, 20));
  return g;
}

struct Outcome {
  bool pass = true;
  std::string measured;
  std::vector<std::string> notes;
};

std::string fmt(const XReal& v) { return v.is_nan() ? "nan" : v.to_string(3); }

XReal rel(const XReal& a, const XReal& b) {
  const XReal m = max(abs(a), abs(b));
  return m.is_zero() ? XReal(0) : abs(a - b) / m;
}

// Tracks a running maximum with the place it occurred.
struct Worst {
  XReal value = XReal(0);
  std::string where;
  // NaN sticks, so a non-evaluable point can never pass.
  void update(const XReal& v, const std::string& w) {
    if (value.is_nan()) return;
    if (v.is_nan() || v > value) {
      value = v;
      where = w;
    }
  }
};

Outcome criterion1() {
  Worst w;
  for (const auto& s : kSets) {
    for (const auto& t : sigma_grid())
      w.update(sigma_trace(s.n, s.weight(), t).residual, s.label() + " t=" + t.to_string(3));
  }
  return {w.value <= kSigmaTol, "worst residual " + fmt(w.value) + " at " + w.where, {}};
}

Outcome criterion2() {
  std::map<std::string, Worst> by_tag;
  Worst sum_rule;
  for (const auto& s : kSets) {
    for (const auto& t : sigma_grid()) {
      const IdentityReport rep = run_suite(s.n, s.weight(), t);
      for (const auto& e : rep.entries) {
        if (!e.skipped) by_tag[e.tag].update(e.rel_residual, s.label() + " t=" + t.to_string(3));
      }
      sum_rule.update(rep.at("sum.R_logdet").rel_residual, s.label() + " t=" + t.to_string(3));
    }
  }
  Outcome o;
  XReal worst_exact(0), worst_fd(0);
  for (const auto& [tag, w] : by_tag) {
    const bool fd = identity_kind(tag) == IdentityKind::finite_difference;
    const double tol = fd ? kFdTol : kExactTol;
    (fd ? worst_fd : worst_exact) = max(fd ? worst_fd : worst_exact, w.value);
    if (!(w.value <= tol)) {
      o.pass = false;
      o.notes.push_back(tag + " fails: worst " + fmt(w.value) + " at " + w.where);
    }
  }
  if (!(sum_rule.value <= kExactTol)) o.pass = false;
  o.measured = "worst exact " + fmt(worst_exact) + ", worst fd " + fmt(worst_fd) +
               ", sum rule vs -(ln D)' " + fmt(sum_rule.value);
  if (!o.pass) {
    // The printed R - x sum rule misses by a constant; report its value and the corrected form.
    for (const auto& s : kSets) {
      const IdentityReport rep = run_suite(s.n, s.weight(), XReal::ratio(1, 2));
      const XReal expect = -2 * s.n * (s.n + s.weight().alpha + s.weight().beta);
      o.notes.push_back("sum.R_minus_x defect at " + s.label() + " t=0.5: " +
                        rep.at("sum.R_minus_x").difference.to_string(12) + " (-2n(n+alpha+beta) = " +
                        expect.to_string(12) + "); corrected sign residual " +
                        fmt(rep.at("sum.R_minus_x.consistent").rel_residual));
    }
  }
  return o;
}

Outcome criterion3() {
  PrecisionScope bits(192);
  const XReal h = XReal::parse("1e-8");
  Worst w;
  for (const auto& s : kSets) {
    const WeightParams p = s.weight();
    for (const char* ts : {"0.1", "0.5", "0.9"}) {
      const XReal t = XReal::parse(ts);
      for (int n = 1; n <= s.n; ++n) {
        const OPSystem sys = build_system(n + 2, p, t);
        const AuxQuantities am = aux_quantities(sys, n - 1), a = aux_quantities(sys, n),
                            ap = aux_quantities(sys, n + 1);
        auto at = [&](const XReal& u) { return build_system(n + 2, p, u); };
        const std::string where = s.label() + " n=" + std::to_string(n) + " t=" + ts;
        w.update(scaled_difference(fd_first([&](const XReal& u) { return log(at(u).h[n]); }, t, h), -a.R),
                 "log h' " + where);
        w.update(scaled_difference(fd_first([&](const XReal& u) { return at(u).beta(n); }, t, h),
                                   (am.R - a.R) * sys.beta(n)),
                 "beta' " + where);
        w.update(scaled_difference(fd_first([&](const XReal& u) { return at(u).alpha(n); }, t, h), a.r - ap.r),
                 "alpha' " + where);
        w.update(scaled_difference(fd_first([&](const XReal& u) { return at(u).p1[n]; }, t, h), a.r),
                 "p1' " + where);
        const XReal dy = fd_first([&](const XReal& u) { return aux_quantities(at(u), n).y; }, t, h);
        const XReal dr = fd_first([&](const XReal& u) { return aux_quantities(at(u), n).r; }, t, h);
        w.update(scaled_difference(dy, t * dr), "y' " + where);
      }
    }
  }
  return {w.value <= kTodaTol, "worst " + fmt(w.value) + " (" + w.where + ")", {}};
}

Outcome criterion4() {
  Worst closed, routes;
  for (int i = 1; i <= 9; ++i) {
    const XReal t = XReal::ratio(i, 10);
    const XReal exact = 1 - 3 * square(t) + 2 * t * square(t);
    closed.update(rel(gap_hankel(1, XReal(1), XReal(1), t), exact), "t=" + t.to_string(2));
    for (int n = 1; n <= 6; ++n) {
      for (auto [a, b] : {std::pair{"1", "1"}, std::pair{"1.5", "0.5"}}) {
        routes.update(gap(n, XReal::parse(a), XReal::parse(b), t).agreement,
                      "n=" + std::to_string(n) + " alpha=" + a + " t=" + t.to_string(2));
      }
    }
  }
  return {closed.value <= kGapClosedTol && routes.value <= kGapRouteTol,
          "closed form " + fmt(closed.value) + ", Gram vs Hankel " + fmt(routes.value) + " (" + routes.where + ")",
          {}};
}

Outcome criterion5() {
  const XReal c111 = asymptotic_constant(1, XReal(1), XReal(1)).C;
  const XReal c_err = abs(c111 - 3) / 3;
  const std::vector<XReal> ts{XReal::parse("0.9"), XReal::parse("0.99"), XReal::parse("0.999"),
                              XReal::parse("0.9999")};
  Worst w;
  for (auto [n, a, b] : {std::tuple{2, "1", "1"}, std::tuple{2, "2", "3"}, std::tuple{3, "1.5", "0.5"}}) {
    const AsymptoticCheck chk = asymptotic_check(n, XReal::parse(a), XReal::parse(b), ts);
    w.update(chk.rel_err, "(" + std::to_string(n) + "," + a + "," + b + ")");
  }
  return {c_err <= kConstantTol && w.value <= kExtrapolationTol,
          "C(1,1,1) - 3 rel " + fmt(c_err) + ", extrapolation worst " + fmt(w.value) + " at " + w.where, {}};
}

Outcome criterion6() {
  Worst w;
  const char* vals[] = {"0.5", "1", "1.5", "2", "3"};
  for (const char* a : vals) {
    for (const char* b : vals) {
      const WeightParams p{XReal::parse(a), XReal::parse(b), XReal(0), XReal(1)};
      for (int n = 1; n <= 5; ++n) {
        const XReal d = log_hankel_det(n, p, XReal(0));
        const XReal c = log_dn0_closed_form(n, p.alpha, p.beta);
        w.update(abs(exp(c - d) - 1), std::string("(") + a + "," + b + ") n=" + std::to_string(n));
      }
    }
  }
  return {w.value <= kDn0Tol, "worst rel " + fmt(w.value) + " at " + w.where, {}};
}

Outcome criterion7() {
  const int n = 2;
  const WeightParams p{XReal(1), XReal(1), XReal(0), XReal(1)};
  const XReal t0 = XReal::parse("0.1");
  std::vector<XReal> grid;
  for (int i = 3; i <= 18; ++i) grid.push_back(XReal::ratio(i, 20));  // 0.15 .. 0.90
  Worst pointwise;
  pointwise.update(pvi_pipeline_residual(n, p, t0), "t=0.1");
  for (const auto& t : grid) pointwise.update(pvi_pipeline_residual(n, p, t), "t=" + t.to_string(3));
  const PviTrajectory tr = pvi_integrate(n, p, t0, wn_from_pipeline(n, p, t0), grid);
  Worst sup;
  for (const auto& s : tr.states) sup.update(abs(s.W - wn_value(n, p, s.t)), "t=" + s.t.to_string(3));
  Outcome o;
  o.pass = tr.completed && pointwise.value <= kPviTol && sup.value <= kPviTol;
  o.measured = "pointwise " + fmt(pointwise.value) + ", sup-norm " + fmt(sup.value) + " (" +
               std::to_string(tr.accepted_steps) + " steps)";
  if (!tr.completed) o.notes.push_back("integration stopped: " + tr.stop_reason);
  return o;
}

Outcome criterion8() {
  PrecisionScope bits(128);
  const WeightParams p{XReal::parse("1.5"), XReal::parse("0.5"), XReal(1), XReal(1)};
  Worst w;
  for (int n = 1; n <= 3; ++n) {
    for (const char* ts : {"0.1", "0.3", "0.5", "0.7", "0.9"}) {
      const XReal t = XReal::parse(ts);
      const XReal oracle = multiint_oracle(n, p, t, XReal::parse("1e-20"));
      w.update(rel(oracle, exp(log_hankel_det(n, p, t))), "n=" + std::to_string(n) + " t=" + ts);
    }
  }
  return {w.value <= kOracleTol, "worst rel " + fmt(w.value) + " at " + w.where, {}};
}

Outcome criterion9() {
  // Quantities compare relatively; residuals, which sit at rounding level,
  // compare as absolute differences.
  Worst quantities, residuals;
  for (const auto& s : kSets) {
    const WeightParams p = s.weight();
    for (const char* ts : {"0.1", "0.3", "0.5", "0.7", "0.9"}) {
      const XReal t = XReal::parse(ts);
      const OPSystem base = build_system(s.n + 1, p, t);
      const SigmaTrace sb = sigma_trace(s.n, p, t);
      const IdentityReport ib = run_suite(s.n, p, t);
      const XReal pb = pvi_pipeline_residual(s.n, p, t);
      for (const char* cs : {"0.5", "2", "10"}) {
        const WeightParams q = p.scaled(XReal::parse(cs));
        const std::string where = s.label() + " t=" + ts + " c=" + cs;
        const OPSystem sc = build_system(s.n + 1, q, t);
        for (int j = 0; j <= s.n; ++j) {
          quantities.update(rel(base.alpha_rec[j], sc.alpha_rec[j]), "alpha " + where);
          quantities.update(rel(base.p1[j], sc.p1[j]), "p1 " + where);
          if (j > 0) quantities.update(rel(base.beta(j), sc.beta(j)), "beta " + where);
          const AuxQuantities a = aux_quantities(base, j), b = aux_quantities(sc, j);
          quantities.update(rel(a.R, b.R), "R " + where);
          quantities.update(rel(a.r, b.r), "r " + where);
          quantities.update(rel(a.x, b.x), "x " + where);
          quantities.update(rel(a.y, b.y), "y " + where);
        }
        const SigmaTrace ss = sigma_trace(s.n, q, t);
        quantities.update(rel(sb.sigma, ss.sigma), "sigma " + where);
        residuals.update(abs(sb.residual - ss.residual), "sigma residual " + where);
        const IdentityReport is = run_suite(s.n, q, t);
        for (size_t k = 0; k < ib.entries.size(); ++k) {
          if (ib.entries[k].skipped) continue;
          residuals.update(abs(ib.entries[k].rel_residual - is.entries[k].rel_residual),
                           ib.entries[k].tag + " " + where);
        }
        residuals.update(abs(pb - pvi_pipeline_residual(s.n, q, t)), "pvi residual " + where);
      }
    }
  }
  return {quantities.value <= kInvarianceTol && residuals.value <= kInvarianceTol,
          "quantities " + fmt(quantities.value) + ", residuals " + fmt(residuals.value) + " (" +
              residuals.where + ")",
          {}};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"sigma-form residual <= 1e-18 on 4 parameter sets x 17 t", criterion1},
      {"identity suite: exact <= 1e-18, fd <= 1e-10, sum rule <= 1e-18", criterion2},
      {"Toda / norm / p1 / y' finite-difference checks <= 1e-10 at 192 bits", criterion3},
      {"gap closed form <= 1e-25 and Gram = Hankel <= 1e-20 for n <= 6", criterion4},
      {"asymptotic constant C(1,1,1) = 3 and extrapolation within 0.1%", criterion5},
      {"unperturbed determinant closed form <= 1e-20 for n <= 5", criterion6},
      {"Painleve VI pointwise and integrated agreement <= 1e-8", criterion7},
      {"multiple-integral oracle = Hankel <= 1e-15 for n <= 3", criterion8},
      {"invariance under (A,B) -> (cA,cB) <= 1e-25", criterion9},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.measured = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s | %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.measured.c_str(), secs);
    for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
