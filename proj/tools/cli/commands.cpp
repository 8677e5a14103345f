#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "cli.hpp"
#include "jpvi/errors.hpp"
#include "jpvi/gap.hpp"
#include "jpvi/identities.hpp"
#include "jpvi/moments.hpp"
#include "jpvi/painleve.hpp"
#include "output.hpp"

namespace jpvi::cli {

namespace {

struct Inputs {
  WeightParams p;
  XReal tol;
  XReal fd_tol;
  std::vector<XReal> grid;
};

std::vector<XReal> default_grid() {
  std::vector<XReal> g;
  for (int i = 0; i < 17; ++i) g.push_back(XReal::ratio(2 + i, 20));
  return g;
}

// Parsed at the caller's working precision, so reruns at a higher precision
// see the same decimal inputs rather than rounded copies.
Inputs make_inputs(const RunConfig& cfg) {
  Inputs in;
  in.p = WeightParams{XReal::parse(cfg.alpha), XReal::parse(cfg.beta), XReal::parse(cfg.A),
                      XReal::parse(cfg.B)};
  in.tol = XReal::parse(cfg.tol);
  in.fd_tol = XReal::parse(cfg.fd_tol);
  if (cfg.t) {
    XReal t = XReal::parse(*cfg.t);
    if (!(t >= 0) || !(t < 1)) throw DomainError("--t must lie in [0, 1)");
    in.grid.push_back(std::move(t));
  } else if (cfg.t_grid) {
    const XReal a = XReal::parse(cfg.t_grid->start);
    const XReal b = XReal::parse(cfg.t_grid->stop);
    if (!(a > 0) || !(a < 1) || !(b > 0) || !(b < 1))
      throw DomainError("--t-grid endpoints must lie in (0, 1)");
    const int m = cfg.t_grid->count;
    if (m == 1) {
      in.grid.push_back(a);
    } else {
      for (int i = 0; i < m; ++i) in.grid.push_back(a + (b - a) * i / (m - 1));
    }
  } else {
    in.grid = default_grid();
  }
  return in;
}

// Runs f(i) for i in [0, count) on `jobs` threads at `bits` of precision.
// Results come back in index order; the first exception by index is rethrown.
template <class R>
std::vector<R> parallel_map(size_t count, int jobs, int bits, const std::function<R(size_t)>& f) {
  std::vector<std::optional<R>> out(count);
  std::vector<std::exception_ptr> errs(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    PrecisionScope scope(bits);
    for (size_t i = next++; i < count; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const size_t nthreads = std::min<size_t>(static_cast<size_t>(std::max(jobs, 1)), count);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> res;
  res.reserve(count);
  for (auto& r : out) res.push_back(std::move(*r));
  return res;
}

struct Row {
  Record rec;
  XReal residual;  // NaN when not evaluated
};

struct Outcome {
  Report report;
  bool exceeded = false;
};

// Worst of the per-row residuals against tol.
Record worst_of(const std::vector<Row>& rows, const Inputs& in, int digits, bool& exceeded) {
  std::optional<size_t> at;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].residual.is_nan()) continue;
    if (!at || rows[i].residual > rows[*at].residual) at = i;
  }
  Record w;
  if (!at) {
    w.emplace_back("residual", Value::number(XReal::nan(), digits));
    w.emplace_back("t", Value::number(XReal::nan(), digits));
    w.emplace_back("within_tol", Value::boolean(true));
    exceeded = false;
    return w;
  }
  exceeded = rows[*at].residual > in.tol;
  w.emplace_back("residual", Value::number(rows[*at].residual, digits));
  w.emplace_back("t", Value::number(in.grid[*at], digits));
  w.emplace_back("within_tol", Value::boolean(!exceeded));
  return w;
}

Record base_params(const RunConfig& cfg) {
  Record r;
  r.emplace_back("command", Value::string(subcommand_name(cfg.subcommand)));
  r.emplace_back("n", Value::integer(cfg.n));
  r.emplace_back("alpha", Value::string(cfg.alpha));
  r.emplace_back("beta", Value::string(cfg.beta));
  r.emplace_back("A", Value::string(cfg.A));
  r.emplace_back("B", Value::string(cfg.B));
  r.emplace_back("prec_bits", Value::integer(cfg.prec_bits));
  r.emplace_back("tol", Value::string(cfg.tol));
  return r;
}

Outcome sigma_check(const RunConfig& cfg, const Inputs& in, int digits) {
  in.p.validate();
  auto rows = parallel_map<Row>(in.grid.size(), cfg.jobs, cfg.prec_bits, [&](size_t i) {
    const SigmaTrace s = sigma_trace(cfg.n, in.p, in.grid[i]);
    Row r;
    r.rec = {{"t", Value::number(s.t, digits)},          {"H", Value::number(s.H, digits)},
             {"sigma", Value::number(s.sigma, digits)},  {"sigma1", Value::number(s.sigma1, digits)},
             {"sigma2", Value::number(s.sigma2, digits)}, {"lhs", Value::number(s.lhs, digits)},
             {"rhs", Value::number(s.rhs, digits)},      {"residual", Value::number(s.residual, digits)}};
    r.residual = s.residual;
    return r;
  });
  Outcome o;
  o.report.params = base_params(cfg);
  o.report.worst = worst_of(rows, in, digits, o.exceeded);
  for (auto& r : rows) o.report.records.push_back(std::move(r.rec));
  return o;
}

Outcome gap_command(const RunConfig& cfg, const Inputs& in, int digits) {
  auto rows = parallel_map<Row>(in.grid.size(), cfg.jobs, cfg.prec_bits, [&](size_t i) {
    const GapResult g = gap(cfg.n, in.p.alpha, in.p.beta, in.grid[i]);
    Row r;
    r.rec = {{"t", Value::number(g.t, digits)},
             {"prob", Value::number(g.prob_hankel, digits)},
             {"prob_gram", Value::number(g.prob_gram, digits)},
             {"log_prob", Value::number(g.log_prob_hankel, digits)},
             {"agreement", Value::number(g.agreement, digits)}};
    r.residual = g.agreement;
    return r;
  });
  Outcome o;
  o.report.params = base_params(cfg);
  o.report.params.emplace_back("weight", Value::string("A=0, B=1"));
  o.report.worst = worst_of(rows, in, digits, o.exceeded);
  for (auto& r : rows) o.report.records.push_back(std::move(r.rec));
  return o;
}

Outcome moments_command(const RunConfig& cfg, const Inputs& in, int digits) {
  in.p.validate();
  auto rows = parallel_map<Row>(in.grid.size(), cfg.jobs, cfg.prec_bits, [&](size_t i) {
    const XReal& t = in.grid[i];
    const MomentTable mt = moment_table(cfg.n, in.p, t);
    const HankelResult h = hankel(cfg.n, in.p, t);
    Row r;
    r.rec = {{"t", Value::number(t, digits)},
             {"log_det", Value::number(h.log_det, digits)},
             {"dlogdet1", Value::number(h.d_logdet.first, digits)},
             {"dlogdet2", Value::number(h.d_logdet.second, digits)},
             {"dlogdet3", Value::number(h.d_logdet.third, digits)},
             {"H", Value::number(h.H, digits)},
             {"H1", Value::number(h.H1, digits)},
             {"H2", Value::number(h.H2, digits)}};
    for (size_t k = 0; k < mt.mu.size(); ++k)
      r.rec.emplace_back("mu_" + std::to_string(k), Value::number(mt.mu[k], digits));
    r.residual = XReal::nan();
    if (t > 0) {
      XReal worst(0);
      for (size_t k = 0; k < mt.mu.size(); ++k) {
        const XReal alt = moment_hypergeometric(static_cast<int>(k), in.p, t);
        worst = max(worst, abs(mt.mu[k] - alt) / max(abs(mt.mu[k]), XReal(1)));
      }
      r.residual = worst;
    }
    r.rec.emplace_back("hyp_residual", Value::number(r.residual, digits));
    return r;
  });
  Outcome o;
  o.report.params = base_params(cfg);
  o.report.worst = worst_of(rows, in, digits, o.exceeded);
  for (auto& r : rows) o.report.records.push_back(std::move(r.rec));
  return o;
}

Outcome pvi_compare(const RunConfig& cfg, const Inputs& in, int digits) {
  in.p.validate();
  const XReal t0 = XReal::parse(cfg.t0);
  if (!(t0 > 0) || !(t0 < 1)) throw DomainError("--t0 must lie in (0, 1)");
  const bool up = in.grid.front() > t0;
  for (size_t i = 0; i < in.grid.size(); ++i) {
    const bool beyond = up ? in.grid[i] > t0 : in.grid[i] < t0;
    const bool monotone = i == 0 || (up ? in.grid[i] > in.grid[i - 1] : in.grid[i] < in.grid[i - 1]);
    if (!beyond || !monotone) throw DomainError("pvi-compare needs a monotone grid on one side of --t0");
  }
  struct Pipe {
    XReal W;
    XReal residual;
  };
  auto pipe = parallel_map<Pipe>(in.grid.size(), cfg.jobs, cfg.prec_bits, [&](size_t i) {
    return Pipe{wn_value(cfg.n, in.p, in.grid[i]), pvi_pipeline_residual(cfg.n, in.p, in.grid[i])};
  });
  const WnPoint seed = wn_from_pipeline(cfg.n, in.p, t0);
  const PviTrajectory traj = pvi_integrate(cfg.n, in.p, t0, seed, in.grid);

  std::vector<Row> rows;
  for (size_t i = 0; i < in.grid.size(); ++i) {
    XReal w_int = XReal::nan();
    for (const auto& s : traj.states) {
      if (s.t == in.grid[i]) w_int = s.W;
    }
    const XReal diff = w_int.is_nan() ? XReal::infinity() : abs(w_int - pipe[i].W);
    Row r;
    r.rec = {{"t", Value::number(in.grid[i], digits)},
             {"W_pipeline", Value::number(pipe[i].W, digits)},
             {"W_integrated", Value::number(w_int, digits)},
             {"abs_diff", Value::number(w_int.is_nan() ? XReal::nan() : diff, digits)},
             {"pvi_residual", Value::number(pipe[i].residual, digits)}};
    r.residual = max(diff, pipe[i].residual);
    rows.push_back(std::move(r));
  }
  Outcome o;
  o.report.params = base_params(cfg);
  o.report.params.emplace_back("t0", Value::string(cfg.t0));
  o.report.worst = worst_of(rows, in, digits, o.exceeded);
  o.report.worst.emplace_back("integration_completed", Value::boolean(traj.completed));
  o.report.worst.emplace_back("stop_reason", Value::string(traj.stop_reason));
  o.report.worst.emplace_back("accepted_steps", Value::integer(traj.accepted_steps));
  o.report.worst.emplace_back("rejected_steps", Value::integer(traj.rejected_steps));
  for (auto& r : rows) o.report.records.push_back(std::move(r.rec));
  o.exceeded = o.exceeded || !traj.completed;
  return o;
}

Outcome asymptotics(const RunConfig& cfg, Inputs in, int digits) {
  if (!cfg.t && !cfg.t_grid) {
    in.grid = {XReal::parse("0.9"), XReal::parse("0.99"), XReal::parse("0.999"), XReal::parse("0.9999")};
  }
  const AsymptoticCheck chk = asymptotic_check(cfg.n, in.p.alpha, in.p.beta, in.grid);
  Outcome o;
  o.report.params = base_params(cfg);
  o.report.params.emplace_back("weight", Value::string("A=0, B=1"));
  for (size_t i = 0; i < in.grid.size(); ++i) {
    o.report.records.push_back({{"t", Value::number(in.grid[i], digits)},
                                {"c", Value::number(chk.samples[i], digits)},
                                {"C", Value::number(chk.closed_form.C, digits)}});
  }
  o.exceeded = !(chk.rel_err <= in.tol);
  o.report.worst = {{"residual", Value::number(chk.rel_err, digits)},
                    {"exponent", Value::number(chk.closed_form.exponent, digits)},
                    {"C", Value::number(chk.closed_form.C, digits)},
                    {"C_est", Value::number(chk.C_est, digits)},
                    {"within_tol", Value::boolean(!o.exceeded)}};
  return o;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}

Outcome identities(const RunConfig& cfg, const Inputs& in, int digits, std::ostream& err) {
  in.p.validate();
  const auto& tags = identity_tags();
  const int hi_bits = std::min(2 * cfg.prec_bits, 4096);

  struct PointResult {
    IdentityReport base;
    std::vector<std::string> failing;
    std::vector<std::string> persistent;
  };
  auto results = parallel_map<PointResult>(in.grid.size(), cfg.jobs, cfg.prec_bits, [&](size_t i) {
    PointResult pr;
    pr.base = run_suite(cfg.n, in.p, in.grid[i]);
    pr.failing = pr.base.failing(in.tol, in.fd_tol);
    if (!pr.failing.empty()) {
      // A tag that still fails with twice the precision is not a rounding effect.
      PrecisionScope scope(hi_bits);
      const Inputs hi = make_inputs(cfg);
      const IdentityReport again = run_suite(cfg.n, hi.p, hi.grid[i]);
      pr.persistent = persistent_failures({pr.base, again}, hi.tol, hi.fd_tol);
    }
    return pr;
  });

  Outcome o;
  o.report.params = base_params(cfg);
  o.report.params.emplace_back("fd_tol", Value::string(cfg.fd_tol));

  std::map<std::string, XReal> worst_by_tag;
  std::set<std::string> failing, erratum;
  XReal worst_exact(0), worst_fd(0);
  std::string worst_exact_tag, worst_fd_tag;
  for (size_t i = 0; i < results.size(); ++i) {
    const auto& rep = results[i].base;
    Record rec{{"t", Value::number(in.grid[i], digits)}};
    for (const auto& tag : tags) {
      const IdentityEntry& e = rep.at(tag);
      rec.emplace_back(tag, Value::number(e.skipped ? XReal::nan() : e.rel_residual, digits));
      if (e.skipped) continue;
      auto it = worst_by_tag.find(tag);
      if (it == worst_by_tag.end() || e.rel_residual > it->second) worst_by_tag[tag] = e.rel_residual;
    }
    const auto we = rep.worst(IdentityKind::exact);
    const auto wf = rep.worst(IdentityKind::finite_difference);
    rec.emplace_back("worst_exact", Value::number(we.second, digits));
    rec.emplace_back("worst_fd", Value::number(wf.second, digits));
    o.report.records.push_back(std::move(rec));
    if (!we.second.is_nan() && (worst_exact_tag.empty() || we.second > worst_exact)) {
      worst_exact = we.second;
      worst_exact_tag = we.first;
    }
    if (!wf.second.is_nan() && (worst_fd_tag.empty() || wf.second > worst_fd)) {
      worst_fd = wf.second;
      worst_fd_tag = wf.first;
    }
    failing.insert(results[i].failing.begin(), results[i].failing.end());
    erratum.insert(results[i].persistent.begin(), results[i].persistent.end());
  }

  err << std::left << std::setw(28) << "tag" << std::setw(8) << "kind" << std::setw(14) << "worst"
      << "status\n";
  for (const auto& tag : tags) {
    const bool fd = identity_kind(tag) == IdentityKind::finite_difference;
    auto it = worst_by_tag.find(tag);
    std::string status = "ok";
    if (it == worst_by_tag.end()) status = "skipped";
    if (failing.count(tag)) status = "FAIL";
    if (erratum.count(tag)) status = "FAIL (possible erratum: persists at " + std::to_string(hi_bits) + " bits)";
    err << std::setw(28) << tag << std::setw(8) << (fd ? "fd" : "exact") << std::setw(14)
        << (it == worst_by_tag.end() ? std::string("-") : it->second.to_string(3)) << status << "\n";
  }

  o.exceeded = !failing.empty();
  o.report.worst = {{"worst_exact", Value::number(worst_exact, digits)},
                    {"worst_exact_tag", Value::string(worst_exact_tag)},
                    {"worst_fd", Value::number(worst_fd, digits)},
                    {"worst_fd_tag", Value::string(worst_fd_tag)},
                    {"failing", Value::string(join({failing.begin(), failing.end()}))},
                    {"possible_erratum", Value::string(join({erratum.begin(), erratum.end()}))},
                    {"within_tol", Value::boolean(!o.exceeded)}};
  return o;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    PrecisionScope scope(cfg.prec_bits);
    const int digits = decimal_digits(cfg.prec_bits);
    const Inputs in = make_inputs(cfg);
    Outcome o;
    switch (cfg.subcommand) {
      case Subcommand::sigma_check: o = sigma_check(cfg, in, digits); break;
      case Subcommand::identities: o = identities(cfg, in, digits, err); break;
      case Subcommand::gap: o = gap_command(cfg, in, digits); break;
      case Subcommand::pvi_compare: o = pvi_compare(cfg, in, digits); break;
      case Subcommand::asymptotics: o = asymptotics(cfg, in, digits); break;
      case Subcommand::moments: o = moments_command(cfg, in, digits); break;
    }
    if (cfg.format == Format::json) {
      write_json(out, o.report);
    } else {
      write_csv(out, o.report);
    }
    return o.exceeded ? kExitTolerance : kExitOk;
  } catch (const std::exception& e) {
    err << "jpvi: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace jpvi::cli
