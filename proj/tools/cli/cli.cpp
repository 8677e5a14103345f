#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

namespace jpvi::cli {

const char* subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::sigma_check: return "sigma-check";
    case Subcommand::identities: return "identities";
    case Subcommand::gap: return "gap";
    case Subcommand::pvi_compare: return "pvi-compare";
    case Subcommand::asymptotics: return "asymptotics";
    case Subcommand::moments: return "moments";
  }
  return "?";
}

int default_precision_bits() {
  const char* env = std::getenv("JPVI_PREC_BITS");
  if (env == nullptr || *env == '\0') return 256;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 64 || v > 4096) return 256;
  return static_cast<int>(v);
}

TGrid parse_t_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos || text.find(':', b + 1) != std::string::npos)
    throw std::invalid_argument("--t-grid expects start:stop:count");
  TGrid g;
  g.start = text.substr(0, a);
  g.stop = text.substr(a + 1, b - a - 1);
  const std::string count = text.substr(b + 1);
  size_t used = 0;
  try {
    g.count = std::stoi(count, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != count.size()) throw std::invalid_argument("--t-grid count must be an integer");
  if (g.count < 1) throw std::invalid_argument("--t-grid count must be >= 1");
  return g;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out,
                                    std::ostream& err, int& exit_code) {
  CLI::App app{"High-precision Hankel, orthogonal polynomial and Painleve VI checks for the "
               "jump-perturbed Jacobi weight"};
  app.name("jpvi");
  app.require_subcommand(1, 1);

  RunConfig cfg;
  cfg.prec_bits = default_precision_bits();
  std::string grid_text;
  std::string t_text;
  std::string format_text = "json";

  struct SubcommandInfo {
    Subcommand kind;
    const char* help;
  };
  const SubcommandInfo infos[] = {
      {Subcommand::sigma_check, "Residual of the sigma-form equation from Hankel traces"},
      {Subcommand::identities, "Full identity suite with a per-tag residual table"},
      {Subcommand::gap, "Gap probability by the Hankel and Gram routes"},
      {Subcommand::pvi_compare, "Pipeline W_n against direct Painleve VI integration"},
      {Subcommand::asymptotics, "Barnes G constant against extrapolated gap data"},
      {Subcommand::moments, "Moments, Hankel log-determinant and H derivatives"},
  };
  std::vector<std::pair<CLI::App*, Subcommand>> subs;
  for (const auto& s : infos) {
    CLI::App* sub = app.add_subcommand(subcommand_name(s.kind), s.help);
    sub->add_option("--n", cfg.n, "Matrix size")->required();
    sub->add_option("--alpha", cfg.alpha, "Jacobi exponent at 0 (decimal)");
    sub->add_option("--beta", cfg.beta, "Jacobi exponent at 1 (decimal)");
    sub->add_option("--A", cfg.A, "Weight factor below t (decimal)");
    sub->add_option("--B", cfg.B, "Jump at t (decimal)");
    auto* t_opt = sub->add_option("--t", t_text, "Single t in (0, 1)");
    auto* g_opt = sub->add_option("--t-grid", grid_text, "start:stop:count, endpoints inclusive");
    t_opt->excludes(g_opt);
    sub->add_option("--prec", cfg.prec_bits, "Working precision in bits (env JPVI_PREC_BITS)");
    sub->add_option("--tol", cfg.tol, "Tolerance on the reported residuals");
    sub->add_option("--fd-tol", cfg.fd_tol, "Tolerance on finite-difference residuals");
    sub->add_option("--format", format_text, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "Output path (default standard output)");
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 256));
    if (s.kind == Subcommand::pvi_compare) sub->add_option("--t0", cfg.t0, "Integration start");
    subs.emplace_back(sub, s.kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    exit_code = app.exit(e, out, err);
    return std::nullopt;
  } catch (const CLI::CallForAllHelp& e) {
    exit_code = app.exit(e, out, err);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    exit_code = kExitUsage;
    return std::nullopt;
  }

  for (const auto& [sub, kind] : subs) {
    if (sub->parsed()) cfg.subcommand = kind;
  }
  cfg.format = format_text == "csv" ? Format::csv : Format::json;
  try {
    if (!t_text.empty()) cfg.t = t_text;
    if (!grid_text.empty()) cfg.t_grid = parse_t_grid(grid_text);
    if (cfg.n < 1) throw std::invalid_argument("--n must be >= 1");
    if (cfg.prec_bits < 64 || cfg.prec_bits > 4096)
      throw std::invalid_argument("--prec must lie in [64, 4096]");
  } catch (const std::invalid_argument& e) {
    err << "jpvi: " << e.what() << "\n";
    exit_code = kExitUsage;
    return std::nullopt;
  }
  exit_code = kExitOk;
  return cfg;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto cfg = parse_args(argc, argv, out, err, code);
  if (!cfg) return code;
  if (cfg->out.empty()) return run(*cfg, out, err);
  std::ostringstream buf;
  code = run(*cfg, buf, err);
  std::ofstream file(cfg->out, std::ios::binary);
  if (!file) {
    err << "jpvi: cannot open " << cfg->out << " for writing\n";
    return kExitUsage;
  }
  file << buf.str();
  return code;
}

}  // namespace jpvi::cli
