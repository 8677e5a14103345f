#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jpvi::cli {

enum class Subcommand { sigma_check, identities, gap, pvi_compare, asymptotics, moments };
enum class Format { json, csv };

struct TGrid {
  std::string start;
  std::string stop;
  int count = 1;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::sigma_check;
  int n = 0;
  std::string alpha = "1";
  std::string beta = "1";
  std::string A = "1";
  std::string B = "1";
  std::optional<std::string> t;
  std::optional<TGrid> t_grid;
  /// pvi-compare only: integration start.
  std::string t0 = "0.1";
  int prec_bits = 256;
  std::string tol = "1e-18";
  std::string fd_tol = "1e-10";
  Format format = Format::json;
  std::string out;  // empty: standard output
  int jobs = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 1;
inline constexpr int kExitUsage = 2;

const char* subcommand_name(Subcommand s);

/// Default precision: $JPVI_PREC_BITS when set and valid, else 256.
int default_precision_bits();

/// Parses "start:stop:count".
TGrid parse_t_grid(const std::string& text);

/// Parses argv into a RunConfig. Returns the exit code to use when parsing
/// did not produce a runnable config (help requested or usage error).
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out,
                                    std::ostream& err, int& exit_code);

/// Runs a parsed config, writing the report to `out` (or cfg.out) and
/// diagnostics to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jpvi::cli
