#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jpvi/moments.hpp"
#include "jpvi/orthopoly.hpp"
#include "jpvi/xreal.hpp"

namespace jpvi {

enum class IdentityKind {
  /// Both sides from exact (non-differenced) quantities.
  exact,
  /// One side uses a finite-difference t-derivative.
  finite_difference,
};

struct IdentityEntry {
  std::string tag;
  IdentityKind kind = IdentityKind::exact;
  XReal lhs;
  XReal rhs;
  /// lhs - rhs.
  XReal difference;
  /// |lhs - rhs| / max(|lhs|, |rhs|, 1).
  XReal rel_residual;
  /// Not evaluable at this point (t = 0 limit or no room for a stencil).
  bool skipped = false;
};

struct SigmaFormIntermediates {
  XReal l;
  XReal k;
  XReal l_tilde;
};

struct IdentityReport {
  int n = 0;
  XReal t;
  int precision_bits = 0;
  std::vector<IdentityEntry> entries;
  SigmaFormIntermediates sigma_terms;

  const IdentityEntry& at(const std::string& tag) const;
  const IdentityEntry* find(const std::string& tag) const;
  /// Largest residual among evaluated entries, optionally of one kind.
  std::pair<std::string, XReal> worst(std::optional<IdentityKind> kind = std::nullopt) const;
  /// Tags whose residual exceeds the tolerance for their kind.
  std::vector<std::string> failing(const XReal& exact_tol, const XReal& fd_tol) const;
};

/// Identity tags in report order.
const std::vector<std::string>& identity_tags();
IdentityKind identity_kind(const std::string& tag);

/// l, k and l~ for the given n, y_n, r_n and t.
SigmaFormIntermediates sigma_form_intermediates(int n, const WeightParams& p, const XReal& t,
                                                const XReal& y, const XReal& r);

/// Evaluates every difference and differential identity linking the
/// recurrence coefficients, R_j, r_j, x_j, y_j (j <= n+1), p1(n) and H_n at
/// one (n, t). x_j and y_j enter through their defining integrals; t-derivatives
/// of y_n, x_n and p1(n) come from 5-point stencils of width fd_step.
///
/// n >= 1, t in [0, 1). At t = 0 entries that divide by t or need a stencil
/// are marked skipped.
IdentityReport run_suite(int n, const WeightParams& p, const XReal& t,
                         const XReal& fd_step = XReal(1e-8));

/// Tags failing in every report given (for instance the same grid at two
/// precisions and several parameter sets). Such a tag points at the
/// identity itself rather than at rounding.
std::vector<std::string> persistent_failures(const std::vector<IdentityReport>& reports,
                                             const XReal& exact_tol, const XReal& fd_tol);

/// Scaled residual of the second-order z-ODE satisfied by P_n,
///   P'' - (v0' + A_n'/A_n) P' + (B_n' - B_n A_n'/A_n + sum_{j<n} A_j) P = 0,
/// with aux holding the quantities for j = 0..n.
/// Throws PoleEvaluation at z in {0, 1, t} and ZeroDenominator if A_n(z) = 0.
XReal ode_z_residual(const OPSystem& sys, int n, const std::vector<AuxQuantities>& aux,
                     const XReal& z);

}  // namespace jpvi
