#include "jpvi/specfun.hpp"

#include <map>
#include <mutex>
#include <string>

#include "jpvi/errors.hpp"

namespace jpvi {

namespace {

constexpr int kGuardBits = 32;

bool is_nonpositive_integer(const XReal& v) { return v.is_integer() && v <= 0; }

// sum_k (p)_k / (q)_k x^k for 0 <= x < 1 and q > 0; all terms positive.
XReal positive_ratio_series(const XReal& p, const XReal& q, const XReal& x,
                            const SpecFunConfig& cfg) {
  XReal sum(1);
  XReal term(1);
  for (int k = 0; k < cfg.max_terms; ++k) {
    term *= (p + k) / (q + k) * x;
    sum += term;
    // Later ratios lie between the next one and x, so a geometric series
    // bounds the remainder once both are below 1.
    const XReal ratio = max((p + k + 1) / (q + k + 1) * x, x);
    if (ratio < 1 && term * ratio <= cfg.series_rel_tol * sum * (1 - ratio)) return sum;
  }
  throw NotConverged("incomplete Beta series did not converge in " + std::to_string(cfg.max_terms) +
                     " terms");
}

// ln G(1 + z) for z in [0, 1] from the Weierstrass product.
XReal log_barnes_g_base(const XReal& z, const SpecFunConfig& cfg) {
  constexpr int kDirectTerms = 16;
  const int bits = working_precision();
  XReal result = z / 2 * log(2 * pi()) - (z * (z + 1) + euler_gamma(bits) * z * z) / 2;
  if (z.is_zero()) return result;

  const XReal z2 = z * z;
  for (int k = 1; k <= kDirectTerms; ++k) {
    result += k * log1p(z / k) - z + z2 / (2 * k);
  }
  // Remainder: sum_{m>=3} (-1)^(m+1) z^m / m * (zeta(m-1) - H_N^(m-1)).
  XReal zpow = z2 * z;
  XReal tail(0);
  for (int m = 3; m < cfg.max_terms; ++m) {
    const unsigned long s = static_cast<unsigned long>(m - 1);
    XReal partial(0);
    for (int k = kDirectTerms; k >= 1; --k) partial += pow(XReal(k), -static_cast<long>(s));
    XReal zeta_tail = zeta_int(s, bits) - partial;
    XReal term = zpow * zeta_tail / m;
    if (m % 2 == 0) term = -term;
    tail += term;
    if (abs(term) <= cfg.series_rel_tol * ldexp(XReal(1), -kGuardBits) * max(abs(result), XReal(1))) {
      return result + tail;
    }
    zpow *= z;
  }
  throw NotConverged("Barnes G tail series did not converge");
}

}  // namespace

SpecFunConfig SpecFunConfig::for_working_precision() {
  SpecFunConfig cfg;
  cfg.precision_bits = working_precision();
  cfg.series_rel_tol = ldexp(XReal(1), 8 - cfg.precision_bits);
  return cfg;
}

void SpecFunConfig::validate() const {
  if (precision_bits < kMinPrecisionBits) throw DomainError("precision below minimum");
  PrecisionScope scope(precision_bits);
  if (series_rel_tol < ldexp(XReal(1), 8 - precision_bits)) {
    throw DomainError("series tolerance finer than the working precision supports");
  }
  if (max_terms < 1) throw DomainError("max_terms must be positive");
}

XReal euler_gamma(int bits) {
  static std::mutex mutex;
  static std::map<int, XReal> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(bits);
  if (it == cache.end()) it = cache.emplace(bits, mpfr_euler(bits)).first;
  return it->second;
}

XReal log_gamma(const XReal& x) {
  if (!(x > 0)) throw DomainError("log_gamma requires x > 0, got " + x.to_string(20));
  return lgamma_positive(x);
}

XReal log_beta(const XReal& a, const XReal& b) {
  if (!(a > 0) || !(b > 0)) throw DomainError("log_beta requires positive arguments");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

XReal hyp2f1_series(const XReal& a, const XReal& b, const XReal& c, const XReal& z,
                    const SpecFunConfig& cfg) {
  cfg.validate();
  if (is_nonpositive_integer(c)) throw DomainError("2F1: c is a nonpositive integer");
  const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  if (!terminating && !(abs(z) < 1)) throw DomainError("2F1 series requires |z| < 1");

  PrecisionScope scope(cfg.precision_bits + kGuardBits);
  const int gb = working_precision();
  const XReal ag = a.with_precision(gb), bg = b.with_precision(gb), cg = c.with_precision(gb),
              zg = z.with_precision(gb);
  const XReal tol = ldexp(cfg.series_rel_tol, -kGuardBits / 2);
  const XReal bound = max(max(abs(ag), abs(bg)), abs(cg));

  XReal sum(1);
  XReal term(1);
  for (int k = 0; k < cfg.max_terms; ++k) {
    term *= (ag + k) * (bg + k) / ((cg + k) * (k + 1)) * zg;
    if (term.is_zero()) return sum.with_precision(cfg.precision_bits);
    sum += term;
    if (k > bound && abs(term) <= tol * abs(sum)) return sum.with_precision(cfg.precision_bits);
  }
  throw NotConverged("2F1 series did not converge in " + std::to_string(cfg.max_terms) + " terms");
}

XReal hyp2f1_pfaff(const XReal& a, const XReal& b, const XReal& c, const XReal& z,
                   const SpecFunConfig& cfg) {
  if (!(z < 1)) throw DomainError("Pfaff transformation requires z < 1");
  PrecisionScope scope(cfg.precision_bits + kGuardBits);
  const int gb = working_precision();
  SpecFunConfig inner = cfg;
  inner.precision_bits = gb;
  inner.series_rel_tol = max(ldexp(XReal(1), 8 - gb), cfg.series_rel_tol.with_precision(gb));
  const XReal zg = z.with_precision(gb);
  const XReal w = zg / (zg - 1);
  XReal r = pow(1 - zg, -a.with_precision(gb)) *
            hyp2f1_series(a.with_precision(gb), c.with_precision(gb) - b.with_precision(gb),
                          c.with_precision(gb), w, inner);
  return r.with_precision(cfg.precision_bits);
}

XReal hyp2f1(const XReal& a, const XReal& b, const XReal& c, const XReal& z,
             const SpecFunConfig& cfg) {
  if (z > 0) throw DomainError("2F1 is only supported on the ray z <= 0");
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return hyp2f1_series(a, b, c, z, cfg);
  if (z >= -0.5) return hyp2f1_series(a, b, c, z, cfg);
  return hyp2f1_pfaff(a, b, c, z, cfg);
}

XReal tail_beta(const XReal& a, const XReal& b, const XReal& t, const SpecFunConfig& cfg) {
  cfg.validate();
  if (!(a > 0) || !(b > 0)) throw DomainError("tail_beta requires a, b > 0");
  if (!(t >= 0) || !(t <= 1)) throw DomainError("tail_beta requires t in [0, 1]");
  if (t == 1) return XReal(0).with_precision(cfg.precision_bits);

  PrecisionScope scope(cfg.precision_bits + kGuardBits);
  const int gb = working_precision();
  const XReal ag = a.with_precision(gb), bg = b.with_precision(gb), tg = t.with_precision(gb);
  SpecFunConfig inner = cfg;
  inner.precision_bits = gb;
  inner.series_rel_tol = ldexp(cfg.series_rel_tol.with_precision(gb), -kGuardBits / 2);

  XReal result;
  if (t.is_zero()) {
    result = exp(log_beta(ag, bg));
  } else if (t >= 0.5) {
    // int_0^u s^(b-1) (1-s)^(a-1) ds with u = 1 - t.
    const XReal u = 1 - tg;
    result = pow(u, bg) * pow(tg, ag) / bg * positive_ratio_series(ag + bg, bg + 1, u, inner);
  } else {
    const XReal lower =
        pow(tg, ag) * pow(1 - tg, bg) / ag * positive_ratio_series(ag + bg, ag + 1, tg, inner);
    result = exp(log_beta(ag, bg)) - lower;
  }
  return result.with_precision(cfg.precision_bits);
}

XReal log_barnes_g(const XReal& x, const SpecFunConfig& cfg) {
  cfg.validate();
  if (!(x > 0)) throw DomainError("log_barnes_g requires x > 0");
  PrecisionScope scope(cfg.precision_bits + kGuardBits);
  const int gb = working_precision();
  XReal y = x.with_precision(gb);
  XReal acc(0);
  while (y > 2) {
    y -= 1;
    acc += log_gamma(y);
  }
  while (y < 1) {
    acc -= log_gamma(y);
    y += 1;
  }
  XReal r = acc + log_barnes_g_base(y - 1, cfg);
  return r.with_precision(cfg.precision_bits);
}

}  // namespace jpvi
