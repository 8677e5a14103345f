#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace jpvi {

inline constexpr int kMinPrecisionBits = 64;
inline constexpr int kDefaultPrecisionBits = 256;
inline constexpr int kMaxPrecisionBits = 4096;

/// Precision used for new values (literals, integer conversions, parsed
/// strings). Thread-local; defaults to kDefaultPrecisionBits.
int working_precision();

/// RAII guard that sets the thread's working precision and restores the
/// previous value on destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

/// Extended-precision real number backed by an MPFR value.
///
/// Every value carries its own precision. Binary arithmetic between two
/// XReal values rounds to the larger of the two precisions; arithmetic with
/// builtin scalars keeps the precision of the XReal operand.
class XReal {
 public:
  XReal();
  XReal(long v);  // NOLINT(google-explicit-constructor)
  XReal(int v) : XReal(static_cast<long>(v)) {}  // NOLINT
  XReal(unsigned long v);                        // NOLINT
  XReal(unsigned v) : XReal(static_cast<unsigned long>(v)) {}  // NOLINT
  XReal(long long v) : XReal(static_cast<long>(v)) {}          // NOLINT
  XReal(unsigned long long v) : XReal(static_cast<unsigned long>(v)) {}  // NOLINT
  XReal(double v);  // NOLINT

  /// Parses a decimal string (e.g. "0.1", "-2.5e-3") correctly rounded to
  /// `bits`. Throws DomainError on malformed input.
  static XReal parse(std::string_view text, int bits = working_precision());
  static XReal nan(int bits = working_precision());
  static XReal infinity(int sign = 1, int bits = working_precision());
  /// Exactly num/den rounded to `bits`.
  static XReal ratio(long num, long den, int bits = working_precision());

  XReal(const XReal& other);
  XReal(XReal&& other) noexcept;
  XReal& operator=(const XReal& other);
  XReal& operator=(XReal&& other) noexcept;
  ~XReal();

  int precision_bits() const { return static_cast<int>(mpfr_get_prec(v_)); }
  /// Copy rounded (or extended) to `bits`.
  XReal with_precision(int bits) const;

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  /// Scientific notation with `digits` significant digits; 0 selects the
  /// number of decimal digits carried by the precision.
  std::string to_string(int digits = 0) const;

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  XReal operator-() const;

  XReal& operator+=(const XReal& rhs);
  XReal& operator-=(const XReal& rhs);
  XReal& operator*=(const XReal& rhs);
  XReal& operator/=(const XReal& rhs);

  template <std::integral I>
  XReal& operator+=(I rhs) {
    mpfr_add_si(v_, v_, static_cast<long>(rhs), MPFR_RNDN);
    return *this;
  }
  template <std::integral I>
  XReal& operator-=(I rhs) {
    mpfr_sub_si(v_, v_, static_cast<long>(rhs), MPFR_RNDN);
    return *this;
  }
  template <std::integral I>
  XReal& operator*=(I rhs) {
    mpfr_mul_si(v_, v_, static_cast<long>(rhs), MPFR_RNDN);
    return *this;
  }
  template <std::integral I>
  XReal& operator/=(I rhs) {
    mpfr_div_si(v_, v_, static_cast<long>(rhs), MPFR_RNDN);
    return *this;
  }
  XReal& operator+=(double rhs);
  XReal& operator-=(double rhs);
  XReal& operator*=(double rhs);
  XReal& operator/=(double rhs);

  friend XReal operator+(XReal a, const XReal& b) { return a += b; }
  friend XReal operator-(XReal a, const XReal& b) { return a -= b; }
  friend XReal operator*(XReal a, const XReal& b) { return a *= b; }
  friend XReal operator/(XReal a, const XReal& b) { return a /= b; }

  template <std::integral I>
  friend XReal operator+(XReal a, I b) { return a += b; }
  template <std::integral I>
  friend XReal operator-(XReal a, I b) { return a -= b; }
  template <std::integral I>
  friend XReal operator*(XReal a, I b) { return a *= b; }
  template <std::integral I>
  friend XReal operator/(XReal a, I b) { return a /= b; }
  template <std::integral I>
  friend XReal operator+(I a, XReal b) { return b += a; }
  template <std::integral I>
  friend XReal operator*(I a, XReal b) { return b *= a; }
  template <std::integral I>
  friend XReal operator-(I a, const XReal& b) {
    XReal r(b);
    mpfr_si_sub(r.v_, static_cast<long>(a), b.v_, MPFR_RNDN);
    return r;
  }
  template <std::integral I>
  friend XReal operator/(I a, const XReal& b) {
    XReal r(b);
    mpfr_si_div(r.v_, static_cast<long>(a), b.v_, MPFR_RNDN);
    return r;
  }

  friend XReal operator+(XReal a, double b) { return a += b; }
  friend XReal operator-(XReal a, double b) { return a -= b; }
  friend XReal operator*(XReal a, double b) { return a *= b; }
  friend XReal operator/(XReal a, double b) { return a /= b; }
  friend XReal operator+(double a, XReal b) { return b += a; }
  friend XReal operator*(double a, XReal b) { return b *= a; }
  friend XReal operator-(double a, const XReal& b);
  friend XReal operator/(double a, const XReal& b);

  friend bool operator==(const XReal& a, const XReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const XReal& a, const XReal& b);
  template <std::integral I>
  friend bool operator==(const XReal& a, I b) {
    return !a.is_nan() && mpfr_cmp_si(a.v_, static_cast<long>(b)) == 0;
  }
  template <std::integral I>
  friend std::partial_ordering operator<=>(const XReal& a, I b) {
    if (a.is_nan()) return std::partial_ordering::unordered;
    return mpfr_cmp_si(a.v_, static_cast<long>(b)) <=> 0;
  }
  friend bool operator==(const XReal& a, double b) { return a == XReal(b); }
  friend std::partial_ordering operator<=>(const XReal& a, double b) { return a <=> XReal(b); }

 private:
  struct Uninit {};
  XReal(Uninit, int bits);

  mpfr_t v_;
  bool live_ = true;

  friend XReal abs(const XReal&);
  friend XReal sqrt(const XReal&);
  friend XReal exp(const XReal&);
  friend XReal expm1(const XReal&);
  friend XReal log(const XReal&);
  friend XReal log1p(const XReal&);
  friend XReal pow(const XReal&, const XReal&);
  friend XReal pow(const XReal&, long);
  friend XReal sinh(const XReal&);
  friend XReal cosh(const XReal&);
  friend XReal tanh(const XReal&);
  friend XReal asinh(const XReal&);
  friend XReal lgamma_positive(const XReal&);
  friend XReal ldexp(const XReal&, long);
  friend XReal pi(int);
  friend XReal log2_constant(int);
  friend XReal mpfr_euler(int);
  friend XReal zeta_int(unsigned long, int);
};

XReal abs(const XReal& x);
XReal sqrt(const XReal& x);
XReal exp(const XReal& x);
XReal expm1(const XReal& x);
XReal log(const XReal& x);
XReal log1p(const XReal& x);
XReal pow(const XReal& x, const XReal& y);
XReal pow(const XReal& x, long n);
XReal sinh(const XReal& x);
XReal cosh(const XReal& x);
XReal tanh(const XReal& x);
XReal asinh(const XReal& x);
/// ln Gamma(x) for x > 0 (MPFR lngamma); callers validate the domain.
XReal lgamma_positive(const XReal& x);
/// x * 2^e, exact.
XReal ldexp(const XReal& x, long e);
XReal pi(int bits = working_precision());
XReal log2_constant(int bits = working_precision());
/// Euler-Mascheroni constant straight from MPFR (uncached).
XReal mpfr_euler(int bits = working_precision());
/// Riemann zeta at an integer argument s >= 2.
XReal zeta_int(unsigned long s, int bits = working_precision());

inline XReal square(const XReal& x) { return x * x; }
inline const XReal& max(const XReal& a, const XReal& b) { return a < b ? b : a; }
inline const XReal& min(const XReal& a, const XReal& b) { return b < a ? b : a; }

/// 2^(1-bits): spacing of representable values near one.
XReal epsilon(int bits = working_precision());

/// Number of significant decimal digits carried by `bits` binary digits.
int decimal_digits(int bits);

/// |a - b| / max(|a|, |b|, 1).
XReal scaled_difference(const XReal& a, const XReal& b);

}  // namespace jpvi
