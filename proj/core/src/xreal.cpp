#include "jpvi/xreal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "jpvi/errors.hpp"

namespace jpvi {

namespace {

thread_local int t_working_precision = kDefaultPrecisionBits;

int clamp_bits(int bits) { return std::clamp(bits, kMinPrecisionBits, 1 << 20); }

void raise_to(mpfr_ptr target, mpfr_srcptr other) {
  if (mpfr_get_prec(other) > mpfr_get_prec(target)) {
    mpfr_prec_round(target, mpfr_get_prec(other), MPFR_RNDN);
  }
}

}  // namespace

int working_precision() { return t_working_precision; }

PrecisionScope::PrecisionScope(int bits) : saved_(t_working_precision) {
  t_working_precision = clamp_bits(bits);
}

PrecisionScope::~PrecisionScope() { t_working_precision = saved_; }

XReal::XReal(Uninit, int bits) { mpfr_init2(v_, clamp_bits(bits)); }

XReal::XReal() : XReal(Uninit{}, working_precision()) { mpfr_set_zero(v_, 1); }

XReal::XReal(long v) : XReal(Uninit{}, working_precision()) { mpfr_set_si(v_, v, MPFR_RNDN); }

XReal::XReal(unsigned long v) : XReal(Uninit{}, working_precision()) {
  mpfr_set_ui(v_, v, MPFR_RNDN);
}

XReal::XReal(double v) : XReal(Uninit{}, working_precision()) { mpfr_set_d(v_, v, MPFR_RNDN); }

XReal XReal::parse(std::string_view text, int bits) {
  std::string buf(text);
  auto first = buf.find_first_not_of(" \t");
  auto last = buf.find_last_not_of(" \t");
  if (first == std::string::npos) throw DomainError("empty numeric literal");
  buf = buf.substr(first, last - first + 1);
  XReal r(Uninit{}, bits);
  char* end = nullptr;
  mpfr_strtofr(r.v_, buf.c_str(), &end, 10, MPFR_RNDN);
  if (end == buf.c_str() || *end != '\0') {
    throw DomainError("malformed numeric literal '" + std::string(text) + "'");
  }
  return r;
}

XReal XReal::nan(int bits) {
  XReal r(Uninit{}, bits);
  mpfr_set_nan(r.v_);
  return r;
}

XReal XReal::infinity(int sign, int bits) {
  XReal r(Uninit{}, bits);
  mpfr_set_inf(r.v_, sign);
  return r;
}

XReal XReal::ratio(long num, long den, int bits) {
  XReal r(Uninit{}, bits);
  mpfr_set_si(r.v_, num, MPFR_RNDN);
  mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
  return r;
}

XReal::XReal(const XReal& other) : XReal(Uninit{}, other.precision_bits()) {
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

XReal::XReal(XReal&& other) noexcept : live_(other.live_) {
  v_[0] = other.v_[0];
  other.live_ = false;
}

XReal& XReal::operator=(const XReal& other) {
  if (this == &other) return *this;
  if (!live_) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    live_ = true;
  } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
  }
  mpfr_set(v_, other.v_, MPFR_RNDN);
  return *this;
}

XReal& XReal::operator=(XReal&& other) noexcept {
  std::swap(v_[0], other.v_[0]);
  std::swap(live_, other.live_);
  return *this;
}

XReal::~XReal() {
  if (live_) mpfr_clear(v_);
}

XReal XReal::with_precision(int bits) const {
  XReal r(Uninit{}, bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string XReal::to_string(int digits) const {
  if (is_nan()) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (digits <= 0) digits = decimal_digits(precision_bits());
  if (is_zero()) return "0";
  int len = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, v_);
  std::vector<char> buf(static_cast<size_t>(len) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
  return std::string(buf.data(), static_cast<size_t>(len));
}

XReal XReal::operator-() const {
  XReal r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

XReal& XReal::operator+=(const XReal& rhs) {
  raise_to(v_, rhs.v_);
  mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

XReal& XReal::operator-=(const XReal& rhs) {
  raise_to(v_, rhs.v_);
  mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

XReal& XReal::operator*=(const XReal& rhs) {
  raise_to(v_, rhs.v_);
  mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

XReal& XReal::operator/=(const XReal& rhs) {
  raise_to(v_, rhs.v_);
  mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

XReal& XReal::operator+=(double rhs) {
  mpfr_add_d(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

XReal& XReal::operator-=(double rhs) {
  mpfr_sub_d(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

XReal& XReal::operator*=(double rhs) {
  mpfr_mul_d(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

XReal& XReal::operator/=(double rhs) {
  mpfr_div_d(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

XReal operator-(double a, const XReal& b) {
  XReal r(b);
  mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

XReal operator/(double a, const XReal& b) {
  XReal r(b);
  mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const XReal& a, const XReal& b) {
  if (a.is_nan() || b.is_nan()) return std::partial_ordering::unordered;
  return mpfr_cmp(a.v_, b.v_) <=> 0;
}

#define JPVI_UNARY(name, fn)         \
  XReal name(const XReal& x) {       \
    XReal r(x);                      \
    fn(r.v_, x.v_, MPFR_RNDN);       \
    return r;                        \
  }

JPVI_UNARY(abs, mpfr_abs)
JPVI_UNARY(sqrt, mpfr_sqrt)
JPVI_UNARY(exp, mpfr_exp)
JPVI_UNARY(expm1, mpfr_expm1)
JPVI_UNARY(log, mpfr_log)
JPVI_UNARY(log1p, mpfr_log1p)
JPVI_UNARY(sinh, mpfr_sinh)
JPVI_UNARY(cosh, mpfr_cosh)
JPVI_UNARY(tanh, mpfr_tanh)
JPVI_UNARY(asinh, mpfr_asinh)
JPVI_UNARY(lgamma_positive, mpfr_lngamma)

#undef JPVI_UNARY

XReal pow(const XReal& x, const XReal& y) {
  XReal r(XReal::Uninit{}, std::max(x.precision_bits(), y.precision_bits()));
  mpfr_pow(r.v_, x.v_, y.v_, MPFR_RNDN);
  return r;
}

XReal pow(const XReal& x, long n) {
  XReal r(x);
  mpfr_pow_si(r.v_, x.v_, n, MPFR_RNDN);
  return r;
}

XReal ldexp(const XReal& x, long e) {
  XReal r(x);
  mpfr_mul_2si(r.v_, x.v_, e, MPFR_RNDN);
  return r;
}

XReal pi(int bits) {
  XReal r(XReal::Uninit{}, bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

XReal log2_constant(int bits) {
  XReal r(XReal::Uninit{}, bits);
  mpfr_const_log2(r.v_, MPFR_RNDN);
  return r;
}

XReal mpfr_euler(int bits) {
  XReal r(XReal::Uninit{}, bits);
  mpfr_const_euler(r.v_, MPFR_RNDN);
  return r;
}

XReal zeta_int(unsigned long s, int bits) {
  XReal r(XReal::Uninit{}, bits);
  mpfr_zeta_ui(r.v_, s, MPFR_RNDN);
  return r;
}

XReal epsilon(int bits) {
  PrecisionScope scope(bits);
  return ldexp(XReal(1), 1 - bits);
}

int decimal_digits(int bits) {
  return static_cast<int>(std::floor((bits - 1) * 0.30102999566398119521));
}

XReal scaled_difference(const XReal& a, const XReal& b) {
  XReal scale = max(max(abs(a), abs(b)), XReal(1).with_precision(a.precision_bits()));
  return abs(a - b) / scale;
}

}  // namespace jpvi
