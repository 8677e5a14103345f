#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "jpvi/errors.hpp"
#include "jpvi/xreal.hpp"

namespace jpvi {

/// Dense row-major matrix of XReal.
class XMatrix {
 public:
  XMatrix() = default;
  XMatrix(int rows, int cols);

  static XMatrix identity(int n);
  /// Builds a symmetric matrix from f(i, j) evaluated for i <= j only, so
  /// e(i, j) == e(j, i) holds bit for bit.
  static XMatrix symmetric(int n, const std::function<XReal(int, int)>& f);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  XReal& operator()(int i, int j) { return data_[static_cast<size_t>(i * cols_ + j)]; }
  const XReal& operator()(int i, int j) const { return data_[static_cast<size_t>(i * cols_ + j)]; }

  std::span<const XReal> entries() const { return data_; }
  bool is_symmetric() const;

  friend XMatrix operator*(const XMatrix& a, const XMatrix& b);
  friend XMatrix operator-(const XMatrix& a, const XMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<XReal> data_;
};

XReal trace(const XMatrix& m);
/// tr(a * b) without forming the product.
XReal trace_of_product(const XMatrix& a, const XMatrix& b);

/// M = L D L^T with L unit lower triangular and D diagonal (the pivots).
class SpdFactorization {
 public:
  int size() const { return static_cast<int>(pivots_.size()); }

  const XMatrix& unit_lower() const { return lower_; }
  std::span<const XReal> pivots() const { return pivots_; }

  XReal log_det() const;
  /// Always +1: construction fails unless every pivot is positive.
  int det_sign() const { return 1; }
  XReal det() const { return exp(log_det()); }

  std::vector<XReal> solve(std::span<const XReal> rhs) const;
  XMatrix solve(const XMatrix& rhs) const;
  /// L^{-1}; row j holds the ascending coefficients of the j-th monic
  /// orthogonal polynomial when M is a Hankel moment matrix.
  XMatrix unit_lower_inverse() const;

 private:
  friend SpdFactorization factor_spd(const XMatrix& m);
  XMatrix lower_;
  std::vector<XReal> pivots_;
};

/// LDL^T factorization of a symmetric positive definite matrix.
///
/// Throws NotPositiveDefinite(index) for a clearly nonpositive pivot and
/// NonFinitePivot(index) when a pivot keeps fewer than half of the working
/// bits after cancellation (retry at higher precision).
SpdFactorization factor_spd(const XMatrix& m);

struct LogDetDerivatives {
  XReal first;
  XReal second;
  XReal third;
};

/// First three t-derivatives of ln det M(t) from the elementwise
/// derivatives M1, M2, M3 via trace identities.
LogDetDerivatives logdet_derivatives(const XMatrix& m, const XMatrix& m1, const XMatrix& m2,
                                     const XMatrix& m3);
LogDetDerivatives logdet_derivatives(const SpdFactorization& f, const XMatrix& m1,
                                     const XMatrix& m2, const XMatrix& m3);

/// Runs `body` at the current working precision and, on NonFinitePivot,
/// again at twice the precision up to kMaxPrecisionBits. Throws
/// PrecisionExhausted when the largest precision still fails.
template <class F>
auto with_precision_escalation(F&& body) -> decltype(body()) {
  int bits = working_precision();
  for (;;) {
    PrecisionScope scope(bits);
    try {
      return body();
    } catch (const NonFinitePivot& e) {
      if (bits >= kMaxPrecisionBits) {
        throw PrecisionExhausted(std::string("precision escalation failed at ") +
                                 std::to_string(bits) + " bits: " + e.what());
      }
      bits *= 2;
    }
  }
}

}  // namespace jpvi
