#include "jpvi/linalg.hpp"

#include <string>

namespace jpvi {

XMatrix::XMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols)) {
  if (rows < 0 || cols < 0) throw DomainError("negative matrix dimension");
}

XMatrix XMatrix::identity(int n) {
  XMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = XReal(1);
  return m;
}

XMatrix XMatrix::symmetric(int n, const std::function<XReal(int, int)>& f) {
  XMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      m(i, j) = f(i, j);
      if (j != i) m(j, i) = m(i, j);
    }
  }
  return m;
}

bool XMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i) {
    for (int j = i + 1; j < cols_; ++j) {
      if (!((*this)(i, j) == (*this)(j, i))) return false;
    }
  }
  return true;
}

XMatrix operator*(const XMatrix& a, const XMatrix& b) {
  if (a.cols_ != b.rows_) throw DomainError("matrix product dimension mismatch");
  XMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      XReal s(0);
      for (int k = 0; k < a.cols_; ++k) s += a(i, k) * b(k, j);
      c(i, j) = std::move(s);
    }
  }
  return c;
}

XMatrix operator-(const XMatrix& a, const XMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix difference dimension mismatch");
  XMatrix c(a.rows_, a.cols_);
  for (size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
  return c;
}

XReal trace(const XMatrix& m) {
  XReal s(0);
  for (int i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

XReal trace_of_product(const XMatrix& a, const XMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw DomainError("trace product dimension mismatch");
  XReal s(0);
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  }
  return s;
}

SpdFactorization factor_spd(const XMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("factor_spd needs a square matrix");
  const int n = m.rows();
  SpdFactorization f;
  f.lower_ = XMatrix::identity(n);
  f.pivots_.resize(static_cast<size_t>(n));

  for (int j = 0; j < n; ++j) {
    XReal d = m(j, j);
    for (int k = 0; k < j; ++k) d -= square(f.lower_(j, k)) * f.pivots_[k];

    if (!d.is_finite()) throw NonFinitePivot(j, "non-finite pivot at index " + std::to_string(j));
    const int bits = std::max(d.precision_bits(), m(j, j).precision_bits());
    // Pivot magnitude relative to the diagonal entry it came from.
    XReal scale = abs(m(j, j));
    XReal floor = ldexp(scale, -bits / 2);
    if (d.sign() <= 0) {
      if (abs(d) <= ldexp(scale, 8 - bits)) {
        throw NonFinitePivot(j, "pivot " + std::to_string(j) + " lost to cancellation");
      }
      throw NotPositiveDefinite(j, "nonpositive pivot at index " + std::to_string(j));
    }
    if (d < floor) throw NonFinitePivot(j, "pivot " + std::to_string(j) + " lost half its bits");

    for (int i = j + 1; i < n; ++i) {
      XReal s = m(i, j);
      for (int k = 0; k < j; ++k) s -= f.lower_(i, k) * f.lower_(j, k) * f.pivots_[k];
      f.lower_(i, j) = s / d;
    }
    f.pivots_[j] = std::move(d);
  }
  return f;
}

XReal SpdFactorization::log_det() const {
  XReal s(0);
  for (const auto& d : pivots_) s += log(d);
  return s;
}

std::vector<XReal> SpdFactorization::solve(std::span<const XReal> rhs) const {
  const int n = size();
  if (static_cast<int>(rhs.size()) != n) throw DomainError("solve: dimension mismatch");
  std::vector<XReal> y(rhs.begin(), rhs.end());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= lower_(i, k) * y[k];
  }
  for (int i = 0; i < n; ++i) y[i] /= pivots_[i];
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) y[i] -= lower_(k, i) * y[k];
  }
  return y;
}

XMatrix SpdFactorization::solve(const XMatrix& rhs) const {
  const int n = size();
  if (rhs.rows() != n) throw DomainError("solve: dimension mismatch");
  XMatrix out(n, rhs.cols());
  std::vector<XReal> col(static_cast<size_t>(n));
  for (int c = 0; c < rhs.cols(); ++c) {
    for (int i = 0; i < n; ++i) col[i] = rhs(i, c);
    auto x = solve(col);
    for (int i = 0; i < n; ++i) out(i, c) = std::move(x[i]);
  }
  return out;
}

XMatrix SpdFactorization::unit_lower_inverse() const {
  const int n = size();
  XMatrix inv = XMatrix::identity(n);
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      XReal s(0);
      for (int k = j; k < i; ++k) s -= lower_(i, k) * inv(k, j);
      inv(i, j) = std::move(s);
    }
  }
  return inv;
}

LogDetDerivatives logdet_derivatives(const SpdFactorization& f, const XMatrix& m1,
                                     const XMatrix& m2, const XMatrix& m3) {
  const XMatrix x1 = f.solve(m1);
  const XMatrix x2 = f.solve(m2);
  const XMatrix x3 = f.solve(m3);
  const XMatrix x1sq = x1 * x1;
  LogDetDerivatives d;
  d.first = trace(x1);
  d.second = trace(x2) - trace(x1sq);
  d.third = trace(x3) - 3 * trace_of_product(x2, x1) + 2 * trace_of_product(x1sq, x1);
  return d;
}

LogDetDerivatives logdet_derivatives(const XMatrix& m, const XMatrix& m1, const XMatrix& m2,
                                     const XMatrix& m3) {
  return logdet_derivatives(factor_spd(m), m1, m2, m3);
}

}  // namespace jpvi
