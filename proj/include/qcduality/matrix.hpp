#pragma once

// Dense matrices and polynomials over any scalar family from scalar.hpp.

#include "qcduality/errors.hpp"
#include "qcduality/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace qcd {

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, from_int<S>(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = from_int<S>(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  S trace() const {
    S t = from_int<S>(0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const S& x) { return qcd::is_zero(x); });
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, magnitude(x));
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidArgument, "matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (qcd::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (qcd::is_zero(b(k, j))) continue;
          c(i, j) += aik * b(k, j);
        }
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
  return a * b - b * a;
}

template <class S>
Matrix<S> power(const Matrix<S>& a, int k) {
  Matrix<S> r = Matrix<S>::identity(a.rows());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

template <class S, class T>
Matrix<T> convert(const Matrix<S>& m, T (*f)(const S&)) {
  Matrix<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = f(m(i, j));
  return out;
}

inline Matrix<Complex> to_complex_matrix(const Matrix<QSqrt2>& m) { return convert<QSqrt2, Complex>(m, &to_complex<QSqrt2>); }

namespace detail {

// Index of the pivot in column `col` at or below `row`, or -1. Exact scalars
// take the first nonzero entry, floating ones the largest magnitude.
template <class S>
long choose_pivot(const Matrix<S>& a, std::size_t row, std::size_t col) {
  long best = -1;
  double best_mag = 0.0;
  for (std::size_t r = row; r < a.rows(); ++r) {
    if (is_zero(a(r, col))) continue;
    if constexpr (is_exact_v<S>) {
      return static_cast<long>(r);
    } else {
      double m = magnitude(a(r, col));
      if (best < 0 || m > best_mag) {
        best = static_cast<long>(r);
        best_mag = m;
      }
    }
  }
  return best;
}

template <class S>
void swap_rows(Matrix<S>& a, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

}  // namespace detail

/// Gauss-Jordan inverse; throws PoleCollision on a singular matrix.
template <class S>
Matrix<S> inverse(Matrix<S> a) {
  if (!a.is_square()) throw Error(ErrorCode::InvalidArgument, "inverse of a non-square matrix");
  const std::size_t n = a.rows();
  Matrix<S> inv = Matrix<S>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    long p = detail::choose_pivot(a, col, col);
    if (p < 0) throw Error(ErrorCode::PoleCollision, "singular matrix in inverse");
    detail::swap_rows(a, col, static_cast<std::size_t>(p));
    detail::swap_rows(inv, col, static_cast<std::size_t>(p));
    S piv_inv = from_int<S>(1) / a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= piv_inv;
      inv(col, j) *= piv_inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || is_zero(a(r, col))) continue;
      S f = a(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_zero(a(col, j))) a(r, j) -= f * a(col, j);
        if (!is_zero(inv(col, j))) inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Solves a x = b by Gaussian elimination with the pivoting rule above.
template <class S>
std::vector<S> solve(Matrix<S> a, std::vector<S> b) {
  const std::size_t n = a.rows();
  if (!a.is_square() || b.size() != n) throw Error(ErrorCode::InvalidArgument, "solve shape mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    long p = detail::choose_pivot(a, col, col);
    if (p < 0) throw Error(ErrorCode::PoleCollision, "singular matrix in solve");
    detail::swap_rows(a, col, static_cast<std::size_t>(p));
    std::swap(b[col], b[static_cast<std::size_t>(p)]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(a(r, col))) continue;
      S f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<S> x(n, from_int<S>(0));
  for (std::size_t i = n; i-- > 0;) {
    S acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

template <class S>
S determinant(Matrix<S> a) {
  if (!a.is_square()) throw Error(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  S det = from_int<S>(1);
  for (std::size_t col = 0; col < n; ++col) {
    long p = detail::choose_pivot(a, col, col);
    if (p < 0) return from_int<S>(0);
    if (static_cast<std::size_t>(p) != col) {
      detail::swap_rows(a, col, static_cast<std::size_t>(p));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(a(r, col))) continue;
      S f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

/// Dense univariate polynomial, coefficients in ascending order of degree.
template <class S>
class Polynomial {
 public:
  Polynomial() : c_{from_int<S>(0)} {}
  explicit Polynomial(std::vector<S> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(from_int<S>(0));
  }

  static Polynomial monomial(std::size_t degree, const S& coeff = from_int<S>(1)) {
    std::vector<S> c(degree + 1, from_int<S>(0));
    c[degree] = coeff;
    return Polynomial(std::move(c));
  }

  const std::vector<S>& coefficients() const { return c_; }
  std::size_t size() const { return c_.size(); }
  const S& operator[](std::size_t k) const { return c_[k]; }

  // exact degree; -1 for the zero polynomial (exact scalars only meaningful)
  long degree() const {
    for (std::size_t k = c_.size(); k-- > 0;)
      if (!is_zero(c_[k])) return static_cast<long>(k);
    return -1;
  }

  S operator()(const S& x) const {
    S acc = from_int<S>(0);
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<S> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * from_int<S>(static_cast<long>(k)));
    return Polynomial(std::move(d));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<S> c(a.c_.size() + b.c_.size() - 1, from_int<S>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<S> c(std::max(a.c_.size(), b.c_.size()), from_int<S>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + b * Polynomial(std::vector<S>{from_int<S>(-1)});
  }

  /// Largest coefficient deviation; trailing zero padding is ignored.
  friend double max_difference(const Polynomial& a, const Polynomial& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
      S x = k < a.size() ? a[k] : from_int<S>(0);
      S y = k < b.size() ? b[k] : from_int<S>(0);
      m = std::max(m, magnitude(S(x - y)));
    }
    return m;
  }
  friend bool exactly_equal(const Polynomial& a, const Polynomial& b) {
    for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
      S x = k < a.size() ? a[k] : from_int<S>(0);
      S y = k < b.size() ? b[k] : from_int<S>(0);
      if (!is_zero(S(x - y))) return false;
    }
    return true;
  }

 private:
  std::vector<S> c_;
};

/// det(A - lambda I) by the Faddeev-LeVerrier recurrence; leading coefficient (-1)^n.
/// The 0x0 matrix has characteristic polynomial 1.
template <class S>
Polynomial<S> characteristic_polynomial(const Matrix<S>& a) {
  if (!a.is_square()) throw Error(ErrorCode::InvalidArgument, "characteristic polynomial of a non-square matrix");
  const std::size_t n = a.rows();
  // monic det(lambda I - A) = sum c[k] lambda^k
  std::vector<S> c(n + 1, from_int<S>(0));
  c[n] = from_int<S>(1);
  Matrix<S> am(n, n);  // A M_{k-1}, with M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix<S> mk = std::move(am);
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    am = a * mk;
    c[n - k] = -am.trace() / from_int<S>(static_cast<long>(k));
  }
  if (n % 2 == 1)
    for (auto& x : c) x = -x;
  return Polynomial<S>(std::move(c));
}

}  // namespace qcd
