#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lfhtc/error.hpp"

namespace lfhtc {

// Always canonical (reduced, positive denominator) after every GMP operation.
using Rational = mpq_class;

inline Rational parse_rational(const std::string& text) {
  auto trim = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("empty rational");
  const auto slash = s.find('/');
  auto integer = [&](const std::string& part) {
    if (part.empty()) throw ParseError("malformed rational '" + s + "'");
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) throw ParseError("malformed rational '" + s + "'");
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') throw ParseError("malformed rational '" + s + "'");
    return mpz_class(part[0] == '+' ? part.substr(1) : part, 10);
  };
  if (slash == std::string::npos) return Rational(integer(s));
  const mpz_class num = integer(s.substr(0, slash));
  const mpz_class den = integer(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + s + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// "p/q", or "p" when q == 1.
inline std::string format_rational(const Rational& q) { return q.get_str(10); }

class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& row : init) {
      if (row.size() != cols_) throw Error("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static RMatrix identity(std::size_t n) {
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Rational& at(std::size_t i, std::size_t j) {
    if (i >= rows_ || j >= cols_) throw Error("matrix index out of range");
    return (*this)(i, j);
  }
  const Rational& at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw Error("matrix index out of range");
    return (*this)(i, j);
  }

  RMatrix transpose() const {
    RMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_square() const { return rows_ == cols_; }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
  }

  // Rows `r` and columns `c`, in the given order.
  RMatrix sub(const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) const {
    RMatrix s(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) s(i, j) = at(r[i], c[j]);
    return s;
  }

  RMatrix& operator+=(const RMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  RMatrix& operator-=(const RMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  friend RMatrix operator+(RMatrix a, const RMatrix& b) { return a += b; }
  friend RMatrix operator-(RMatrix a, const RMatrix& b) { return a -= b; }

  friend RMatrix operator*(const RMatrix& a, const RMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix product dimension mismatch");
    RMatrix c(a.rows_, b.cols_);
    Rational tmp;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j) == 0) continue;
          tmp = x * b(k, j);
          c(i, j) += tmp;
        }
      }
    return c;
  }

  friend bool operator==(const RMatrix& a, const RMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same(const RMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

namespace detail {

using ZMatrix = std::vector<std::vector<mpz_class>>;

// Each row scaled by the lcm of its denominators.
inline ZMatrix integer_rows(const RMatrix& m) {
  ZMatrix z(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) z[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  return z;
}

// Fraction-free row echelon form in place. Every division is exact: the
// entries after step k are k x k minors of the input. Returns pivot columns.
inline std::vector<std::size_t> bareiss_echelon(ZMatrix& a, std::size_t ncols, int* sign = nullptr) {
  const std::size_t n = a.size();
  std::vector<std::size_t> pivots;
  mpz_class prev = 1;
  std::size_t r = 0;
  if (sign) *sign = 1;
  for (std::size_t c = 0; c < ncols && r < n; ++c) {
    std::size_t p = r;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      if (sign) *sign = -*sign;
    }
    for (std::size_t i = r + 1; i < n; ++i) {
      for (std::size_t j = c + 1; j < ncols; ++j) {
        a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

// Exact rank by fraction-free elimination.
inline std::size_t rank(const RMatrix& m) {
  auto z = detail::integer_rows(m);
  return detail::bareiss_echelon(z, m.cols()).size();
}

inline Rational determinant(const RMatrix& m) {
  if (!m.is_square()) throw Error("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Rational scale = 1;
  auto z = detail::integer_rows(m);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    scale /= l;
  }
  int sign = 1;
  const auto piv = detail::bareiss_echelon(z, n, &sign);
  if (piv.size() < n) return 0;
  Rational det(z[n - 1][n - 1]);
  return det * scale * sign;
}

// Solves m x = b (b may hold several columns). Throws SingularError when m
// is singular. Forward elimination is fraction-free on the augmented
// integer matrix; back substitution runs over the rationals.
inline RMatrix solve(const RMatrix& m, const RMatrix& b) {
  if (!m.is_square()) throw Error("solve needs a square matrix");
  if (b.rows() != m.rows()) throw Error("right-hand side dimension mismatch");
  const std::size_t n = m.rows(), k = b.cols();
  RMatrix aug(n, n + k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    for (std::size_t j = 0; j < k; ++j) aug(i, n + j) = b(i, j);
  }
  auto z = detail::integer_rows(aug);
  // Pivot only within the coefficient block.
  const std::size_t cols = n + k;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && z[p][c] == 0) ++p;
    if (p == n) throw SingularError("singular matrix");
    std::swap(z[p], z[c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        z[i][j] = z[c][c] * z[i][j] - z[i][c] * z[c][j];
        mpz_divexact(z[i][j].get_mpz_t(), z[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      z[i][c] = 0;
    }
    prev = z[c][c];
  }
  RMatrix x(n, k);
  for (std::size_t col = 0; col < k; ++col)
    for (std::size_t ii = n; ii-- > 0;) {
      Rational acc(z[ii][n + col]);
      for (std::size_t j = ii + 1; j < n; ++j) acc -= Rational(z[ii][j]) * x(j, col);
      x(ii, col) = acc / Rational(z[ii][ii]);
    }
  return x;
}

inline RMatrix inverse(const RMatrix& m) { return solve(m, RMatrix::identity(m.rows())); }

// Leading principal minors det(m[0..k, 0..k]) for k = 1..n.
inline std::vector<Rational> leading_minors(const RMatrix& m) {
  if (!m.is_square()) throw Error("leading minors of a non-square matrix");
  std::vector<Rational> out;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    out.push_back(determinant(m.sub(idx, idx)));
  }
  return out;
}

// Sylvester's criterion on a symmetric matrix.
inline bool is_positive_definite(const RMatrix& m) {
  if (!m.is_symmetric()) return false;
  for (const auto& q : leading_minors(m))
    if (q <= 0) return false;
  return true;
}

}  // namespace lfhtc
