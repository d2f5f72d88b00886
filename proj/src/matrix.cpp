#include "padrig/matrix.hpp"

#include <sstream>
#include <utility>

#include "padrig/error.hpp"

namespace padrig {

MatrixQ::MatrixQ(std::size_t n, std::vector<Rational> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) fail(ErrorKind::input, "matrix entry count does not match size");
}

MatrixQ MatrixQ::identity(std::size_t n) {
  MatrixQ m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

MatrixQ MatrixQ::diagonal(const std::vector<Rational>& d) {
  MatrixQ m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

bool MatrixQ::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool MatrixQ::is_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j && !(*this)(i, j).is_zero()) return false;
  return true;
}

bool MatrixQ::is_scalar() const {
  if (!is_diagonal()) return false;
  for (std::size_t i = 1; i < n_; ++i)
    if ((*this)(i, i) != (*this)(0, 0)) return false;
  return true;
}

Rational MatrixQ::trace() const {
  Rational t;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

MatrixQ& MatrixQ::operator+=(const MatrixQ& b) {
  if (b.n_ != n_) fail(ErrorKind::input, "matrix size mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += b.a_[i];
  return *this;
}

MatrixQ& MatrixQ::operator-=(const MatrixQ& b) {
  if (b.n_ != n_) fail(ErrorKind::input, "matrix size mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= b.a_[i];
  return *this;
}

MatrixQ operator*(const MatrixQ& a, const MatrixQ& b) {
  if (a.n_ != b.n_) fail(ErrorKind::input, "matrix size mismatch");
  const std::size_t n = a.n_;
  MatrixQ c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

MatrixQ operator*(const Rational& c, MatrixQ a) {
  for (auto& x : a.a_) x *= c;
  return a;
}

MatrixQ MatrixQ::pow(std::size_t k) const {
  MatrixQ result = identity(n_);
  MatrixQ base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

MatrixQ MatrixQ::inverse() const {
  const std::size_t n = n_;
  MatrixQ a = *this;
  MatrixQ inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).is_zero()) ++piv;
    if (piv == n) fail(ErrorKind::input, "singular matrix");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const Rational scale = Rational(1) / a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      const Rational f = a(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

std::string MatrixQ::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < n_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < n_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << ']';
  }
  os << ']';
  return os.str();
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(DenseQ& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t piv = row;
    while (piv < m.rows && m.at(piv, col).is_zero()) ++piv;
    if (piv == m.rows) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
    const Rational scale = Rational(1) / m.at(row, col);
    for (std::size_t j = col; j < m.cols; ++j) m.at(row, j) *= scale;
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == row || m.at(r, col).is_zero()) continue;
      const Rational f = m.at(r, col);
      for (std::size_t j = col; j < m.cols; ++j) m.at(r, j) -= f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

DenseQ dense(const MatrixQ& m) {
  DenseQ d(m.size(), m.size());
  d.a = m.entries();
  return d;
}

}  // namespace

std::size_t rank(DenseQ m) { return rref(m).size(); }

std::vector<std::vector<Rational>> kernel(DenseQ m) {
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const MatrixQ& m) { return rank(dense(m)); }
std::vector<std::vector<Rational>> kernel(const MatrixQ& m) { return kernel(dense(m)); }

}  // namespace padrig
