#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "padrig/rational.hpp"

namespace padrig {

/// Square matrix of exact rationals, row-major.
class MatrixQ {
 public:
  MatrixQ() = default;
  explicit MatrixQ(std::size_t n) : n_(n), a_(n * n) {}
  MatrixQ(std::size_t n, std::vector<Rational> row_major);

  static MatrixQ identity(std::size_t n);
  static MatrixQ diagonal(const std::vector<Rational>& d);

  std::size_t size() const noexcept { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<Rational>& entries() const noexcept { return a_; }

  bool is_zero() const;
  bool is_scalar() const;
  bool is_diagonal() const;
  Rational trace() const;

  MatrixQ& operator+=(const MatrixQ& b);
  MatrixQ& operator-=(const MatrixQ& b);
  friend MatrixQ operator+(MatrixQ a, const MatrixQ& b) { return a += b; }
  friend MatrixQ operator-(MatrixQ a, const MatrixQ& b) { return a -= b; }
  friend MatrixQ operator*(const MatrixQ& a, const MatrixQ& b);
  friend MatrixQ operator*(const Rational& c, MatrixQ a);
  friend bool operator==(const MatrixQ&, const MatrixQ&) = default;

  MatrixQ pow(std::size_t k) const;
  /// Fails with ErrorKind::input when singular.
  MatrixQ inverse() const;

  /// "[[a, b], [c, d]]" with rational strings.
  std::string to_string() const;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> a_;
};

/// Dense rectangular rational matrix used for kernels and ranks.
struct DenseQ {
  std::size_t rows = 0, cols = 0;
  std::vector<Rational> a;
  DenseQ(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  Rational& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

std::size_t rank(DenseQ m);
/// Basis of {v : m v = 0}, each vector of length m.cols.
std::vector<std::vector<Rational>> kernel(DenseQ m);

std::size_t rank(const MatrixQ& m);
std::vector<std::vector<Rational>> kernel(const MatrixQ& m);

}  // namespace padrig
