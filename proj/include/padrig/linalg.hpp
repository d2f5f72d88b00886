#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "padrig/matrix.hpp"
#include "padrig/rational.hpp"

namespace padrig {

struct JordanBlock {
  Rational eigenvalue;
  std::size_t size = 1;
  friend bool operator==(const JordanBlock&, const JordanBlock&) = default;
};

/// Jordan structure: blocks sorted by eigenvalue, sizes descending within an eigenvalue.
class JordanType {
 public:
  JordanType() = default;
  /// Sorts into canonical order; fails with ErrorKind::input on a zero-size block.
  explicit JordanType(std::vector<JordanBlock> blocks);

  const std::vector<JordanBlock>& blocks() const noexcept { return blocks_; }
  std::size_t rank() const noexcept;
  /// Eigenvalues repeated by block size.
  std::vector<Rational> eigenvalues() const;
  /// Block-diagonal Jordan matrix, ones on the superdiagonal of each block.
  MatrixQ matrix() const;
  /// Same sizes, every eigenvalue shifted by c.
  JordanType shifted(const Rational& c) const;
  /// Blocks whose eigenvalues differ by a nonzero integer.
  bool is_resonant() const;

  /// "(λ: s1 s2) (μ: s3)".
  std::string to_string() const;
  friend bool operator==(const JordanType&, const JordanType&) = default;

 private:
  std::vector<JordanBlock> blocks_;
};

struct JordanDecomposition {
  JordanType type;
  MatrixQ transform;  // transform^-1 * A * transform == type.matrix()
};

/// Characteristic polynomial det(xI - A), coefficients from degree 0 up (monic).
std::vector<Rational> characteristic_polynomial(const MatrixQ& a);

/// Rational roots with multiplicity. Fails with ErrorKind::condition
/// ("non-rational spectrum") when the polynomial does not split over Q.
std::vector<std::pair<Rational, std::size_t>> rational_roots(std::vector<Rational> poly);

JordanDecomposition jordan_form(const MatrixQ& a);

enum class EigenvalueGrouping { exact, mod_integers };

/// Dimension of the commutant of a matrix with Jordan type J, grouping
/// eigenvalues exactly or by their class mod Z.
std::size_t centralizer_dim(const JordanType& j, EigenvalueGrouping mode);

/// All n^2 differences a_i - a_j (i, j over the list, i = j included).
std::vector<Rational> end_exponents(const std::vector<Rational>& exponents);

}  // namespace padrig
