#pragma once

// Random generators and independent oracles shared by the unit, property and
// acceptance tests. Oracles use plain mpq_class arithmetic, not the library.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

#include "padrig/fuchsian.hpp"
#include "padrig/linalg.hpp"
#include "padrig/matrix.hpp"
#include "padrig/rational.hpp"

namespace testsupport {

using padrig::Rational;

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// a/d with |a/d| <= bound, d in [1, max_den].
inline Rational random_rational(std::mt19937_64& rng, std::int64_t max_den, std::int64_t bound = 3) {
  const std::int64_t d = uniform(rng, 1, max_den);
  const std::int64_t a = uniform(rng, -bound * d, bound * d);
  return Rational(padrig::Integer(a), padrig::Integer(d));
}

/// Random Jordan type of total size n; some eigenvalues repeat or differ by integers.
inline padrig::JordanType random_jordan(std::mt19937_64& rng, std::size_t n, std::int64_t max_den) {
  std::vector<padrig::JordanBlock> blocks;
  std::vector<Rational> used;
  std::size_t left = n;
  while (left > 0) {
    const auto size = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(left)));
    Rational ev;
    const auto mode = uniform(rng, 0, 3);
    if (!used.empty() && mode == 0) {
      ev = used[uniform(rng, 0, used.size() - 1)];
    } else if (!used.empty() && mode == 1) {
      ev = used[uniform(rng, 0, used.size() - 1)] + Rational(uniform(rng, -2, 2));
    } else {
      ev = random_rational(rng, max_den);
    }
    used.push_back(ev);
    blocks.push_back({ev, size});
    left -= size;
  }
  return padrig::JordanType(std::move(blocks));
}

/// Product of random integer elementary matrices: determinant 1, integer inverse.
inline padrig::MatrixQ random_unimodular(std::mt19937_64& rng, std::size_t n, int steps = 6) {
  auto m = padrig::MatrixQ::identity(n);
  if (n < 2) return m;
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(uniform(rng, 0, n - 1));
    auto j = static_cast<std::size_t>(uniform(rng, 0, n - 2));
    if (j >= i) ++j;
    const Rational c(uniform(rng, -2, 2));
    for (std::size_t k = 0; k < n; ++k) m(i, k) += c * m(j, k);
  }
  return m;
}

/// Explicit Jordan matrix built entry by entry (independent of JordanType::matrix).
inline std::vector<std::vector<mpq_class>> jordan_matrix(const padrig::JordanType& j, bool mod_integers) {
  const std::size_t n = j.rank();
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n, 0));
  std::size_t at = 0;
  for (const auto& b : j.blocks()) {
    mpq_class ev = b.eigenvalue.raw();
    if (mod_integers) {
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), ev.get_num_mpz_t(), ev.get_den_mpz_t());
      ev -= fl;
    }
    for (std::size_t i = 0; i < b.size; ++i) {
      m[at + i][at + i] = ev;
      if (i + 1 < b.size) m[at + i][at + i + 1] = 1;
    }
    at += b.size;
  }
  return m;
}

/// Rank by fraction-exact Gaussian elimination.
inline std::size_t oracle_rank(std::vector<std::vector<mpq_class>> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const mpq_class f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

/// dim { X : j X + M X - X M = 0 } via the n^2 x n^2 linear system.
inline std::size_t twisted_commutant_nullity(const std::vector<std::vector<mpq_class>>& m, const mpq_class& shift) {
  const std::size_t n = m.size();
  std::vector<std::vector<mpq_class>> lin(n * n, std::vector<mpq_class>(n * n, 0));
  // Row (i, k) of (shift X + M X - X M); unknown X(a, b) is column a*n + b.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      auto& row = lin[i * n + k];
      row[i * n + k] += shift;
      for (std::size_t a = 0; a < n; ++a) {
        row[a * n + k] += m[i][a];
        row[i * n + a] -= m[a][k];
      }
    }
  return n * n - oracle_rank(std::move(lin));
}

/// Commutant nullity of the explicit Jordan realization, eigenvalues reduced mod Z.
inline std::size_t commutant_oracle(const padrig::JordanType& j) {
  return twisted_commutant_nullity(jordan_matrix(j, true), 0);
}

inline std::vector<std::vector<mpq_class>> to_mpq(const padrig::MatrixQ& a) {
  std::vector<std::vector<mpq_class>> m(a.size(), std::vector<mpq_class>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k) m[i][k] = a(i, k).raw();
  return m;
}

/// Laurent horizontal sections of d + A dx/x on the window [-w, w): the
/// coefficient equations decouple into (j + A) u_j = 0.
inline std::size_t horizontal_sections_self(const std::vector<std::vector<mpq_class>>& a, std::int64_t w) {
  const std::size_t n = a.size();
  std::size_t total = 0;
  for (std::int64_t j = -w; j < w; ++j) {
    auto m = a;
    for (std::size_t i = 0; i < n; ++i) m[i][i] += j;
    total += n - oracle_rank(m);
  }
  return total;
}

/// Same for End(M_A): jX + AX - XA = 0 per degree.
inline std::size_t horizontal_sections_end(const std::vector<std::vector<mpq_class>>& a, std::int64_t w) {
  std::size_t total = 0;
  for (std::int64_t j = -w; j < w; ++j) total += twisted_commutant_nullity(a, j);
  return total;
}

/// Random system: rank n, k points (0, 1, 2, ... and optionally infinity).
inline padrig::FuchsianSystem random_system(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                            std::int64_t max_den) {
  padrig::FuchsianSystem sys;
  sys.rank = n;
  sys.irreducible = true;
  sys.overconvergent_asserted = true;
  for (std::size_t i = 0; i < k; ++i) {
    auto pt = (i + 1 == k && uniform(rng, 0, 1) == 1) ? padrig::SingularPoint::infinity()
                                                       : padrig::SingularPoint::finite(Rational(static_cast<long>(i)));
    sys.locals.push_back({pt, random_jordan(rng, n, max_den)});
  }
  return sys;
}

inline bool brute_force_order_ok(std::int64_t p, std::int64_t n, std::int64_t f) {
  if (n == 1) return f == 1;
  // residues stay below 2^32 for the moduli used here
  const auto m = static_cast<std::uint64_t>(n), base = static_cast<std::uint64_t>(p) % m;
  std::uint64_t x = 1;
  for (std::int64_t e = 1; e <= f; ++e) {
    x = x * base % m;
    if (x == 1) return e == f;
  }
  return false;
}

}  // namespace testsupport
