#pragma once

// Independent recomputation of the base-change residual
//   dC C^-1 - C B C^-1 + B'
// over plain mpq_class Laurent polynomials. Only the coefficient values of the
// library's C and C^-1 are read; B and B' are rebuilt from A and h here.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "padrig/frobenius.hpp"

namespace oracle {

constexpr std::int64_t kOpen = std::numeric_limits<std::int64_t>::max() / 4;

/// sum c[i] x^(lo + i), known for exponents < hi (kOpen: exact).
struct QSeries {
  std::int64_t lo = 0;
  std::vector<mpq_class> c;
  std::int64_t hi = kOpen;

  mpq_class at(std::int64_t k) const {
    if (k < lo || k >= lo + static_cast<std::int64_t>(c.size())) return 0;
    return c[static_cast<std::size_t>(k - lo)];
  }
  std::int64_t top() const { return lo + static_cast<std::int64_t>(c.size()); }
};

using QMatrix = std::vector<std::vector<QSeries>>;

inline QSeries from_library(const padrig::LaurentSeries& s) {
  QSeries out;
  out.lo = s.order();
  for (const auto& x : s.dense_coefficients()) out.c.push_back(x.to_rational().raw());
  out.hi = s.is_bounded() ? s.hi() : kOpen;
  return out;
}

inline QMatrix from_library(const padrig::MatrixSeries& m) {
  QMatrix out(m.size(), std::vector<QSeries>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = from_library(m(i, j));
  return out;
}

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a >= kOpen || b >= kOpen) return kOpen;
  return a + b;
}

inline bool empty(const QSeries& s) {
  return std::all_of(s.c.begin(), s.c.end(), [](const mpq_class& x) { return x == 0; });
}

inline std::int64_t order_of(const QSeries& s) {
  for (std::size_t i = 0; i < s.c.size(); ++i)
    if (s.c[i] != 0) return s.lo + static_cast<std::int64_t>(i);
  return kOpen;
}

inline QSeries add(const QSeries& a, const QSeries& b, int sign = 1) {
  QSeries out;
  out.hi = std::min(a.hi, b.hi);
  out.lo = std::min(a.lo, b.lo);
  const std::int64_t top = std::min(std::max(a.top(), b.top()), out.hi);
  for (std::int64_t k = out.lo; k < top; ++k) out.c.push_back(a.at(k) + sign * b.at(k));
  return out;
}

inline QSeries mul(const QSeries& a, const QSeries& b, std::int64_t cap) {
  QSeries out;
  const std::int64_t oa = order_of(a), ob = order_of(b);
  if (oa >= kOpen || ob >= kOpen) {
    // an exact zero factor gives exact zero; a zero known only to some degree bounds the other side
    out.hi = std::min(cap, std::min(oa >= kOpen ? sat_add(a.hi, std::min(ob, b.lo)) : kOpen,
                                    ob >= kOpen ? sat_add(b.hi, std::min(oa, a.lo)) : kOpen));
    out.lo = 0;
    return out;
  }
  out.hi = std::min({cap, sat_add(oa, b.hi), sat_add(ob, a.hi)});
  out.lo = oa + ob;
  const std::int64_t top = std::min(out.hi, sat_add(a.top(), b.top()));
  for (std::int64_t k = out.lo; k < top; ++k) {
    mpq_class sum = 0;
    for (std::int64_t i = std::max(oa, k - b.top() + 1); i < a.top() && k - i >= ob; ++i) sum += a.at(i) * b.at(k - i);
    out.c.push_back(sum);
  }
  return out;
}

inline QSeries derivative(const QSeries& a) {
  QSeries out;
  out.lo = a.lo - 1;
  out.hi = a.hi >= kOpen ? kOpen : a.hi - 1;
  for (std::int64_t k = a.lo; k < a.top(); ++k) out.c.push_back(a.at(k) * mpq_class(k));
  return out;
}

inline QSeries scale(const QSeries& a, const mpq_class& s) {
  QSeries out = a;
  for (auto& x : out.c) x *= s;
  return out;
}

inline QMatrix mul(const QMatrix& a, const QMatrix& b, std::int64_t cap) {
  const std::size_t n = a.size();
  QMatrix out(n, std::vector<QSeries>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      QSeries s;
      s.lo = 0;
      for (std::size_t k = 0; k < n; ++k) s = add(s, mul(a[i][k], b[k][j], cap));
      out[i][j] = s;
    }
  return out;
}

inline QMatrix add(const QMatrix& a, const QMatrix& b, int sign = 1) {
  QMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = add(a[i][j], b[i][j], sign);
  return out;
}

inline QMatrix derivative(const QMatrix& a) {
  QMatrix out = a;
  for (auto& row : out)
    for (auto& e : row) e = derivative(e);
  return out;
}

/// Constant matrix times a scalar series.
inline QMatrix times(const padrig::MatrixQ& a, const QSeries& s) {
  QMatrix out(a.size(), std::vector<QSeries>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = scale(s, a(i, j).raw());
  return out;
}

/// 1/h for an exact power series with nonzero constant term, degrees < cap.
inline QSeries reciprocal(const QSeries& h, std::int64_t cap) {
  QSeries out;
  out.lo = 0;
  out.hi = cap;
  const mpq_class h0 = h.at(0);
  for (std::int64_t k = 0; k < cap; ++k) {
    mpq_class s = k == 0 ? mpq_class(1) : mpq_class(0);
    for (std::int64_t i = 1; i <= k; ++i) s -= h.at(i) * out.at(k - i);
    out.c.push_back(s / h0);
  }
  return out;
}

/// Connection of phi^* M_A for phi = x^q h: q A / x + A h'/h, degrees < cap.
inline QMatrix pullback(const padrig::MatrixQ& a, std::int64_t q, const QSeries& h, std::int64_t cap) {
  QSeries pole;
  pole.lo = -1;
  pole.c = {mpq_class(q)};
  const QSeries dlog = mul(derivative(h), reciprocal(h, cap + 1), cap);
  return times(a, add(pole, dlog));
}

inline QMatrix log_form(const padrig::MatrixQ& a) {
  QSeries pole;
  pole.lo = -1;
  pole.c = {mpq_class(1)};
  return times(a, pole);
}

inline std::int64_t valuation(const mpq_class& x, long p) {
  if (x == 0) return kOpen;
  std::int64_t v = 0;
  mpz_class n = x.get_num(), d = x.get_den();
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) { n /= p; ++v; }
  while (mpz_divisible_ui_p(d.get_mpz_t(), p)) { d /= p; --v; }
  return v;
}

struct Check {
  std::int64_t valuation = kOpen;  // min over the known coefficients; kOpen when all vanish
  std::int64_t window_hi = kOpen;  // coefficients below this exponent are determined
  std::int64_t inverse_valuation = kOpen;
};

inline Check min_valuation(const QMatrix& r, long p) {
  Check c;
  for (const auto& row : r)
    for (const auto& e : row) {
      c.window_hi = std::min(c.window_hi, e.hi);
      for (std::int64_t k = e.lo; k < std::min(e.top(), e.hi); ++k) c.valuation = std::min(c.valuation, valuation(e.at(k), p));
    }
  return c;
}

/// Residual of the gauge in r against the given source and target connections,
/// everything evaluated below cap.
inline Check residual(const padrig::BaseChangeResult& r, const QMatrix& source, const QMatrix& target, long p,
                      std::int64_t cap) {
  const QMatrix c = from_library(r.gauge), ci = from_library(r.gauge_inverse);
  const QMatrix dc_ci = mul(derivative(c), ci, cap);
  const QMatrix cbci = mul(mul(c, source, cap), ci, cap);
  const QMatrix res = add(add(dc_ci, cbci, -1), target);
  Check out = min_valuation(res, p);
  QMatrix id = mul(c, ci, cap);
  for (std::size_t i = 0; i < id.size(); ++i) {
    QSeries one;
    one.lo = 0;
    one.c = {mpq_class(1)};
    id[i][i] = add(id[i][i], one, -1);
  }
  out.inverse_valuation = min_valuation(id, p).valuation;
  return out;
}

}  // namespace oracle
