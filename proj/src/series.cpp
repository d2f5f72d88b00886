#include "padrig/series.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "padrig/error.hpp"

namespace padrig {
namespace {

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  return a + b;
}

std::int64_t sat_mul(std::int64_t a, std::int64_t e) {
  if (a >= kUnbounded) return kUnbounded;
  return a * e;
}

std::int64_t floor_log(std::int64_t k, std::int64_t p) {
  std::int64_t r = 0;
  for (std::int64_t q = k; q >= p; q /= p) ++r;
  return r;
}

// Digit view of one coefficient used by the fused convolution.
struct Digits {
  enum class Kind { zero, big_oh, unit } kind = Kind::zero;
  std::int64_t v = 0;  // valuation, or N for O(p^N)
  std::int64_t m = 0;
  Integer u;
};

Digits view(const PadicNumber& c, std::int64_t round_to) {
  Digits d;
  if (c.is_exact_zero()) return d;
  PadicNumber r = c.is_exact() ? PadicNumber::from_rational(c.to_rational(), c.prime(), round_to) : c;
  if (r.is_zero()) {
    d.kind = Digits::Kind::big_oh;
    d.v = r.absolute_precision();
    return d;
  }
  d.kind = Digits::Kind::unit;
  d.v = r.valuation().value();
  d.m = r.relative_precision();
  d.u = r.unit_digits();
  return d;
}

std::int64_t max_relative_precision(const std::vector<PadicNumber>& cs) {
  std::int64_t m = 0;
  for (const auto& c : cs)
    if (!c.is_exact()) m = std::max(m, c.relative_precision());
  return m;
}

// f + O(p^n) on every exponent of [from, f.hi()).
LaurentSeries add_tail(const LaurentSeries& f, std::int64_t from, std::int64_t n) {
  if (!f.is_bounded()) fail(ErrorKind::input, "tail bound on an unbounded window");
  if (from >= f.hi()) return f;
  std::vector<PadicNumber> noise(static_cast<std::size_t>(f.hi() - from), PadicNumber::big_oh(f.prime(), n));
  return f + LaurentSeries::from_coefficients(f.prime(), f.p_cap(), from, std::move(noise), kUnbounded);
}

}  // namespace

LaurentSeries::LaurentSeries(Prime p, std::int64_t p_cap) : p_(p), p_cap_(p_cap), lo_(kUnbounded) {
  if (p_cap < 1) fail(ErrorKind::input, "p-adic working precision must be >= 1");
}

LaurentSeries LaurentSeries::big_oh(Prime p, std::int64_t p_cap, std::int64_t hi) {
  LaurentSeries s(p, p_cap);
  s.hi_ = hi;
  s.lo_ = hi;
  return s;
}

LaurentSeries LaurentSeries::monomial(const PadicNumber& c, std::int64_t exponent, std::int64_t p_cap,
                                      std::int64_t hi) {
  return from_coefficients(c.prime(), p_cap, exponent, {c}, hi);
}

LaurentSeries LaurentSeries::constant(const PadicNumber& c, std::int64_t p_cap, std::int64_t hi) {
  return monomial(c, 0, p_cap, hi);
}

LaurentSeries LaurentSeries::from_coefficients(Prime p, std::int64_t p_cap, std::int64_t lo,
                                               std::vector<PadicNumber> coefficients, std::int64_t hi) {
  LaurentSeries s(p, p_cap);
  for (const auto& c : coefficients)
    if (c.prime() != p) fail(ErrorKind::input, "coefficient prime mismatch");
  s.lo_ = lo;
  s.hi_ = hi;
  s.c_ = std::move(coefficients);
  s.normalize();
  return s;
}

void LaurentSeries::normalize() {
  if (hi_ < kUnbounded && top() > hi_) {
    const std::int64_t keep = std::max<std::int64_t>(0, hi_ - lo_);
    c_.resize(static_cast<std::size_t>(keep), PadicNumber::exact_zero(p_));
  }
  std::size_t first = 0;
  while (first < c_.size() && c_[first].is_exact_zero()) ++first;
  if (first == c_.size()) {
    c_.clear();
    lo_ = hi_;
    return;
  }
  std::size_t last = c_.size();
  while (last > first && c_[last - 1].is_exact_zero()) --last;
  if (first > 0 || last < c_.size()) {
    std::vector<PadicNumber> kept(c_.begin() + static_cast<std::ptrdiff_t>(first),
                                  c_.begin() + static_cast<std::ptrdiff_t>(last));
    c_ = std::move(kept);
    lo_ += static_cast<std::int64_t>(first);
  }
}

void LaurentSeries::check_compatible(const LaurentSeries& g) const {
  if (p_ != g.p_) fail(ErrorKind::input, "series prime mismatch");
}

PadicNumber LaurentSeries::coefficient(std::int64_t k) const {
  if (k >= hi_) fail(ErrorKind::precision, "coefficient of x^" + std::to_string(k) + " is beyond the known window");
  if (k < lo_ || k >= top()) return PadicNumber::exact_zero(p_);
  return c_[static_cast<std::size_t>(k - lo_)];
}

std::int64_t LaurentSeries::min_valuation() const {
  std::int64_t v = kInfinitePrecision;
  for (const auto& c : c_) v = std::min(v, c.valuation_bound());
  return v;
}

bool LaurentSeries::is_exact() const {
  return std::all_of(c_.begin(), c_.end(), [](const PadicNumber& c) { return c.is_exact(); });
}

LaurentSeries LaurentSeries::truncated(std::int64_t hi) const {
  if (hi >= hi_) return *this;
  LaurentSeries s = *this;
  s.hi_ = hi;
  if (s.lo_ > hi) s.lo_ = hi;
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::capped(std::int64_t absolute_precision) const {
  LaurentSeries s = *this;
  for (auto& c : s.c_)
    if (!c.is_exact_zero()) c = c.capped(absolute_precision);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::rounded() const {
  LaurentSeries s = *this;
  for (auto& c : s.c_)
    if (c.is_exact() && !c.is_exact_zero()) c = PadicNumber::from_rational(c.to_rational(), p_, p_cap_);
  return s;
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries s = *this;
  for (auto& c : s.c_) c = -c;
  return s;
}

LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g) {
  f.check_compatible(g);
  if (f.is_exact_zero()) return g;
  if (g.is_exact_zero()) return f;
  const std::int64_t hi = std::min(f.hi_, g.hi_);
  const std::int64_t lo = std::min(f.lo_, g.lo_);
  const std::int64_t top = std::min(std::max(f.top(), g.top()), hi);
  LaurentSeries s(f.p_, std::min(f.p_cap_, g.p_cap_));
  s.lo_ = lo;
  s.hi_ = hi;
  if (top > lo) {
    s.c_.reserve(static_cast<std::size_t>(top - lo));
    for (std::int64_t k = lo; k < top; ++k) {
      const bool in_f = k >= f.lo_ && k < f.top();
      const bool in_g = k >= g.lo_ && k < g.top();
      if (in_f && in_g)
        s.c_.push_back(f.c_[static_cast<std::size_t>(k - f.lo_)] + g.c_[static_cast<std::size_t>(k - g.lo_)]);
      else if (in_f)
        s.c_.push_back(f.c_[static_cast<std::size_t>(k - f.lo_)]);
      else if (in_g)
        s.c_.push_back(g.c_[static_cast<std::size_t>(k - g.lo_)]);
      else
        s.c_.push_back(PadicNumber::exact_zero(f.p_));
    }
  }
  s.normalize();
  return s;
}

LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g) {
  f.check_compatible(g);
  const Prime p = f.p_;
  const std::int64_t p_cap = std::min(f.p_cap_, g.p_cap_);
  if (f.is_exact_zero() || g.is_exact_zero()) return LaurentSeries(p, p_cap);
  const std::int64_t hi = std::min(sat_add(f.lo_, g.hi_), sat_add(g.lo_, f.hi_));
  const std::int64_t lo = f.lo_ + g.lo_;
  std::int64_t top = f.c_.empty() || g.c_.empty() ? lo : f.top() + g.top() - 1;
  top = std::min(top, hi);
  LaurentSeries s(p, p_cap);
  s.lo_ = std::min(lo, hi);
  s.hi_ = hi;
  if (top <= lo) {
    s.normalize();
    return s;
  }
  const auto nf = static_cast<std::int64_t>(f.c_.size());
  const auto ng = static_cast<std::int64_t>(g.c_.size());
  s.c_.reserve(static_cast<std::size_t>(top - lo));

  if (f.is_exact() && g.is_exact()) {
    for (std::int64_t k = 0; k < top - lo; ++k) {
      Rational acc;
      for (std::int64_t i = std::max<std::int64_t>(0, k - ng + 1); i <= std::min(k, nf - 1); ++i) {
        const auto& a = f.c_[static_cast<std::size_t>(i)];
        const auto& b = g.c_[static_cast<std::size_t>(k - i)];
        if (a.is_exact_zero() || b.is_exact_zero()) continue;
        acc += a.to_rational() * b.to_rational();
      }
      s.c_.push_back(PadicNumber::exact(acc, p));
    }
    s.normalize();
    return s;
  }

  // Pass 1: absolute precision of every output coefficient. Exact inputs carry
  // no error; they are rounded afterwards to enough digits not to add any.
  auto exact_valuation = [](const PadicNumber& c) { return c.valuation().value(); };
  std::vector<std::int64_t> prec(static_cast<std::size_t>(top - lo), kInfinitePrecision);
  std::int64_t n_max = 0, v_min = kInfinitePrecision;
  for (const auto* cs : {&f.c_, &g.c_})
    for (const auto& c : *cs)
      if (!c.is_exact_zero()) v_min = std::min(v_min, c.valuation_bound());
  for (std::int64_t k = 0; k < top - lo; ++k) {
    const std::int64_t i0 = std::max<std::int64_t>(0, k - ng + 1);
    const std::int64_t i1 = std::min(k, nf - 1);
    std::int64_t n = kInfinitePrecision;
    for (std::int64_t i = i0; i <= i1; ++i) {
      const auto& a = f.c_[static_cast<std::size_t>(i)];
      const auto& b = g.c_[static_cast<std::size_t>(k - i)];
      if (a.is_exact_zero() || b.is_exact_zero() || (a.is_exact() && b.is_exact())) continue;
      if (a.is_exact()) {
        n = std::min(n, exact_valuation(a) + b.absolute_precision());
      } else if (b.is_exact()) {
        n = std::min(n, a.absolute_precision() + exact_valuation(b));
      } else {
        n = std::min({n, a.valuation_bound() + b.absolute_precision(), a.absolute_precision() + b.valuation_bound()});
      }
    }
    prec[static_cast<std::size_t>(k)] = n;
    if (n < kInfinitePrecision) n_max = std::max(n_max, n);
  }
  const std::int64_t round_to = std::max<std::int64_t>(
      {max_relative_precision(f.c_), max_relative_precision(g.c_), n_max - 2 * v_min + 1, 1});
  std::vector<Digits> df, dg;
  df.reserve(f.c_.size());
  dg.reserve(g.c_.size());
  for (const auto& c : f.c_) df.push_back(view(c, round_to));
  for (const auto& c : g.c_) dg.push_back(view(c, round_to));

  Integer sum, tmp;
  for (std::int64_t k = 0; k < top - lo; ++k) {
    const std::int64_t i0 = std::max<std::int64_t>(0, k - ng + 1);
    const std::int64_t i1 = std::min(k, nf - 1);
    const std::int64_t n = prec[static_cast<std::size_t>(k)];
    if (n >= kInfinitePrecision) {
      // only exact products (or nothing) contribute
      Rational acc;
      bool any = false;
      for (std::int64_t i = i0; i <= i1; ++i) {
        const auto& a = f.c_[static_cast<std::size_t>(i)];
        const auto& b = g.c_[static_cast<std::size_t>(k - i)];
        if (a.is_exact_zero() || b.is_exact_zero()) continue;
        any = true;
        acc += a.to_rational() * b.to_rational();
      }
      s.c_.push_back(any ? PadicNumber::exact(acc, p) : PadicNumber::exact_zero(p));
      continue;
    }
    std::int64_t vmin = kInfinitePrecision;
    for (std::int64_t i = i0; i <= i1; ++i) {
      const Digits& a = df[static_cast<std::size_t>(i)];
      const Digits& b = dg[static_cast<std::size_t>(k - i)];
      if (a.kind != Digits::Kind::unit || b.kind != Digits::Kind::unit) continue;
      vmin = std::min(vmin, a.v + b.v);
    }
    if (vmin >= n) {
      s.c_.push_back(PadicNumber::big_oh(p, n));
      continue;
    }
    sum = 0;
    for (std::int64_t i = i0; i <= i1; ++i) {
      const Digits& a = df[static_cast<std::size_t>(i)];
      const Digits& b = dg[static_cast<std::size_t>(k - i)];
      if (a.kind != Digits::Kind::unit || b.kind != Digits::Kind::unit) continue;
      const std::int64_t vs = a.v + b.v;
      if (vs >= n) continue;
      mpz_mul(tmp.get_mpz_t(), a.u.get_mpz_t(), b.u.get_mpz_t());
      if (vs > vmin) mpz_mul(tmp.get_mpz_t(), tmp.get_mpz_t(), prime_power(p, vs - vmin).get_mpz_t());
      mpz_add(sum.get_mpz_t(), sum.get_mpz_t(), tmp.get_mpz_t());
    }
#ifdef PADRIG_FAULT_INJECTION
    sum += p.value();
#endif
    s.c_.push_back(PadicNumber::from_digits(sum, vmin, n - vmin, p));
  }
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::scaled(const Rational& r) const {
  if (r.is_zero()) return LaurentSeries(p_, p_cap_);
  LaurentSeries s = *this;
  for (auto& c : s.c_) c = c.scaled(r);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::scaled(const PadicNumber& a) const {
  if (a.is_exact()) return scaled(a.to_rational());
  LaurentSeries s = *this;
  for (auto& c : s.c_) c = c * a;
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::shifted(std::int64_t e) const {
  LaurentSeries s = *this;
  if (is_exact_zero()) return s;
  s.lo_ += e;
  s.hi_ = sat_add(hi_, e);
  return s;
}

LaurentSeries LaurentSeries::derivative() const {
  if (is_exact_zero()) return *this;
  LaurentSeries s = *this;
  for (std::size_t i = 0; i < s.c_.size(); ++i) s.c_[i] = s.c_[i].scaled(Rational(lo_ + static_cast<std::int64_t>(i)));
  s.lo_ = lo_ - 1;
  s.hi_ = sat_add(hi_, -1);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::inverse(std::int64_t x_cap) const {
  if (c_.empty()) fail(ErrorKind::precision, "inverse of a series with no known terms");
  const PadicNumber& lead = c_.front();
  if (lead.is_zero()) fail(ErrorKind::precision, "inverse: leading coefficient is zero to precision");
  const std::int64_t v = lo_;
  const std::int64_t known = sat_add(hi_, -v);  // g_i known for i < known
  std::int64_t out_hi = std::min(sat_add(known, -v), x_cap);
  if (c_.size() == 1 && out_hi >= kUnbounded)
    return monomial(lead.inverse(), -v, p_cap_, kUnbounded);
  if (out_hi >= kUnbounded) fail(ErrorKind::input, "inverse of a Laurent polynomial needs a finite window cap");
  const std::int64_t count = out_hi + v;
  LaurentSeries s(p_, p_cap_);
  s.lo_ = -v;
  s.hi_ = out_hi;
  if (count <= 0) {
    s.normalize();
    return s;
  }
  const PadicNumber b0 = lead.inverse();
  std::vector<PadicNumber> b;
  b.reserve(static_cast<std::size_t>(count));
  b.push_back(b0);
  const auto ng = static_cast<std::int64_t>(c_.size());
  for (std::int64_t j = 1; j < count; ++j) {
    PadicNumber acc = PadicNumber::exact_zero(p_);
    for (std::int64_t i = 1; i <= std::min(j, ng - 1); ++i) {
      const auto& gi = c_[static_cast<std::size_t>(i)];
      if (gi.is_exact_zero()) continue;
      acc += gi * b[static_cast<std::size_t>(j - i)];
    }
    b.push_back(-(b0 * acc));
  }
  s.c_ = std::move(b);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::pow(std::int64_t k, std::int64_t x_cap) const {
  if (k < 0) return inverse(x_cap).pow(-k, x_cap);
  LaurentSeries result = constant(PadicNumber::exact(Rational(1), p_), p_cap_);
  LaurentSeries base = *this;
  while (k > 0) {
    if (k & 1) result = (result * base).truncated(x_cap);
    k >>= 1;
    if (k) base = (base * base).truncated(x_cap);
  }
  return result;
}

bool LaurentSeries::agrees_with(const LaurentSeries& g) const {
  check_compatible(g);
  const std::int64_t hi = std::min(hi_, g.hi_);
  const std::int64_t lo = std::min(lo_, g.lo_);
  const std::int64_t top = std::min(std::max(this->top(), g.top()), hi);
  for (std::int64_t k = lo; k < top; ++k)
    if (!coefficient(k).agrees_with(g.coefficient(k))) return false;
  return true;
}

std::string LaurentSeries::to_string() const {
  if (is_exact_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_exact_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[i].to_string() << ") * x^" << (lo_ + static_cast<std::int64_t>(i));
  }
  if (hi_ < kUnbounded) {
    if (!first) os << " + ";
    os << "O(x^" << hi_ << ")";
  } else if (first) {
    os << "0";
  }
  return os.str();
}

LaurentSeries dlog(const LaurentSeries& f, std::int64_t x_cap) {
  if (f.dense_coefficients().empty()) fail(ErrorKind::precision, "dlog of a series with no known terms");
  const PadicNumber& lead = f.dense_coefficients().front();
  if (lead.is_zero() || lead.valuation() != Valuation(0))
    fail(ErrorKind::precision, "dlog requires a unit leading coefficient, got " + lead.to_string());
  return (f.derivative() * f.inverse(x_cap)).truncated(x_cap);
}

LaurentSeries substitute(const LaurentSeries& f, const LaurentSeries& phi, std::int64_t x_cap) {
  if (f.prime() != phi.prime()) fail(ErrorKind::input, "series prime mismatch");
  const Prime p = f.prime();
  const std::int64_t p_cap = std::min(f.p_cap(), phi.p_cap());
  if (f.is_exact_zero()) return f;
  if (phi.dense_coefficients().empty() || phi.order() <= 0)
    fail(ErrorKind::input, "substitution requires a series of positive order with a known leading term");
  const std::int64_t e = phi.order();
  const bool negative = f.order() < 0;
  if (negative && phi.dense_coefficients().front().valuation() != Valuation(0))
    fail(ErrorKind::input, "substitution of negative powers requires a unit leading coefficient");
  const bool phi_monomial = phi.dense_coefficients().size() == 1;
  std::int64_t hi_target = std::min(sat_mul(f.hi(), e), x_cap);
  if (hi_target >= kUnbounded && negative && !(phi_monomial && !phi.is_bounded()))
    fail(ErrorKind::input, "substitution cannot be soundly truncated without a window cap");

  LaurentSeries result = hi_target < kUnbounded ? LaurentSeries::big_oh(p, p_cap, hi_target) : LaurentSeries(p, p_cap);
  const auto& cs = f.dense_coefficients();
  const std::int64_t lo = f.order();

  if (f.top() > 0) {
    LaurentSeries power = LaurentSeries::constant(PadicNumber::exact(Rational(1), p), p_cap);
    for (std::int64_t k = 0; k < f.top(); ++k) {
      if (k > 0) power = (power * phi).truncated(hi_target);
      if (k < lo) continue;
      const auto& c = cs[static_cast<std::size_t>(k - lo)];
      if (c.is_exact_zero()) continue;
      result += power.scaled(c);
    }
  }
  if (negative) {
    const std::int64_t inv_cap = sat_add(hi_target, -lo * e);
    const LaurentSeries inv = phi.inverse(inv_cap);
    LaurentSeries power = LaurentSeries::constant(PadicNumber::exact(Rational(1), p), p_cap);
    for (std::int64_t k = -1; k >= lo; --k) {
      power = (power * inv).truncated(hi_target);
      if (k >= f.top()) continue;
      const auto& c = cs[static_cast<std::size_t>(k - lo)];
      if (c.is_exact_zero()) continue;
      result += power.scaled(c);
    }
  }
  return result.truncated(hi_target);
}

LaurentSeries log_one_plus(const LaurentSeries& f, std::int64_t x_cap) {
  const Prime p = f.prime();
  if (f.is_exact_zero()) return f;
  if (f.order() < 0) fail(ErrorKind::input, "log(1 + f) requires f without negative-exponent terms");
  const std::int64_t vmin = f.min_valuation();
  if (vmin < 1) fail(ErrorKind::convergence, "h not = 1 mod p: log(1 + f) needs every coefficient of f divisible by p");
  const std::int64_t hi = std::min(f.hi(), x_cap);
  if (hi >= kUnbounded) fail(ErrorKind::input, "log(1 + f) of a polynomial needs a finite window cap");
  if (vmin >= kInfinitePrecision) return LaurentSeries::big_oh(p, f.p_cap(), hi).truncated(hi);

  std::int64_t target = f.p_cap() + vmin;
  std::int64_t max_abs = 0;
  for (const auto& c : f.dense_coefficients()) max_abs = std::max(max_abs, std::min(c.absolute_precision(), target));
  target = std::min(target, std::max<std::int64_t>(max_abs, 1));
  auto tail_bound = [&](std::int64_t k) { return k * vmin - floor_log(k, p.value()); };

  const std::int64_t ord = f.order();
  const LaurentSeries ft = f.truncated(hi);
  LaurentSeries result = LaurentSeries::big_oh(p, f.p_cap(), hi);
  LaurentSeries power = LaurentSeries::constant(PadicNumber::exact(Rational(1), p), f.p_cap());
  for (std::int64_t k = 1;; ++k) {
    power = (power * ft).truncated(hi);
    result += power.scaled(Rational(k % 2 ? 1 : -1) / Rational(k));
    if (ord >= 1 && (k + 1) * ord >= hi) return result;
    if (tail_bound(k + 1) >= target) return add_tail(result, (k + 1) * ord, tail_bound(k + 1));
  }
}

// ---------------------------------------------------------------------------

MatrixSeries::MatrixSeries(std::size_t n, Prime p, std::int64_t p_cap)
    : n_(n), p_(p), p_cap_(p_cap), e_(n * n, LaurentSeries(p, p_cap)) {}

MatrixSeries MatrixSeries::identity(std::size_t n, Prime p, std::int64_t p_cap) {
  return constant(MatrixQ::identity(n), p, p_cap);
}

MatrixSeries MatrixSeries::constant(const MatrixQ& a, Prime p, std::int64_t p_cap) { return monomial(a, 0, p, p_cap); }

MatrixSeries MatrixSeries::monomial(const MatrixQ& a, std::int64_t e, Prime p, std::int64_t p_cap) {
  MatrixSeries m(a.size(), p, p_cap);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!a(i, j).is_zero()) m(i, j) = LaurentSeries::monomial(PadicNumber::exact(a(i, j), p), e, p_cap);
  return m;
}

std::int64_t MatrixSeries::order() const {
  std::int64_t o = kUnbounded;
  for (const auto& s : e_) o = std::min(o, s.order());
  return o;
}

std::int64_t MatrixSeries::hi() const {
  std::int64_t h = kUnbounded;
  for (const auto& s : e_) h = std::min(h, s.hi());
  return h;
}

std::int64_t MatrixSeries::min_valuation() const {
  std::int64_t v = kInfinitePrecision;
  for (const auto& s : e_) v = std::min(v, s.min_valuation());
  return v;
}

MatrixSeries MatrixSeries::truncated(std::int64_t hi) const {
  MatrixSeries m = *this;
  for (auto& s : m.e_) s = s.truncated(hi);
  return m;
}

MatrixSeries MatrixSeries::rounded() const {
  MatrixSeries m = *this;
  for (auto& s : m.e_) s = s.rounded();
  return m;
}

MatrixSeries MatrixSeries::derivative() const {
  MatrixSeries m = *this;
  for (auto& s : m.e_) s = s.derivative();
  return m;
}

MatrixSeries MatrixSeries::scaled(const LaurentSeries& s) const {
  MatrixSeries m = *this;
  for (auto& x : m.e_) x = x * s;
  return m;
}

MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.n_ != b.n_) fail(ErrorKind::input, "matrix series size mismatch");
  MatrixSeries m = a;
  for (std::size_t i = 0; i < m.e_.size(); ++i) m.e_[i] += b.e_[i];
  return m;
}

MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.n_ != b.n_) fail(ErrorKind::input, "matrix series size mismatch");
  MatrixSeries m = a;
  for (std::size_t i = 0; i < m.e_.size(); ++i) m.e_[i] = m.e_[i] - b.e_[i];
  return m;
}

MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.n_ != b.n_) fail(ErrorKind::input, "matrix series size mismatch");
  const std::size_t n = a.n_;
  MatrixSeries m(n, a.p_, std::min(a.p_cap_, b.p_cap_));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      LaurentSeries acc(a.p_, m.p_cap_);
      for (std::size_t k = 0; k < n; ++k) {
        if (a(i, k).is_exact_zero() || b(k, j).is_exact_zero()) continue;
        acc += a(i, k) * b(k, j);
      }
      m(i, j) = std::move(acc);
    }
  return m;
}

MatrixSeries operator*(const MatrixQ& a, const MatrixSeries& b) {
  return MatrixSeries::constant(a, b.p_, b.p_cap_) * b;
}

MatrixSeries operator*(const MatrixSeries& a, const MatrixQ& b) {
  return a * MatrixSeries::constant(b, a.p_, a.p_cap_);
}

namespace {

using PadicMatrix = std::vector<std::vector<PadicNumber>>;

PadicMatrix padic_inverse(PadicMatrix a, Prime p) {
  const std::size_t n = a.size();
  PadicMatrix inv(n, std::vector<PadicNumber>(n, PadicNumber::exact_zero(p)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = PadicNumber::exact(Rational(1), p);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      if (piv == n || a[r][col].valuation() < a[piv][col].valuation()) piv = r;
    }
    if (piv == n) fail(ErrorKind::precision, "leading coefficient matrix is singular to precision");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const PadicNumber s = a[col][col].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * s;
      inv[col][j] = inv[col][j] * s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_exact_zero()) continue;
      const PadicNumber f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] = a[r][j] - f * a[col][j];
        inv[r][j] = inv[r][j] - f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace

MatrixSeries MatrixSeries::inverse(std::int64_t x_cap) const {
  const std::size_t n = n_;
  const std::int64_t v = order();
  if (v >= kUnbounded) fail(ErrorKind::precision, "inverse of a matrix series with no known terms");
  std::int64_t known = kUnbounded;
  for (const auto& s : e_) known = std::min(known, sat_add(s.hi(), -v));
  const std::int64_t out_hi = std::min(sat_add(known, -v), x_cap);
  if (out_hi >= kUnbounded) fail(ErrorKind::input, "matrix series inverse needs a finite window cap");
  const std::int64_t count = out_hi + v;
  if (count <= 0) fail(ErrorKind::precision, "matrix series inverse: window exhausted");

  auto coeff = [&](std::int64_t i) {
    PadicMatrix c(n, std::vector<PadicNumber>(n, PadicNumber::exact_zero(p_)));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s) c[r][s] = (*this)(r, s).coefficient(v + i);
    return c;
  };
  std::vector<PadicMatrix> cs;
  for (std::int64_t i = 0; i < count; ++i) cs.push_back(coeff(i));
  const PadicMatrix b0 = padic_inverse(cs[0], p_);
  std::vector<PadicMatrix> bs{b0};
  for (std::int64_t j = 1; j < count; ++j) {
    PadicMatrix acc(n, std::vector<PadicNumber>(n, PadicNumber::exact_zero(p_)));
    for (std::int64_t i = 1; i <= j; ++i) {
      const auto& ci = cs[static_cast<std::size_t>(i)];
      const auto& bj = bs[static_cast<std::size_t>(j - i)];
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
          if (ci[r][k].is_exact_zero()) continue;
          for (std::size_t s = 0; s < n; ++s)
            if (!bj[k][s].is_exact_zero()) acc[r][s] += ci[r][k] * bj[k][s];
        }
    }
    PadicMatrix bjm(n, std::vector<PadicNumber>(n, PadicNumber::exact_zero(p_)));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        if (b0[r][k].is_exact_zero()) continue;
        for (std::size_t s = 0; s < n; ++s)
          if (!acc[k][s].is_exact_zero()) bjm[r][s] -= b0[r][k] * acc[k][s];
      }
    bs.push_back(std::move(bjm));
  }
  MatrixSeries out(n, p_, p_cap_);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<PadicNumber> col;
      col.reserve(bs.size());
      for (const auto& b : bs) col.push_back(b[r][s]);
      out(r, s) = LaurentSeries::from_coefficients(p_, p_cap_, -v, std::move(col), out_hi);
    }
  return out;
}

bool MatrixSeries::agrees_with(const MatrixSeries& b) const {
  if (n_ != b.n_) return false;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (!e_[i].agrees_with(b.e_[i])) return false;
  return true;
}

std::int64_t MatrixSeries::distance_from_identity() const {
  return (*this - identity(n_, p_, p_cap_)).min_valuation();
}

std::string MatrixSeries::to_string() const {
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

MatrixSeries matrix_exp(const MatrixQ& a, const LaurentSeries& l, std::int64_t x_cap) {
  const Prime p = l.prime();
  const std::size_t n = a.size();
  if (p.value() == 2)
    fail(ErrorKind::convergence, "the exponential series is not known to converge for p = 2; use the change-of-lifting method");
  for (const auto& x : a.entries())
    if (!is_p_integral(x, p)) fail(ErrorKind::input, "matrix_exp requires p-integral entries, got " + x.to_string());
  if (l.is_exact_zero()) return MatrixSeries::identity(n, p, l.p_cap());
  if (l.order() < 0) fail(ErrorKind::input, "matrix_exp requires L without negative-exponent terms");
  const std::int64_t vmin = l.min_valuation();
  if (vmin < 1) fail(ErrorKind::convergence, "matrix_exp needs every coefficient of L divisible by p");
  const std::int64_t hi = std::min(l.hi(), x_cap);
  if (hi >= kUnbounded) fail(ErrorKind::input, "matrix_exp of a polynomial needs a finite window cap");

  std::int64_t target = l.p_cap() + vmin;
  std::int64_t max_abs = 0;
  for (const auto& c : l.dense_coefficients()) max_abs = std::max(max_abs, std::min(c.absolute_precision(), target));
  target = std::min(target, std::max<std::int64_t>(max_abs, 1));
  auto tail_bound = [&](std::int64_t k) { return k * vmin - (k - 1) / (p.value() - 1); };

  // Entries that some power A^k (k >= 1) touches; by Cayley-Hamilton k <= n suffices.
  std::vector<bool> reach(n * n, false);
  {
    MatrixQ pk = MatrixQ::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
      pk = pk * a;
      for (std::size_t i = 0; i < n * n; ++i)
        if (!pk.entries()[i].is_zero()) reach[i] = true;
    }
  }

  const std::int64_t ord = l.order();
  const LaurentSeries lt = l.truncated(hi);
  MatrixSeries result = MatrixSeries::identity(n, p, l.p_cap());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i * n + j]) result(i, j) += LaurentSeries::big_oh(p, l.p_cap(), hi);
  LaurentSeries term = LaurentSeries::constant(PadicNumber::exact(Rational(1), p), l.p_cap());
  MatrixQ ak = MatrixQ::identity(n);
  for (std::int64_t k = 1;; ++k) {
    term = (term * lt).truncated(hi).scaled(Rational(1) / Rational(k));
    ak = ak * a;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!ak(i, j).is_zero()) result(i, j) += term.scaled(ak(i, j));
    if (ord >= 1 && (k + 1) * ord >= hi) return result;
    if (tail_bound(k + 1) >= target) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i * n + j]) result(i, j) = add_tail(result(i, j), (k + 1) * ord, tail_bound(k + 1));
      return result;
    }
  }
}

}  // namespace padrig
