#include <vector>
#include "padrig/rational.hpp"

#include <numeric>
#include <ostream>

#include "padrig/error.hpp"

namespace padrig {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::precision: return "precision";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::condition: return "condition";
    case ErrorKind::inconsistency: return "inconsistency";
  }
  return "unknown";
}

bool is_prime(std::int64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

Prime::Prime(std::int64_t value) : value_(value) {
  if (!is_prime(value)) fail(ErrorKind::input, "not a prime: " + std::to_string(value));
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) fail(ErrorKind::input, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) fail(ErrorKind::input, "malformed rational: \"" + std::string(text) + "\"");
    for (std::size_t k = i; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') fail(ErrorKind::input, "malformed rational: \"" + std::string(text) + "\"");
    std::string digits(s[0] == '+' ? s.substr(1) : s);
    return Integer(digits, 10);
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  auto den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+'))
    fail(ErrorKind::input, "malformed rational: \"" + std::string(text) + "\"");
  Integer den = parse_int(den_text);
  if (den == 0) fail(ErrorKind::input, "zero denominator in \"" + std::string(text) + "\"");
  return Rational(parse_int(text.substr(0, slash)), den);
}

Integer Rational::floor() const {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return out;
}

Rational Rational::fractional_part() const { return *this - Rational(floor()); }

std::string Rational::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(ErrorKind::input, "division by zero");
  q_ /= o.q_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

std::int64_t Valuation::value() const {
  if (!finite_) fail(ErrorKind::input, "valuation is infinite");
  return value_;
}

std::string Valuation::to_string() const { return finite_ ? std::to_string(value_) : "inf"; }

std::int64_t integer_valuation(const Integer& n, std::int64_t p) {
  if (n == 0) fail(ErrorKind::input, "valuation of zero integer");
  Integer m = abs(n);
  Integer pp(static_cast<long>(p));
  std::int64_t v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), pp.get_mpz_t())) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t());
    ++v;
  }
  return v;
}

Valuation padic_valuation(const Rational& r, Prime p) {
  if (r.is_zero()) return Valuation::infinity();
  return Valuation(integer_valuation(r.numerator(), p.value()) -
                   integer_valuation(r.denominator(), p.value()));
}

bool is_p_integral(const Rational& r, Prime p) {
  return padic_valuation(r, p) >= Valuation(0);
}

Integer denominator_lcm(std::span<const Rational> values) {
  if (values.empty()) fail(ErrorKind::input, "denominator_lcm of an empty list");
  Integer n = 1;
  for (const auto& r : values) {
    Integer d = r.denominator();
    mpz_lcm(n.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  }
  return n;
}

std::int64_t multiplicative_order(Prime p, std::int64_t n) {
  if (n < 1) fail(ErrorKind::input, "modulus must be positive");
  if (std::gcd(p.value(), n) != 1)
    fail(ErrorKind::condition, "ramified denominator: gcd(" + std::to_string(p.value()) + ", " +
                                   std::to_string(n) + ") != 1");
  if (n == 1) return 1;
  using u128 = unsigned __int128;
  const auto un = static_cast<u128>(n);
  auto powmod = [un](u128 b, std::int64_t e) {
    u128 r = 1;
    for (b %= un; e > 0; e >>= 1, b = b * b % un)
      if (e & 1) r = r * b % un;
    return r;
  };
  auto prime_factors = [](std::int64_t m) {
    std::vector<std::int64_t> fs;
    for (std::int64_t d = 2; d * d <= m; ++d) {
      if (m % d) continue;
      fs.push_back(d);
      while (m % d == 0) m /= d;
    }
    if (m > 1) fs.push_back(m);
    return fs;
  };
  // start from Euler's phi(n) and strip prime factors while the power stays 1
  std::int64_t order = n;
  for (const auto r : prime_factors(n)) order = order / r * (r - 1);
  for (const auto r : prime_factors(order))
    while (order % r == 0 && powmod(static_cast<u128>(p.value()), order / r) == 1) order /= r;
  return order;
}

std::int64_t factorial_valuation(std::int64_t k, std::int64_t p) {
  std::int64_t v = 0;
  for (std::int64_t q = k / p; q > 0; q /= p) v += q;
  return v;
}

Integer ipow(std::int64_t base, std::int64_t exponent) {
  if (exponent < 0) fail(ErrorKind::input, "negative exponent in ipow");
  Integer out;
  Integer b(static_cast<long>(base));
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(exponent));
  return out;
}

}  // namespace padrig
