#include <random>

#include "doctest.h"
#include "padrig/error.hpp"
#include "padrig/padic.hpp"
#include "padrig/rational.hpp"
#include "support.hpp"

using namespace padrig;

namespace {

// Valuation by repeated division of numerator and denominator.
std::int64_t division_valuation(const Rational& r, std::int64_t p) {
  mpz_class num = r.numerator(), den = r.denominator();
  std::int64_t v = 0;
  while (num % p == 0) { num /= p; ++v; }
  while (den % p == 0) { den /= p; --v; }
  return v;
}

}  // namespace

TEST_CASE("rational parsing and normalization") {
  CHECK(Rational::parse("6/4") == Rational(Integer(3), Integer(2)));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse("0/7").is_zero());
  CHECK(Rational::parse("-1/2").to_string() == "-1/2");
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("1/-2"), Error);
  CHECK_THROWS_AS(Rational::parse("abc"), Error);
  CHECK_THROWS_AS(Rational::parse(""), Error);
  CHECK_THROWS_AS(Rational::parse("1.5"), Error);
  CHECK(Rational::parse("-7/3").floor() == -3);
  CHECK(Rational::parse("-7/3").fractional_part() == Rational(Integer(2), Integer(3)));
}

TEST_CASE("padic_valuation examples") {
  const Prime p5(5), p2(2);
  CHECK(padic_valuation(Rational(0), p5).is_infinite());
  CHECK(padic_valuation(Rational(50), p5).value() == 2);
  CHECK(padic_valuation(Rational(Integer(3), Integer(25)), p5).value() == -2);
  CHECK(padic_valuation(Rational(Integer(1), Integer(2)), p2).value() == -1);
  CHECK_THROWS_AS(Prime(4), Error);
  CHECK_THROWS_AS(Prime(1), Error);
}

TEST_CASE("padic_valuation matches repeated division") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    const std::int64_t primes[] = {2, 3, 5, 7, 13};
    const std::int64_t p = primes[t % 5];
    const Rational r = testsupport::random_rational(rng, 1000, 50);
    if (r.is_zero()) continue;
    CHECK(padic_valuation(r, Prime(p)).value() == division_valuation(r, p));
    CHECK(is_p_integral(r, Prime(p)) == (division_valuation(r, p) >= 0));
  }
}

TEST_CASE("denominator_lcm") {
  std::vector<Rational> v{Rational(Integer(1), Integer(4)), Rational(Integer(1), Integer(6)), Rational(3)};
  CHECK(denominator_lcm(v) == 12);
  std::vector<Rational> ints{Rational(2), Rational(-5)};
  CHECK(denominator_lcm(ints) == 1);
  CHECK_THROWS_AS(denominator_lcm(std::vector<Rational>{}), Error);
}

TEST_CASE("multiplicative_order examples and errors") {
  CHECK(multiplicative_order(Prime(5), 4) == 1);
  CHECK(multiplicative_order(Prime(5), 6) == 2);
  CHECK(multiplicative_order(Prime(2), 7) == 3);
  CHECK(multiplicative_order(Prime(3), 1) == 1);
  try {
    multiplicative_order(Prime(5), 10);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::condition);
  }
}

TEST_CASE("factorial valuation") {
  CHECK(factorial_valuation(40, 5) == 9);
  CHECK(factorial_valuation(128, 2) == 127);
  CHECK(factorial_valuation(4, 5) == 0);
}

TEST_CASE("padic arithmetic examples") {
  const Prime p(5);
  const auto a = PadicNumber::from_rational(Rational(Integer(1), Integer(3)), p, 10);
  const auto b = PadicNumber::from_rational(Rational(Integer(-1), Integer(3)), p, 10);
  const auto s = a + b;
  CHECK(s.is_zero());
  CHECK(s.absolute_precision() == 10);
  const auto inv = PadicNumber::from_rational(Rational(2), p, 10).inverse();
  CHECK(inv.agrees_with(PadicNumber::exact(Rational(Integer(1), Integer(2)), p)));
  CHECK_THROWS_AS(PadicNumber::big_oh(p, 4).inverse(), Error);
  const auto small = PadicNumber::from_rational(Rational(25), p, 5);
  CHECK(small.valuation().value() == 2);
  CHECK(small.absolute_precision() == 7);
  CHECK(small.to_string() == "1 * 5^2 + O(5^7)");
  CHECK(PadicNumber::exact_zero(p).valuation().is_infinite());
  CHECK(PadicNumber::big_oh(p, 3).to_string() == "O(5^3)");
}

TEST_CASE("padic ops agree with rational arithmetic to predicted precision") {
  std::mt19937_64 rng(7);
  const std::int64_t primes[] = {2, 3, 5, 7, 13};
  for (int t = 0; t < 3000; ++t) {
    const Prime p(primes[t % 5]);
    const Rational x = testsupport::random_rational(rng, 60, 40);
    const Rational y = testsupport::random_rational(rng, 60, 40);
    const std::int64_t m1 = testsupport::uniform(rng, 1, 25), m2 = testsupport::uniform(rng, 1, 25);
    const auto a = PadicNumber::from_rational(x, p, m1);
    const auto b = PadicNumber::from_rational(y, p, m2);
    const auto ex = PadicNumber::exact(x, p), ey = PadicNumber::exact(y, p);
    // rounding keeps the stated digits
    CHECK(a.agrees_with(ex));
    const auto sum = a + b;
    CHECK(sum.agrees_with(PadicNumber::exact(x + y, p)));
    CHECK(sum.absolute_precision() == std::min(a.absolute_precision(), b.absolute_precision()));
    const auto diff = a - b;
    CHECK(diff.agrees_with(PadicNumber::exact(x - y, p)));
    const auto prod = a * b;
    CHECK(prod.agrees_with(PadicNumber::exact(x * y, p)));
    if (!x.is_zero() && !y.is_zero())
      CHECK(prod.relative_precision() == std::min(a.relative_precision(), b.relative_precision()));
    if (!x.is_zero()) {
      const auto inv = a.inverse();
      CHECK(inv.agrees_with(PadicNumber::exact(Rational(1) / x, p)));
      CHECK(inv.relative_precision() == a.relative_precision());
      CHECK((inv * a).agrees_with(PadicNumber::exact(Rational(1), p)));
    }
    // exact scaling keeps relative precision
    if (!y.is_zero() && !x.is_zero()) CHECK(a.scaled(y).relative_precision() == a.relative_precision());
    // exact operands stay exact
    CHECK((ex * ey).is_exact());
    CHECK((ex + ey).to_rational() == x + y);
  }
}

TEST_CASE("padic precision is never overstated under chained operations") {
  std::mt19937_64 rng(19);
  const Prime p(3);
  for (int t = 0; t < 300; ++t) {
    Rational exact_value(1);
    auto acc = PadicNumber::from_rational(exact_value, p, 15);
    for (int step = 0; step < 12; ++step) {
      const Rational r = testsupport::random_rational(rng, 20, 20);
      if (r.is_zero()) continue;
      const auto pr = PadicNumber::from_rational(r, p, testsupport::uniform(rng, 3, 15));
      switch (testsupport::uniform(rng, 0, 2)) {
        case 0: acc = acc + pr; exact_value += r; break;
        case 1: acc = acc * pr; exact_value *= r; break;
        default: acc = acc - pr; exact_value -= r; break;
      }
      CHECK(acc.agrees_with(PadicNumber::exact(exact_value, p)));
    }
  }
}
