#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "padrig/fuchsian.hpp"
#include "padrig/rational.hpp"

namespace padrig {

/// Residue disk of a point: a class in F_p, or the disk at infinity.
struct ResidueClass {
  bool at_infinity = false;
  std::int64_t value = 0;
  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

/// p-integral points reduce mod p; negative valuation and infinity go to the disk at infinity.
ResidueClass reduce_point(const SingularPoint& s, Prime p);

struct C1Result {
  bool pass = true;
  std::vector<std::pair<SingularPoint, SingularPoint>> witnesses;  // colliding pairs, input order
};

C1Result check_c1(std::span<const SingularPoint> points, Prime p);

struct C3Offence {
  SingularPoint point;
  Rational difference;
};

struct C3Result {
  bool pass = true;
  std::vector<C3Offence> offending;  // distinct differences per point, ascending
};

C3Result check_c3(const FuchsianSystem& sys, Prime p);

struct FrobeniusPower {
  Integer N;
  std::int64_t f = 0;
  Integer q;
};

/// N = lcm of all exponent denominators, f = ord_N(p), q = p^f.
/// gcd(p, N) != 1 fails with ErrorKind::condition (ramified denominator).
FrobeniusPower frobenius_power(const FuchsianSystem& sys, Prime p);

struct ConditionReport {
  Prime prime{2};
  C1Result c1;
  bool c2_asserted = false;
  C3Result c3;
  bool c4 = true;  // exponents are rational by construction
  Integer N;
  std::optional<std::int64_t> f;
  std::optional<Integer> q;
  bool method1_available = false;
  std::vector<std::string> notes;

  bool all_pass() const noexcept { return c1.pass && c2_asserted && c3.pass && c4; }
};

ConditionReport full_condition_report(const FuchsianSystem& sys, Prime p);

}  // namespace padrig
