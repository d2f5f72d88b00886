#include "padrig/conditions.hpp"

#include <algorithm>

#include "padrig/error.hpp"
#include "padrig/linalg.hpp"

namespace padrig {

ResidueClass reduce_point(const SingularPoint& s, Prime p) {
  if (s.is_infinity() || !is_p_integral(s.location(), p)) return {true, 0};
  const Integer pz(static_cast<long>(p.value()));
  Integer den_inv;
  const Integer den = s.location().denominator();
  mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
  Integer r = s.location().numerator() * den_inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pz.get_mpz_t());
  return {false, r.get_si()};
}

C1Result check_c1(std::span<const SingularPoint> points, Prime p) {
  C1Result res;
  std::vector<ResidueClass> classes;
  for (const auto& s : points) classes.push_back(reduce_point(s, p));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (classes[i] == classes[j]) res.witnesses.emplace_back(points[i], points[j]);
  res.pass = res.witnesses.empty();
  return res;
}

C3Result check_c3(const FuchsianSystem& sys, Prime p) {
  C3Result res;
  for (const auto& l : sys.locals) {
    auto diffs = end_exponents(l.jordan.eigenvalues());
    std::sort(diffs.begin(), diffs.end());
    diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
    for (const auto& d : diffs)
      if (!is_p_integral(d, p)) res.offending.push_back({l.point, d});
  }
  res.pass = res.offending.empty();
  return res;
}

namespace {

Integer all_exponent_lcm(const FuchsianSystem& sys) {
  std::vector<Rational> all;
  for (const auto& l : sys.locals)
    for (const auto& e : l.jordan.eigenvalues()) all.push_back(e);
  return denominator_lcm(all);
}

}  // namespace

FrobeniusPower frobenius_power(const FuchsianSystem& sys, Prime p) {
  FrobeniusPower fp;
  fp.N = all_exponent_lcm(sys);
  if (!fp.N.fits_slong_p()) fail(ErrorKind::input, "exponent denominator lcm " + fp.N.get_str() + " is too large");
  fp.f = multiplicative_order(p, fp.N.get_si());
  fp.q = ipow(p.value(), fp.f);
  return fp;
}

ConditionReport full_condition_report(const FuchsianSystem& sys, Prime p) {
  require_valid(sys);
  ConditionReport r;
  r.prime = p;
  std::vector<SingularPoint> pts;
  for (const auto& l : sys.locals) pts.push_back(l.point);
  r.c1 = check_c1(pts, p);
  r.c2_asserted = sys.overconvergent_asserted;
  r.c3 = check_c3(sys, p);
  r.c4 = true;
  r.N = all_exponent_lcm(sys);
  r.method1_available = p.value() >= 3;
  r.notes.push_back("C1: finite p-integral points reduce mod p; points of negative valuation and infinity share the disk at infinity");
  r.notes.push_back(sys.overconvergent_asserted ? "C2: overconvergence asserted by the user, not verified"
                                                : "C2: overconvergence not asserted");
  r.notes.push_back("C3: rational exponent differences are never p-adic Liouville numbers; only p-integrality is checked");
  r.notes.push_back("C4: exponents are rational by construction");
  Integer g;
  const Integer pz(static_cast<long>(p.value()));
  mpz_gcd(g.get_mpz_t(), pz.get_mpz_t(), r.N.get_mpz_t());
  if (r.c1.pass && r.c3.pass && r.c4 && g == 1) {
    const auto fp = frobenius_power(sys, p);
    r.f = fp.f;
    r.q = fp.q;
    r.notes.push_back("q = p^f with f minimal; any multiple of f also works");
  } else if (g != 1) {
    r.notes.push_back("ramified denominator: p divides N, no Frobenius power");
  }
  return r;
}

}  // namespace padrig
