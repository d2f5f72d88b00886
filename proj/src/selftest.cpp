#include "padrig/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "json.hpp"
#include "padrig/conditions.hpp"
#include "padrig/document.hpp"
#include "padrig/error.hpp"
#include "padrig/frobenius.hpp"
#include "padrig/fuchsian.hpp"
#include "padrig/report.hpp"

namespace padrig {

namespace {

using Rng = std::mt19937_64;
constexpr std::uint64_t kSeed = 20240611;

std::int64_t uni(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

Rational rand_q(Rng& rng, std::int64_t max_den, std::int64_t bound = 3) {
  const auto d = uni(rng, 1, max_den);
  return Rational(Integer(uni(rng, -bound * d, bound * d)), Integer(d));
}

JordanType rand_jordan(Rng& rng, std::size_t n, std::int64_t max_den) {
  std::vector<JordanBlock> blocks;
  std::size_t left = n;
  while (left > 0) {
    const auto s = static_cast<std::size_t>(uni(rng, 1, static_cast<std::int64_t>(left)));
    Rational ev = rand_q(rng, max_den);
    if (!blocks.empty() && uni(rng, 0, 2) == 0) ev = blocks.back().eigenvalue + Rational(uni(rng, -1, 1));
    blocks.push_back({ev, s});
    left -= s;
  }
  return JordanType(std::move(blocks));
}

MatrixQ rand_unimodular(Rng& rng, std::size_t n) {
  auto m = MatrixQ::identity(n);
  for (int s = 0; n > 1 && s < 5; ++s) {
    const auto i = static_cast<std::size_t>(uni(rng, 0, static_cast<std::int64_t>(n) - 1));
    const auto j = (i + 1 + static_cast<std::size_t>(uni(rng, 0, static_cast<std::int64_t>(n) - 2))) % n;
    const Rational c(uni(rng, -2, 2));
    for (std::size_t k = 0; k < n; ++k) m(i, k) += c * m(j, k);
  }
  return m;
}

FuchsianSystem rand_system(Rng& rng, std::size_t n, std::size_t k, std::int64_t max_den) {
  FuchsianSystem sys;
  sys.rank = n;
  sys.irreducible = true;
  sys.overconvergent_asserted = true;
  for (std::size_t i = 0; i < k; ++i) {
    auto pt = i + 1 == k ? SingularPoint::infinity() : SingularPoint::finite(Rational(static_cast<long>(i)));
    sys.locals.push_back({pt, rand_jordan(rng, n, max_den)});
  }
  return sys;
}

// Counts checks and keeps the first failure.
class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }
  void check(bool ok, const std::function<std::string()>& describe) {
    ++r_.checks;
    if (!ok && r_.pass) {
      r_.pass = false;
      r_.counterexample = describe();
    }
  }
  bool failed() const { return !r_.pass; }
  SuiteResult finish(double ms) {
    r_.milliseconds = ms;
    return r_;
  }

 private:
  SuiteResult r_;
};

void arith_suite(Suite& s) {
  Rng rng(kSeed);
  for (int t = 0; t < 300 && !s.failed(); ++t) {
    const Prime p(std::array<std::int64_t, 4>{2, 3, 5, 7}[uni(rng, 0, 3)]);
    const Rational a = rand_q(rng, 50, 40), b = rand_q(rng, 50, 40);
    const auto m = uni(rng, 2, 12);
    const auto pa = PadicNumber::from_rational(a, p, m), pb = PadicNumber::from_rational(b, p, m);
    const auto prod = pa * pb;
    s.check(prod.agrees_with(PadicNumber::exact(a * b, p)), [&] {
      return "p=" + std::to_string(p.value()) + " a=" + a.to_string() + " b=" + b.to_string() +
             " product " + prod.to_string();
    });
    const auto sum = pa + pb;
    s.check(sum.agrees_with(PadicNumber::exact(a + b, p)),
            [&] { return "sum a=" + a.to_string() + " b=" + b.to_string() + " gives " + sum.to_string(); });
    if (!a.is_zero() && !b.is_zero()) {
      const auto one = pa * pa.inverse();
      s.check(one.agrees_with(PadicNumber::exact(Rational(1), p)),
              [&] { return "a * a^-1 for a=" + a.to_string() + " gives " + one.to_string(); });
      s.check(padic_valuation(a * b, p).value() == padic_valuation(a, p).value() + padic_valuation(b, p).value(),
              [&] { return "valuation additivity for " + a.to_string() + ", " + b.to_string(); });
    }
  }
}

LaurentSeries rand_series(Rng& rng, Prime p, std::int64_t cap, std::int64_t hi, bool exact) {
  const auto lo = uni(rng, -2, 1);
  std::vector<PadicNumber> cs;
  for (auto k = lo; k < hi; ++k) {
    const Rational c(uni(rng, -30, 30));
    cs.push_back(exact ? PadicNumber::exact(c, p) : PadicNumber::from_rational(c, p, cap));
  }
  if (!cs.empty()) cs[0] = PadicNumber::exact(Rational(1), p);
  return LaurentSeries::from_coefficients(p, cap, lo, std::move(cs), exact ? kUnbounded : hi);
}

void series_suite(Suite& s) {
  Rng rng(kSeed + 1);
  for (int t = 0; t < 60 && !s.failed(); ++t) {
    const Prime p(std::array<std::int64_t, 3>{3, 5, 7}[uni(rng, 0, 2)]);
    const auto f = rand_series(rng, p, 10, 6, false), g = rand_series(rng, p, 10, 6, false);
    const auto h = rand_series(rng, p, 10, 6, true);
    const auto l = (f * g) * h, r = f * (g * h);
    s.check(l.agrees_with(r), [&] { return "associativity: f=" + f.to_string() + " g=" + g.to_string(); });
    const auto lhs = (f * g).derivative(), rhs = f.derivative() * g + f * g.derivative();
    s.check(lhs.agrees_with(rhs), [&] { return "Leibniz rule: f=" + f.to_string() + " g=" + g.to_string(); });
    const auto inv = f.inverse(12);
    const auto one = f * inv;
    s.check(one.agrees_with(LaurentSeries::constant(PadicNumber::exact(Rational(1), p), 10)),
            [&] { return "f * f^-1 for f=" + f.to_string() + " gives " + one.to_string(); });
  }
}

void linalg_suite(Suite& s) {
  Rng rng(kSeed + 2);
  for (int t = 0; t < 60 && !s.failed(); ++t) {
    const auto n = static_cast<std::size_t>(uni(rng, 1, 4));
    const JordanType j = rand_jordan(rng, n, 6);
    const MatrixQ u = rand_unimodular(rng, n);
    const MatrixQ a = u * j.matrix() * u.inverse();
    const auto d = jordan_form(a);
    s.check(d.type == j, [&] { return "jordan_form of " + a.to_string() + ": " + d.type.to_string() + " vs " + j.to_string(); });
    s.check(d.transform.inverse() * a * d.transform == d.type.matrix(),
            [&] { return "transform does not conjugate " + a.to_string() + " to its Jordan matrix"; });
    // commutant of the Jordan matrix by brute linear algebra
    const MatrixQ jm = j.matrix();
    DenseQ lin(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < n; ++c) {
          lin.at(i * n + k, c * n + k) += jm(i, c);
          lin.at(i * n + k, i * n + c) -= jm(c, k);
        }
    const auto nullity = n * n - rank(lin);
    s.check(nullity == centralizer_dim(j, EigenvalueGrouping::exact),
            [&] { return "centralizer_dim of " + j.to_string() + " vs kernel dimension " + std::to_string(nullity); });
  }
}

void fuchsian_suite(Suite& s) {
  Rng rng(kSeed + 3);
  for (int t = 0; t < 80 && !s.failed(); ++t) {
    const auto n = static_cast<std::size_t>(uni(rng, 1, 3));
    const auto k = static_cast<std::size_t>(uni(rng, 1, 5));
    auto sys = rand_system(rng, n, k, 12);
    std::int64_t h0 = 0;
    for (const auto& l : sys.locals) h0 += static_cast<std::int64_t>(local_h0(l, Coefficient::end));
    s.check(chi_p(sys, Coefficient::end) - euler_char_c(sys, Coefficient::end) == h0,
            [&] { return "chi assembly fails for a rank " + std::to_string(n) + " system on " + std::to_string(k) + " points"; });
    const auto idx = rigidity_index(sys);
    auto twisted = sys;
    for (auto& l : twisted.locals) l.jordan = l.jordan.shifted(rand_q(rng, 12));
    s.check(rigidity_index(twisted) == idx, [&] { return "rigidity index not twist invariant on " + sys.locals[0].jordan.to_string(); });
    if (n == 1 && k >= 1) {
      s.check(idx == 2, [&] { return "rank-1 index " + std::to_string(idx); });
    }
  }
}

void conditions_suite(Suite& s) {
  Rng rng(kSeed + 4);
  for (const std::int64_t pv : {2, 3, 5, 7, 11, 97}) {
    const Prime p(pv);
    for (std::int64_t n = 1; n <= 300 && !s.failed(); ++n) {
      if (n % pv == 0) continue;
      const auto f = multiplicative_order(p, n);
      std::int64_t x = 1, first = 0;
      for (std::int64_t e = 1; e <= n && first == 0; ++e) {
        x = x * pv % n;
        if (x % n == 1 % n) first = e;
      }
      s.check(f == first, [&] { return "order of " + std::to_string(pv) + " mod " + std::to_string(n) + " reported " + std::to_string(f); });
    }
  }
  for (int t = 0; t < 80 && !s.failed(); ++t) {
    const Prime p(std::array<std::int64_t, 3>{3, 5, 7}[uni(rng, 0, 2)]);
    std::vector<SingularPoint> pts;
    for (int i = 0; i < uni(rng, 1, 5); ++i) pts.push_back(SingularPoint::finite(rand_q(rng, 3, 4)));
    if (uni(rng, 0, 1) == 1) pts.push_back(SingularPoint::infinity());
    const bool pass = check_c1(pts, p).pass;
    auto shuffled = pts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    s.check(check_c1(shuffled, p).pass == pass, [&] { return "c1 depends on point order"; });

    auto sys = rand_system(rng, static_cast<std::size_t>(uni(rng, 1, 3)), 3, 10);
    const auto rep = full_condition_report(sys, p);
    if (rep.q) {
      s.check((*rep.q - 1) % rep.N == 0, [&] { return "q = " + rep.q->get_str() + " not 1 mod N = " + rep.N.get_str(); });
    }
    auto twisted = sys;
    for (auto& l : twisted.locals) l.jordan = l.jordan.shifted(rand_q(rng, 10));
    s.check(check_c3(twisted, p).pass == rep.c3.pass, [&] { return "c3 not twist invariant"; });
  }
}

void frobenius_suite(Suite& s) {
  Rng rng(kSeed + 5);
  for (int t = 0; t < 12 && !s.failed(); ++t) {
    const Prime p(std::array<std::int64_t, 2>{5, 7}[uni(rng, 0, 1)]);
    const std::int64_t q = p.value();
    const auto n = static_cast<std::size_t>(uni(rng, 1, 2));
    std::vector<Rational> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(Rational(Integer(uni(rng, -3, 3)), Integer(2)));
    const LocalModule diag(p, MatrixQ::diagonal(d));
    const Precision small{16, 12};
    const auto qa = qA_isomorphism(diag, q, small);
    s.check(qa.residual_exact, [&] { return "qA isomorphism residual not exact for " + diag.a().to_string(); });

    const JordanType j = rand_jordan(rng, n, 2);
    MatrixQ a = rand_unimodular(rng, n);
    a = a * j.matrix() * a.inverse();
    bool integral = true;
    for (const auto& e : a.entries()) integral = integral && is_p_integral(e, p);
    if (!integral) continue;
    const LocalModule m(p, a);
    const auto ev = j.eigenvalues();
    const auto [lo, hi] = std::minmax_element(ev.begin(), ev.end());
    const Precision prec{default_x_window(q, n, *hi - *lo), 30};
    std::vector<PadicNumber> h{PadicNumber::exact(Rational(1), p)};
    for (int k = 1; k <= 2; ++k) h.push_back(PadicNumber::exact(Rational(uni(rng, -3, 3) * p.value()), p));
    const FrobLift lift(p, q, LaurentSeries::from_coefficients(p, prec.p_digits, 0, std::move(h), kUnbounded));
    const auto r = frobenius_structure_local(m, lift, Method::exp, prec);
    s.check(r.verified, [&] { return "exp gauge unverified for A=" + a.to_string() + " residual " + std::to_string(r.residual_valuation); });

    const auto same = change_of_lifting(m, lift, lift, prec);
    s.check(same.gauge.distance_from_identity() >= kInfinitePrecision || same.gauge.distance_from_identity() >= prec.p_digits,
            [&] { return "change of lifting with equal lifts is not the identity"; });
  }
}

void report_suite(Suite& s) {
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"rank1", "rigid-with-frobenius-structure"}, {"hypergeometric", "rigid-with-frobenius-structure"},
      {"heun", "not-rigid"},                       {"c1_fail", "rigid-conditions-failed"},
      {"c3_fail", "rigid-conditions-failed"},      {"p2", "indeterminate"}};
  RunOptions opts;
  opts.json = true;
  opts.x_window = 12;
  opts.p_digits = 12;
  for (const auto& [name, verdict] : expected) {
    std::string text;
    for (const auto& [n, t] : builtin_documents())
      if (n == name) text = t;
    s.check(!text.empty(), [&] { return "builtin document missing: " + name; });
    if (text.empty()) continue;
    const auto a = cmd_analyze(text, opts), b = cmd_analyze(text, opts);
    s.check(a.output == b.output, [&] { return "JSON not deterministic for " + name; });
    std::string got = "(no output)";
    if (!a.output.empty()) got = nlohmann::json::parse(a.output).at("verdict").get<std::string>();
    s.check(got == verdict, [&] { return name + ": verdict " + got + ", expected " + verdict; });
  }
}

}  // namespace

std::vector<SuiteResult> run_selftest() {
  const std::vector<std::pair<std::string, void (*)(Suite&)>> suites = {
      {"arith", arith_suite},           {"series", series_suite},       {"linalg", linalg_suite},
      {"fuchsian", fuchsian_suite},     {"conditions", conditions_suite}, {"frobenius", frobenius_suite},
      {"report", report_suite}};
  std::vector<SuiteResult> out;
  for (const auto& [name, fn] : suites) {
    Suite s(name);
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(s);
    } catch (const std::exception& e) {
      s.check(false, [&] { return std::string("unexpected error: ") + e.what(); });
    }
    const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    out.push_back(s.finish(ms.count()));
  }
  return out;
}

std::string format_selftest(const std::vector<SuiteResult>& results) {
  std::ostringstream os;
  std::size_t passed = 0;
  const SuiteResult* first_fail = nullptr;
  for (const auto& r : results) {
    os << std::left << std::setw(12) << r.name << std::setw(6) << (r.pass ? "pass" : "FAIL") << std::right
       << std::setw(6) << r.checks << " checks " << std::setw(9) << std::fixed << std::setprecision(1)
       << r.milliseconds << " ms\n";
    if (r.pass) ++passed;
    else if (!first_fail) first_fail = &r;
  }
  os << passed << "/" << results.size() << " suites passed\n";
  if (first_fail) os << "counterexample (" << first_fail->name << "): " << first_fail->counterexample << "\n";
  return os.str();
}

}  // namespace padrig
