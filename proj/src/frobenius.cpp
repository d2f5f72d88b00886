#include "padrig/frobenius.hpp"

#include <algorithm>

#include "padrig/error.hpp"

namespace padrig {

namespace {

PadicNumber one(Prime p) { return PadicNumber::exact(Rational(1), p); }

std::int64_t residual_hi_floor(const MatrixSeries& r, std::int64_t x_window) {
  return std::min(r.hi(), x_window);
}

bool all_exact_zero(const MatrixSeries& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (!m(i, j).dense_coefficients().empty()) return false;
  return true;
}

MatrixSeries capped(const MatrixSeries& m, std::int64_t absolute_precision) {
  MatrixSeries out = m;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m(i, j).capped(absolute_precision);
  return out;
}

MatrixSeries diagonal_monomials(Prime p, std::int64_t p_cap, const std::vector<std::int64_t>& exps) {
  MatrixSeries d(exps.size(), p, p_cap);
  for (std::size_t i = 0; i < exps.size(); ++i) d(i, i) = LaurentSeries::monomial(one(p), exps[i], p_cap);
  return d;
}

// phi^j for j of either sign, every power truncated at the window cap.
class PowerCache {
 public:
  PowerCache(LaurentSeries phi, std::int64_t cap) : phi_(std::move(phi)), cap_(cap) {
    const auto u = LaurentSeries::constant(one(phi_.prime()), phi_.p_cap());
    pos_.push_back(u);
    neg_.push_back(u);
  }
  const LaurentSeries& power(std::int64_t j) {
    if (j >= 0) {
      while (static_cast<std::int64_t>(pos_.size()) <= j) pos_.push_back((pos_.back() * phi_).truncated(cap_));
      return pos_[static_cast<std::size_t>(j)];
    }
    if (!inv_) inv_ = phi_.inverse(cap_);
    while (static_cast<std::int64_t>(neg_.size()) <= -j) neg_.push_back((neg_.back() * *inv_).truncated(cap_));
    return neg_[static_cast<std::size_t>(-j)];
  }

 private:
  LaurentSeries phi_;
  std::int64_t cap_;
  std::optional<LaurentSeries> inv_;
  std::vector<LaurentSeries> pos_, neg_;
};

LaurentSeries compose_cached(const LaurentSeries& f, PowerCache& cache, const LaurentSeries& phi, std::int64_t cap) {
  if (f.is_exact_zero()) return f;
  if (f.is_bounded()) return substitute(f, phi, cap);
  LaurentSeries acc(f.prime(), f.p_cap());
  const auto& cs = f.dense_coefficients();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].is_exact_zero()) continue;
    acc += cache.power(f.order() + static_cast<std::int64_t>(i)).scaled(cs[i]);
  }
  return acc.truncated(cap);
}

}  // namespace

std::int64_t default_x_window(std::int64_t q, std::size_t n, const Rational& spread) {
  // the qA shifts move the two ends of the gauge window apart by (q-1) * spread
  const Rational extra = Rational(q - 1) * spread;
  const Integer up = -(-extra).floor();
  return 2 * q * static_cast<std::int64_t>(n) + up.get_si();
}

std::int64_t verification_threshold(Prime p, const Precision& prec) {
  return std::max<std::int64_t>(1, prec.p_digits - factorial_valuation(2 * prec.x_window, p.value()));
}

// ---------------------------------------------------------------------------

LocalModule::LocalModule(Prime p, MatrixQ a) : p_(p), a_(std::move(a)) {
  if (a_.size() == 0) fail(ErrorKind::input, "local module of rank 0");
  for (const auto& x : a_.entries())
    if (!is_p_integral(x, p_)) fail(ErrorKind::input, "residue entry " + x.to_string() + " is not p-integral");
  jordan_ = jordan_form(a_);
}

Integer LocalModule::exponent_denominator() const { return denominator_lcm(jordan_.type.eigenvalues()); }

FrobLift::FrobLift(Prime p, std::int64_t q, LaurentSeries h) : p_(p), q_(q), h_(std::move(h)) {
  if (h_.prime() != p_) fail(ErrorKind::input, "lift series prime mismatch");
  std::int64_t r = q_;
  while (r > 1 && r % p_.value() == 0) r /= p_.value();
  if (q_ < p_.value() || r != 1) fail(ErrorKind::input, "q = " + std::to_string(q_) + " is not a power of p");
  if (h_.order() < 0) fail(ErrorKind::input, "h must be a power series (no negative exponents)");
  if (h_.hi() <= 0) fail(ErrorKind::input, "h must be known at exponent 0");
  const auto delta = h_ - LaurentSeries::constant(one(p_), h_.p_cap());
  if (delta.min_valuation() < 1) fail(ErrorKind::input, "h is not congruent to 1 mod p");
}

FrobLift FrobLift::standard(Prime p, std::int64_t q, std::int64_t p_cap) {
  return FrobLift(p, q, LaurentSeries::constant(one(p), p_cap));
}

bool FrobLift::is_standard() const {
  const auto delta = h_ - LaurentSeries::constant(one(p_), h_.p_cap());
  return delta.is_exact_zero();
}

const char* to_string(Method m) { return m == Method::exp ? "exp" : "lifting"; }

// ---------------------------------------------------------------------------

Residual base_change_residual(const MatrixSeries& c, const MatrixSeries& c_inv, const MatrixSeries& b,
                              const MatrixSeries& b_target) {
  MatrixSeries r = c.derivative() * c_inv - c * b * c_inv + b_target;
  const bool exact = all_exact_zero(r);
  const std::int64_t v = r.min_valuation();
  return {std::move(r), v, exact};
}

BaseChangeResult certify(MatrixSeries c, MatrixSeries c_inv, MatrixSeries b, MatrixSeries b_target,
                         const Precision& prec, std::vector<std::string> notes) {
  const Prime p = c.prime();
  BaseChangeResult out{std::move(c), std::move(c_inv), std::move(b), std::move(b_target), 0, false, 0, 0, 0, 1, false, true, std::nullopt, {}};
  out.notes = std::move(notes);
  const Residual res = base_change_residual(out.gauge, out.gauge_inverse, out.source, out.target);
  out.residual_exact = res.exact;
  out.residual_valuation = res.valuation;
  out.window_lo = -prec.x_window;
  out.window_hi = residual_hi_floor(res.value, prec.x_window);
  const MatrixSeries id_check = out.gauge * out.gauge_inverse;
  out.inverse_valuation = all_exact_zero(id_check - MatrixSeries::identity(id_check.size(), p, id_check.p_cap()))
                              ? kInfinitePrecision
                              : id_check.distance_from_identity();
  out.threshold = verification_threshold(p, prec);
  const bool residual_ok = out.residual_exact || out.residual_valuation >= out.threshold;
  const bool inverse_ok = out.inverse_valuation >= out.threshold;
  const bool window_ok = out.window_hi > 0;
  out.verified = residual_ok && inverse_ok && window_ok;
  if (!window_ok) out.notes.push_back("checked window exhausted: residual known only below x^" + std::to_string(out.window_hi));
  if (!inverse_ok) out.notes.push_back("gauge inverse check reached only valuation " + std::to_string(out.inverse_valuation));
  return out;
}

BaseChangeResult compose(const BaseChangeResult& second, const BaseChangeResult& first, const Precision& prec) {
  if (!first.target.agrees_with(second.source))
    fail(ErrorKind::input, "gauge composition: target of the first map differs from the source of the second");
  auto notes = first.notes;
  notes.insert(notes.end(), second.notes.begin(), second.notes.end());
  auto out = certify(second.gauge * first.gauge, first.gauge_inverse * second.gauge_inverse, first.source,
                     second.target, prec, std::move(notes));
  out.convergence_proven = first.convergence_proven && second.convergence_proven;
  if (!out.residual_exact) {
    const std::int64_t parts = std::min(first.residual_exact ? kInfinitePrecision : first.residual_valuation,
                                        second.residual_exact ? kInfinitePrecision : second.residual_valuation);
    out.composition_loss = parts >= kInfinitePrecision ? 0 : std::max<std::int64_t>(0, parts - out.residual_valuation);
  } else {
    out.composition_loss = 0;
  }
  return out;
}

BaseChangeResult invert(const BaseChangeResult& r, const Precision& prec) {
  auto out = certify(r.gauge_inverse, r.gauge, r.target, r.source, prec, r.notes);
  out.convergence_proven = r.convergence_proven;
  return out;
}

void require_verified(const BaseChangeResult& r, const std::string& what) {
  if (r.verified) return;
  fail(ErrorKind::precision, what + ": not verified (residual valuation " +
                                 (r.residual_exact ? std::string("exact") : std::to_string(r.residual_valuation)) +
                                 ", threshold " + std::to_string(r.threshold) + ")");
}

// ---------------------------------------------------------------------------

MatrixSeries connection_form(const LocalModule& m, std::int64_t p_cap) {
  return MatrixSeries::monomial(m.a(), -1, m.prime(), p_cap);
}

MatrixSeries pullback_log_connection(const MatrixQ& a, const FrobLift& lift, std::int64_t x_cap,
                                     std::int64_t p_cap) {
  const Prime p = lift.prime();
  MatrixSeries b = MatrixSeries::monomial(Rational(lift.q()) * a, -1, p, p_cap);
  if (lift.is_standard()) return b;
  const LaurentSeries dl = dlog(lift.h(), x_cap);
  return (b + MatrixSeries::constant(a, p, p_cap).scaled(dl)).truncated(x_cap);
}

MatrixSeries pullback_connection(const MatrixSeries& b, const FrobLift& lift, std::int64_t x_cap) {
  const LaurentSeries phi = lift.phi();
  const LaurentSeries dphi = phi.derivative();
  PowerCache cache(phi, x_cap);
  MatrixSeries out(b.size(), b.prime(), b.p_cap());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b(i, j).is_exact_zero()) continue;
      const auto sub = compose_cached(b(i, j), cache, phi, x_cap);
      out(i, j) = (sub * dphi).truncated(x_cap);
    }
  return out;
}

// ---------------------------------------------------------------------------

BaseChangeResult shift_isomorphism(const LocalModule& m, std::int64_t k, std::size_t block, const Precision& prec) {
  if (!m.is_jordan_adapted()) fail(ErrorKind::input, "shift isomorphism needs A in Jordan-adapted form");
  const auto& blocks = m.jordan().type.blocks();
  if (block >= blocks.size()) fail(ErrorKind::input, "block index " + std::to_string(block) + " out of range");
  std::size_t offset = 0;
  for (std::size_t b = 0; b < block; ++b) offset += blocks[b].size;
  const std::size_t n = m.rank();
  std::vector<std::int64_t> e(n, 0), e_inv(n, 0);
  MatrixQ target = m.a();
  for (std::size_t i = offset; i < offset + blocks[block].size; ++i) {
    e[i] = -k;
    e_inv[i] = k;
    target(i, i) += Rational(k);
  }
  const Prime p = m.prime();
  return certify(diagonal_monomials(p, prec.p_digits, e), diagonal_monomials(p, prec.p_digits, e_inv),
                 connection_form(m, prec.p_digits), MatrixSeries::monomial(target, -1, p, prec.p_digits), prec);
}

BaseChangeResult qA_isomorphism(const LocalModule& m, std::int64_t q, const Precision& prec) {
  const Prime p = m.prime();
  const auto& jd = m.jordan();
  const std::size_t n = m.rank();
  std::vector<std::int64_t> shift(n), shift_inv(n);
  std::vector<Rational> s(n), s_inv(n);
  std::size_t at = 0;
  const Rational qr(q);
  for (const auto& b : jd.type.blocks()) {
    const Rational k = (qr - Rational(1)) * b.eigenvalue;
    if (!k.is_integer())
      fail(ErrorKind::condition, "shift not integral: (q - 1) * " + b.eigenvalue.to_string() + " = " + k.to_string());
    const auto ki = k.numerator();
    if (!ki.fits_slong_p()) fail(ErrorKind::precision, "shift " + ki.get_str() + " is too large");
    Rational qpow(1);
    for (std::size_t i = 0; i < b.size; ++i) {
      shift[at + i] = -ki.get_si();
      shift_inv[at + i] = ki.get_si();
      s[at + i] = Rational(1) / qpow;
      s_inv[at + i] = qpow;
      qpow *= qr;
    }
    at += b.size;
  }
  const MatrixQ& t = jd.transform;
  const MatrixQ t_inv = t.inverse();
  const MatrixSeries d = diagonal_monomials(p, prec.p_digits, shift);
  const MatrixSeries d_inv = diagonal_monomials(p, prec.p_digits, shift_inv);
  MatrixSeries c = (t * MatrixQ::diagonal(s)) * d * t_inv;
  MatrixSeries c_inv = (t * d_inv) * (MatrixQ::diagonal(s_inv) * t_inv);
  std::vector<std::string> notes;
  if (jd.type.is_resonant())
    notes.push_back("resonant exponents: per-block shifts k = (q - 1) lambda used as given");
  return certify(std::move(c), std::move(c_inv), connection_form(m, prec.p_digits),
                 MatrixSeries::monomial(qr * m.a(), -1, p, prec.p_digits), prec, std::move(notes));
}

BaseChangeResult exp_log_construction(const LocalModule& m, const FrobLift& lift, const Precision& prec) {
  const Prime p = m.prime();
  if (p.value() == 2)
    fail(ErrorKind::convergence, "exp method needs p >= 3 (the exponential does not converge for p = 2); use method lifting");
  if (lift.prime() != p) fail(ErrorKind::input, "lift prime differs from module prime");
  const std::int64_t x = prec.x_window;
  const auto h_minus_1 = lift.h() - LaurentSeries::constant(one(p), lift.h().p_cap());
  const LaurentSeries l = log_one_plus(h_minus_1, x);
  MatrixSeries c = matrix_exp(m.a(), l, x);
  MatrixSeries c_inv = matrix_exp(Rational(-1) * m.a(), l, x);
  return certify(std::move(c), std::move(c_inv), pullback_log_connection(m.a(), lift, x, prec.p_digits),
                 MatrixSeries::monomial(Rational(lift.q()) * m.a(), -1, p, prec.p_digits), prec);
}

BaseChangeResult change_of_lifting(const LocalModule& m, const FrobLift& lift1, const FrobLift& lift2,
                                   const Precision& prec) {
  const Prime p = m.prime();
  if (lift1.prime() != p || lift2.prime() != p) fail(ErrorKind::input, "lift prime differs from module prime");
  if (lift1.q() != lift2.q()) fail(ErrorKind::input, "lifts have different q");
  const std::int64_t x = prec.x_window;
  const std::int64_t m_digits = prec.p_digits;
  const std::size_t n = m.rank();
  const auto b1 = pullback_log_connection(m.a(), lift1, x, m_digits);
  const auto b2 = pullback_log_connection(m.a(), lift2, x, m_digits);
  const LaurentSeries phi1 = lift1.phi();
  const LaurentSeries delta = lift2.phi() - phi1;
  if (delta.is_exact_zero())
    return certify(MatrixSeries::identity(n, p, m_digits), MatrixSeries::identity(n, p, m_digits), b1, b2, prec);
  if (delta.min_valuation() < 1)
    fail(ErrorKind::convergence, "lifts are not congruent mod p: phi2 - phi1 has a coefficient of valuation < 1");

  const MatrixSeries b = connection_form(m, m_digits);
  const std::int64_t target = m_digits + 1;
  PowerCache cache(phi1, x);
  MatrixSeries f = MatrixSeries::identity(n, p, m_digits);  // D_k / k!
  MatrixSeries g = MatrixSeries::identity(n, p, m_digits);
  LaurentSeries delta_pow = LaurentSeries::constant(one(p), m_digits);
  int quiet = 0;
  constexpr std::int64_t kMaxTerms = 2000;
  std::int64_t k = 1;
  for (; k <= kMaxTerms; ++k) {
    f = f.derivative() - f * b;
    MatrixSeries fk(n, p, m_digits);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        LaurentSeries e = f(i, j).scaled(Rational(1) / Rational(k));
        f(i, j) = e;
        fk(i, j) = compose_cached(e, cache, phi1, x);
      }
    const std::int64_t ord = fk.order();
    if (ord >= kUnbounded) {
      ++quiet;
      if (quiet >= 2) break;
      continue;
    }
    delta_pow = (delta_pow * delta).truncated(std::max(x - ord, x));
    const MatrixSeries term = fk.scaled(delta_pow).truncated(x);
    g = (g + term).truncated(x);
    quiet = (term.min_valuation() >= target || term.order() >= x) ? quiet + 1 : 0;
    if (quiet >= 2) break;
  }
  if (k > kMaxTerms) fail(ErrorKind::precision, "change of lifting: Taylor series did not reach the target precision");
  g = capped(g, target);
  MatrixSeries g_inv = g.inverse(x);
  auto out = certify(std::move(g), std::move(g_inv), b1, b2, prec,
                     {"Taylor comparison summed to " + std::to_string(k) + " terms; later terms estimated below p^" +
                      std::to_string(target) + " (convergence flagged, not proven)"});
  out.convergence_proven = false;
  return out;
}

BaseChangeResult frobenius_structure_local(const LocalModule& m, const FrobLift& lift, Method method,
                                           const Precision& prec, std::optional<BaseChangeResult>* first_step) {
  const auto q_iso = qA_isomorphism(m, lift.q(), prec);
  const auto back = invert(q_iso, prec);
  const auto first = method == Method::exp
                         ? exp_log_construction(m, lift, prec)
                         : change_of_lifting(m, lift, FrobLift::standard(m.prime(), lift.q(), prec.p_digits), prec);
  auto out = compose(back, first, prec);
  if (first_step) *first_step = first;
  out.notes.insert(out.notes.begin(), std::string("method ") + to_string(method) + "; q = " + std::to_string(lift.q()));
  return out;
}

}  // namespace padrig
