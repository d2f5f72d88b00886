#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padrig/linalg.hpp"
#include "padrig/matrix.hpp"
#include "padrig/series.hpp"

namespace padrig {

/// Working precision: x-exponent window [-x_window, x_window) and p-adic digits.
struct Precision {
  std::int64_t x_window = kDefaultXWindow;
  std::int64_t p_digits = kDefaultPDigits;
};

/// Default window bound 2 q n, widened by (q-1) * spread for exponents spread over an interval.
std::int64_t default_x_window(std::int64_t q, std::size_t n, const Rational& spread = Rational(0));

/// max(1, m - v_p((2X)!)): the residual valuation a gauge must reach to count as verified.
std::int64_t verification_threshold(Prime p, const Precision& prec);

/// M_A: free module with connection du + A u dx/x, A p-integral with rational eigenvalues.
class LocalModule {
 public:
  /// Fails with ErrorKind::input on non-p-integral entries and
  /// ErrorKind::condition on a non-rational spectrum.
  LocalModule(Prime p, MatrixQ a);

  Prime prime() const noexcept { return p_; }
  const MatrixQ& a() const noexcept { return a_; }
  std::size_t rank() const noexcept { return a_.size(); }
  const JordanDecomposition& jordan() const noexcept { return jordan_; }
  /// lcm of eigenvalue denominators.
  Integer exponent_denominator() const;
  /// A equals the canonical Jordan matrix of its type.
  bool is_jordan_adapted() const { return a_ == jordan_.type.matrix(); }

 private:
  Prime p_;
  MatrixQ a_;
  JordanDecomposition jordan_;
};

/// phi(x) = x^q h(x) with h a power series, h = 1 mod p.
class FrobLift {
 public:
  /// Fails with ErrorKind::input when q is not a power of p, h has negative-exponent
  /// terms or a window not covering exponent 0, or h - 1 has a coefficient of valuation < 1.
  FrobLift(Prime p, std::int64_t q, LaurentSeries h);
  /// phi(x) = x^q.
  static FrobLift standard(Prime p, std::int64_t q, std::int64_t p_cap);

  Prime prime() const noexcept { return p_; }
  std::int64_t q() const noexcept { return q_; }
  const LaurentSeries& h() const noexcept { return h_; }
  LaurentSeries phi() const { return h_.shifted(q_); }
  bool is_standard() const;

 private:
  Prime p_;
  std::int64_t q_;
  LaurentSeries h_;
};

enum class Method { exp, lifting };
const char* to_string(Method m);

/// Gauge C carrying the connection B (source) to B' (target):
/// dC C^-1 = C B C^-1 - B', with the residual of that equation certified on a window.
struct BaseChangeResult {
  MatrixSeries gauge;
  MatrixSeries gauge_inverse;
  MatrixSeries source;
  MatrixSeries target;
  /// Minimum valuation of the residual coefficients; kInfinitePrecision when exactly zero.
  std::int64_t residual_valuation = 0;
  bool residual_exact = false;
  /// Exponents [lo, hi) of the residual that were checked.
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  /// Valuation of C C^-1 - I (kInfinitePrecision when exact).
  std::int64_t inverse_valuation = 0;
  std::int64_t threshold = 1;
  bool verified = false;
  bool convergence_proven = true;
  /// min(parts) - composite residual, for composed gauges.
  std::optional<std::int64_t> composition_loss;
  std::vector<std::string> notes;
};

struct Residual {
  MatrixSeries value;
  std::int64_t valuation;
  bool exact;
};

/// dC C^-1 - C B C^-1 + B'.
Residual base_change_residual(const MatrixSeries& c, const MatrixSeries& c_inv, const MatrixSeries& b,
                              const MatrixSeries& b_target);

/// Computes the residual and fills in every certificate field.
BaseChangeResult certify(MatrixSeries c, MatrixSeries c_inv, MatrixSeries b, MatrixSeries b_target,
                         const Precision& prec, std::vector<std::string> notes = {});

/// second after first; first.target must be second.source.
BaseChangeResult compose(const BaseChangeResult& second, const BaseChangeResult& first, const Precision& prec);
/// Swaps roles: C^-1 carries B' back to B.
BaseChangeResult invert(const BaseChangeResult& r, const Precision& prec);

/// Throws ErrorKind::precision naming the achieved residual when the result is not verified.
void require_verified(const BaseChangeResult& r, const std::string& what);

/// B = A x^-1 (the coefficient of dx).
MatrixSeries connection_form(const LocalModule& m, std::int64_t p_cap);

/// phi^*(A dx/x) = q A dx/x + A dh/h.
MatrixSeries pullback_log_connection(const MatrixQ& a, const FrobLift& lift, std::int64_t x_cap, std::int64_t p_cap);
/// General pullback: B(phi(x)) phi'(x).
MatrixSeries pullback_connection(const MatrixSeries& b, const FrobLift& lift, std::int64_t x_cap);

/// Gauge x^-k on one Jordan block of a Jordan-adapted module; target shifts that
/// block's eigenvalue by k. ErrorKind::input if A is not in Jordan form.
BaseChangeResult shift_isomorphism(const LocalModule& m, std::int64_t k, std::size_t block,
                                   const Precision& prec);

/// M_A -> M_{qA}. ErrorKind::condition ("shift not integral") when some (q-1) lambda is not an integer.
BaseChangeResult qA_isomorphism(const LocalModule& m, std::int64_t q, const Precision& prec);

/// phi^*M_A -> M_{qA} by C = exp(A log h). p = 2 fails with ErrorKind::convergence.
BaseChangeResult exp_log_construction(const LocalModule& m, const FrobLift& lift, const Precision& prec);

/// lift1^*M_A -> lift2^*M_A by the Taylor comparison sum_k (phi2 - phi1)^k D_k(phi1) / k!.
/// Convergence is checked numerically and flagged, not proven.
BaseChangeResult change_of_lifting(const LocalModule& m, const FrobLift& lift1, const FrobLift& lift2,
                                   const Precision& prec);

/// phi^*M_A -> M_A: the chosen phi^*M_A -> M_{qA} construction followed by M_{qA} -> M_A.
/// When first_step is given it receives the phi^*M_A -> M_{qA} part.
BaseChangeResult frobenius_structure_local(const LocalModule& m, const FrobLift& lift, Method method,
                                           const Precision& prec, std::optional<BaseChangeResult>* first_step = nullptr);

}  // namespace padrig
