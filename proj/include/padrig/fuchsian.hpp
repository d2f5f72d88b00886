#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padrig/linalg.hpp"
#include "padrig/matrix.hpp"
#include "padrig/rational.hpp"

namespace padrig {

/// A point of the projective line over Q: a rational or infinity.
class SingularPoint {
 public:
  static SingularPoint infinity() { return SingularPoint(); }
  static SingularPoint finite(Rational r) { return SingularPoint(std::move(r)); }
  /// "inf" or a rational string.
  static SingularPoint parse(std::string_view text);

  bool is_infinity() const noexcept { return infinite_; }
  /// Precondition: finite.
  const Rational& location() const;
  std::string to_string() const;
  friend bool operator==(const SingularPoint&, const SingularPoint&) = default;

 private:
  SingularPoint() : infinite_(true) {}
  explicit SingularPoint(Rational r) : infinite_(false), location_(std::move(r)) {}
  bool infinite_;
  Rational location_;
};

struct LocalData {
  SingularPoint point;
  JordanType jordan;
};

/// Regular-singular system on P^1 minus S, described by local exponent data.
struct FuchsianSystem {
  std::size_t rank = 0;
  std::vector<LocalData> locals;
  /// One residue per finite point, in the order those points appear in `locals`.
  /// The residue at infinity is implied: minus the sum of the others.
  std::optional<std::vector<MatrixQ>> residues;
  bool irreducible = false;              // asserted, never computed
  bool overconvergent_asserted = false;  // condition C2, asserted

  /// Residue at infinity implied by the residue theorem (requires residues).
  MatrixQ implied_residue_at_infinity() const;
  /// Residue matrix at a point when residues are given.
  std::optional<MatrixQ> residue_at(std::size_t local_index) const;
};

struct ValidationIssue {
  std::string code;  // machine-readable: duplicate_point, rank_mismatch, ...
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  /// Sum of all declared exponents over all points, when residues are given (must be 0).
  std::optional<Rational> trace_residual;
  bool valid() const noexcept { return issues.empty(); }
};

ValidationReport validate_system(const FuchsianSystem& sys);
/// Throws ErrorKind::input listing every issue when the system is invalid.
void require_valid(const FuchsianSystem& sys);

enum class Coefficient { self, end };

/// d * (2 - |S|) with d = n or n^2: compactly supported Euler characteristic
/// with zero irregularity at every point.
std::int64_t euler_char_c(const FuchsianSystem& sys, Coefficient c);

/// Horizontal sections at s of the normal form d + A dx/x: integer-eigenvalue
/// blocks for self, the commutant modulo integers for End.
std::size_t local_h0(const LocalData& data, Coefficient c);

std::int64_t chi_p(const FuchsianSystem& sys, Coefficient c);

/// chi_p(End): n^2 (2 - |S|) + sum_s centralizer_dim(J_s, mod integers).
std::int64_t rigidity_index(const FuchsianSystem& sys);

/// 2 - rigidity_index. Requires the irreducibility assertion (ErrorKind::condition)
/// and an index that irreducibility allows, 2 or <= 0 (ErrorKind::inconsistency).
std::size_t accessory_parameters(const FuchsianSystem& sys);

struct CohomologyReport {
  std::int64_t chi_c = 0;                 // End
  std::vector<std::size_t> local_h0;      // End, per point
  std::int64_t chi_p = 0;                 // End
  std::int64_t chi_c_self = 0;
  std::vector<std::size_t> local_h0_self;
  std::int64_t chi_p_self = 0;
  std::int64_t rigidity_index = 0;
  std::optional<std::size_t> h1p_end;     // accessory parameters, when defined
  bool rigid = false;                     // index == 2 and irreducible asserted
  std::vector<bool> resonance_flags;
};

CohomologyReport cohomology_report(const FuchsianSystem& sys);

}  // namespace padrig
