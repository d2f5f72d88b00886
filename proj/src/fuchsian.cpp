#include "padrig/fuchsian.hpp"

#include "padrig/error.hpp"

namespace padrig {

SingularPoint SingularPoint::parse(std::string_view text) {
  if (text == "inf" || text == "infinity") return infinity();
  return finite(Rational::parse(text));
}

const Rational& SingularPoint::location() const {
  if (infinite_) fail(ErrorKind::input, "the point at infinity has no affine location");
  return location_;
}

std::string SingularPoint::to_string() const { return infinite_ ? "inf" : location_.to_string(); }

MatrixQ FuchsianSystem::implied_residue_at_infinity() const {
  if (!residues) fail(ErrorKind::input, "system has no residue matrices");
  MatrixQ sum(rank);
  for (const auto& r : *residues) sum += r;
  return Rational(-1) * sum;
}

std::optional<MatrixQ> FuchsianSystem::residue_at(std::size_t local_index) const {
  if (!residues) return std::nullopt;
  if (locals.at(local_index).point.is_infinity()) return implied_residue_at_infinity();
  std::size_t affine = 0;
  for (std::size_t i = 0; i < local_index; ++i)
    if (!locals[i].point.is_infinity()) ++affine;
  if (affine >= residues->size()) return std::nullopt;
  return (*residues)[affine];
}

ValidationReport validate_system(const FuchsianSystem& sys) {
  ValidationReport rep;
  auto issue = [&](std::string code, std::string msg) { rep.issues.push_back({std::move(code), std::move(msg)}); };
  if (sys.rank < 1) issue("rank", "rank must be >= 1");
  if (sys.locals.empty()) issue("no_points", "at least one singular point is required");
  for (std::size_t i = 0; i < sys.locals.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (sys.locals[i].point == sys.locals[j].point)
        issue("duplicate_point", "duplicate singular point " + sys.locals[i].point.to_string());
    if (sys.locals[i].jordan.rank() != sys.rank)
      issue("rank_mismatch", "exponent blocks at " + sys.locals[i].point.to_string() + " have total size " +
                                 std::to_string(sys.locals[i].jordan.rank()) + ", rank is " + std::to_string(sys.rank));
  }
  if (!sys.residues || !rep.issues.empty()) return rep;

  std::size_t affine = 0;
  bool has_infinity = false;
  for (const auto& l : sys.locals) {
    if (l.point.is_infinity())
      has_infinity = true;
    else
      ++affine;
  }
  if (sys.residues->size() != affine) {
    issue("residue_count", "expected " + std::to_string(affine) + " residue matrices (one per finite point), got " +
                               std::to_string(sys.residues->size()));
    return rep;
  }
  for (const auto& r : *sys.residues)
    if (r.size() != sys.rank) {
      issue("residue_size", "residue matrix of size " + std::to_string(r.size()) + " in a rank " +
                                std::to_string(sys.rank) + " system");
      return rep;
    }
  Rational trace_sum;
  for (const auto& l : sys.locals)
    for (const auto& e : l.jordan.eigenvalues()) trace_sum += e;
  rep.trace_residual = trace_sum;
  if (!has_infinity) {
    issue("trace_relation", "residues are given but infinity is not listed; the implied residue at infinity must be declared");
    return rep;
  }
  if (!trace_sum.is_zero())
    issue("trace_relation", "sum of all exponents is " + trace_sum.to_string() + ", residues force 0");
  for (std::size_t i = 0; i < sys.locals.size(); ++i) {
    const auto r = sys.residue_at(i);
    try {
      const auto jd = jordan_form(*r);
      if (!(jd.type == sys.locals[i].jordan))
        issue("residue_jordan_mismatch", "residue at " + sys.locals[i].point.to_string() + " has Jordan type " +
                                             jd.type.to_string() + ", declared " + sys.locals[i].jordan.to_string());
    } catch (const Error& e) {
      issue("residue_spectrum", "residue at " + sys.locals[i].point.to_string() + ": " + e.what());
    }
  }
  return rep;
}

void require_valid(const FuchsianSystem& sys) {
  const auto rep = validate_system(sys);
  if (rep.valid()) return;
  std::string msg = "invalid system:";
  for (const auto& i : rep.issues) msg += " [" + i.code + "] " + i.message + ";";
  fail(ErrorKind::input, msg);
}

std::int64_t euler_char_c(const FuchsianSystem& sys, Coefficient c) {
  const auto n = static_cast<std::int64_t>(sys.rank);
  const std::int64_t d = c == Coefficient::self ? n : n * n;
  return d * (2 - static_cast<std::int64_t>(sys.locals.size()));
}

std::size_t local_h0(const LocalData& data, Coefficient c) {
  if (c == Coefficient::end) return centralizer_dim(data.jordan, EigenvalueGrouping::mod_integers);
  std::size_t count = 0;
  for (const auto& b : data.jordan.blocks())
    if (b.eigenvalue.is_integer()) ++count;
  return count;
}

std::int64_t chi_p(const FuchsianSystem& sys, Coefficient c) {
  std::int64_t chi = euler_char_c(sys, c);
  for (const auto& l : sys.locals) chi += static_cast<std::int64_t>(local_h0(l, c));
  return chi;
}

std::int64_t rigidity_index(const FuchsianSystem& sys) { return chi_p(sys, Coefficient::end); }

std::size_t accessory_parameters(const FuchsianSystem& sys) {
  if (!sys.irreducible)
    fail(ErrorKind::condition, "accessory parameters are only defined for systems asserted irreducible");
  const std::int64_t idx = rigidity_index(sys);
  if (idx > 2 || idx == 1)
    fail(ErrorKind::inconsistency, "rigidity index " + std::to_string(idx) +
                                       " is impossible for an irreducible system (must be 2 or <= 0)");
  return static_cast<std::size_t>(2 - idx);
}

CohomologyReport cohomology_report(const FuchsianSystem& sys) {
  require_valid(sys);
  CohomologyReport r;
  r.chi_c = euler_char_c(sys, Coefficient::end);
  r.chi_c_self = euler_char_c(sys, Coefficient::self);
  for (const auto& l : sys.locals) {
    r.local_h0.push_back(local_h0(l, Coefficient::end));
    r.local_h0_self.push_back(local_h0(l, Coefficient::self));
    r.resonance_flags.push_back(l.jordan.is_resonant());
  }
  r.chi_p = chi_p(sys, Coefficient::end);
  r.chi_p_self = chi_p(sys, Coefficient::self);
  r.rigidity_index = r.chi_p;
  if (sys.irreducible && (r.rigidity_index == 2 || r.rigidity_index <= 0))
    r.h1p_end = static_cast<std::size_t>(2 - r.rigidity_index);
  r.rigid = sys.irreducible && r.rigidity_index == 2;
  return r;
}

}  // namespace padrig
