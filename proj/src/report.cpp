#include "padrig/report.hpp"

#include <algorithm>
#include <future>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "padrig/conditions.hpp"
#include "padrig/document.hpp"
#include "padrig/error.hpp"

namespace padrig {

namespace {

using oj = nlohmann::ordered_json;

constexpr const char* kSchema = "padrig-report/1";
constexpr std::int64_t kMaxWindow = 100000;

oj integer_json(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

oj valuation_json(std::int64_t v, bool exact) {
  if (exact || v >= kInfinitePrecision) return "exact";
  return v;
}

oj coefficient_json(std::int64_t k, const PadicNumber& c) {
  oj t;
  t["exponent"] = k;
  t["value"] = c.to_rational().to_string();
  if (c.is_exact()) {
    t["precision"] = "exact";
  } else {
    t["precision"] = c.absolute_precision();
  }
  return t;
}

oj series_json(const LaurentSeries& s) {
  oj out;
  oj terms = oj::array();
  const auto& cs = s.dense_coefficients();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].is_exact_zero()) continue;
    terms.push_back(coefficient_json(s.order() + static_cast<std::int64_t>(i), cs[i]));
  }
  out["terms"] = std::move(terms);
  if (s.is_bounded()) {
    out["window_hi"] = s.hi();
  } else {
    out["window_hi"] = "unbounded";
  }
  return out;
}

oj matrix_series_json(const MatrixSeries& m) {
  oj rows = oj::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    oj row = oj::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(series_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

oj matrix_json(const MatrixQ& a) {
  oj rows = oj::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    oj row = oj::array();
    for (std::size_t j = 0; j < a.size(); ++j) row.push_back(a(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* kind_name(ErrorKind k) { return to_string(k); }

// ---------------------------------------------------------------------------

struct Resolved {
  SystemDocument doc;
  CohomologyReport coh;
  ConditionReport cond;
  Precision prec;
  std::string x_source, m_source;
  std::optional<std::int64_t> q;
  std::string q_source;
};

Resolved resolve(const std::string& text, const RunOptions& opts) {
  Resolved r;
  r.doc = parse_document(text);
  const auto& sys = r.doc.system;
  require_valid(sys);
  r.coh = cohomology_report(sys);
  r.cond = full_condition_report(sys, r.doc.prime);
  const std::int64_t p = r.doc.prime.value();
  if (r.doc.frobenius && r.doc.frobenius->q) {
    r.q = *r.doc.frobenius->q;
    r.q_source = "document";
  } else if (r.doc.frobenius && r.doc.frobenius->f) {
    const Integer q = ipow(p, *r.doc.frobenius->f);
    if (!q.fits_slong_p() || q > kMaxWindow) fail(ErrorKind::precision, "q = p^f is too large for a local construction");
    r.q = q.get_si();
    r.q_source = "document";
  } else if (r.cond.q) {
    if (!r.cond.q->fits_slong_p() || *r.cond.q > kMaxWindow)
      fail(ErrorKind::precision, "minimal q = " + r.cond.q->get_str() + " is too large for a local construction");
    r.q = r.cond.q->get_si();
    r.q_source = "minimal";
  }
  if (opts.p_digits) {
    r.prec.p_digits = *opts.p_digits;
    r.m_source = "flag";
  } else if (r.doc.p_digits) {
    r.prec.p_digits = *r.doc.p_digits;
    r.m_source = "document";
  } else {
    r.prec.p_digits = kDefaultPDigits;
    r.m_source = "default";
  }
  if (opts.x_window) {
    r.prec.x_window = *opts.x_window;
    r.x_source = "flag";
  } else if (r.doc.x_window) {
    r.prec.x_window = *r.doc.x_window;
    r.x_source = "document";
  } else if (r.q) {
    Rational spread(0);
    for (const auto& l : sys.locals) {
      const auto ev = l.jordan.eigenvalues();
      const auto [lo, hi] = std::minmax_element(ev.begin(), ev.end());
      if (lo != ev.end()) spread = std::max(spread, *hi - *lo);
    }
    r.prec.x_window = default_x_window(*r.q, sys.rank, spread);
    r.x_source = "default (2 q n + (q - 1) spread)";
  } else {
    r.prec.x_window = kDefaultXWindow;
    r.x_source = "default";
  }
  if (r.prec.x_window > kMaxWindow) fail(ErrorKind::precision, "x-window " + std::to_string(r.prec.x_window) + " is too large");
  return r;
}

FrobLift make_lift(const Resolved& r) {
  const Prime p = r.doc.prime;
  std::vector<std::pair<std::int64_t, Rational>> terms;
  if (r.doc.frobenius) terms = r.doc.frobenius->h_terms;
  bool has_constant = false;
  std::int64_t top = 1;
  for (const auto& [e, c] : terms) {
    has_constant |= e == 0;
    top = std::max(top, e + 1);
  }
  std::vector<PadicNumber> cs(static_cast<std::size_t>(top), PadicNumber::exact_zero(p));
  if (!has_constant) cs[0] = PadicNumber::exact(Rational(1), p);
  for (const auto& [e, c] : terms) cs[static_cast<std::size_t>(e)] = PadicNumber::exact(c, p);
  return FrobLift(p, *r.q, LaurentSeries::from_coefficients(p, r.prec.p_digits, 0, std::move(cs), kUnbounded));
}

oj lift_json(const FrobLift& lift, const std::string& q_source) {
  oj out;
  out["q"] = lift.q();
  out["q_source"] = q_source;
  out["h"] = series_json(lift.h());
  out["standard"] = lift.is_standard();
  return out;
}

struct PointRun {
  SingularPoint point = SingularPoint::infinity();
  std::optional<MatrixQ> a;
  std::string a_source;
  std::optional<BaseChangeResult> first;
  std::optional<BaseChangeResult> result;
  std::optional<ErrorKind> error;
  std::string message;

  bool verified() const { return result && result->verified; }
};

PointRun run_point(const Resolved& r, std::size_t index, const FrobLift& lift, Method method) {
  PointRun run;
  const auto& sys = r.doc.system;
  run.point = sys.locals[index].point;
  try {
    const auto residue = sys.residue_at(index);
    bool integral = residue.has_value();
    if (residue)
      for (const auto& x : residue->entries()) integral = integral && is_p_integral(x, r.doc.prime);
    if (integral) {
      run.a = *residue;
      run.a_source = run.point.is_infinity() ? "implied residue" : "residue";
    } else {
      run.a = sys.locals[index].jordan.matrix();
      run.a_source = "Jordan normal form of the exponents";
    }
    const LocalModule m(r.doc.prime, *run.a);
    run.result = frobenius_structure_local(m, lift, method, r.prec, &run.first);
  } catch (const Error& e) {
    run.error = e.kind();
    run.message = e.what();
  }
  return run;
}

std::vector<PointRun> run_points(const Resolved& r, const std::vector<std::size_t>& indices, const FrobLift& lift,
                                 Method method) {
  std::vector<std::future<PointRun>> jobs;
  for (const std::size_t i : indices)
    jobs.push_back(std::async(std::launch::async, [&r, i, &lift, method] { return run_point(r, i, lift, method); }));
  std::vector<PointRun> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

oj base_change_json(const BaseChangeResult& b, bool with_gauge) {
  oj out;
  out["verified"] = b.verified;
  out["residual_valuation"] = valuation_json(b.residual_valuation, b.residual_exact);
  out["threshold"] = b.threshold;
  out["window_checked"] = oj::array({b.window_lo, b.window_hi});
  out["inverse_valuation"] = valuation_json(b.inverse_valuation, false);
  out["convergence_proven"] = b.convergence_proven;
  if (b.composition_loss) out["composition_loss"] = *b.composition_loss;
  out["notes"] = b.notes;
  if (with_gauge) out["gauge"] = matrix_series_json(b.gauge);
  return out;
}

oj point_run_json(const PointRun& run, bool with_gauge) {
  oj out;
  out["point"] = run.point.to_string();
  if (run.a) {
    out["A"] = matrix_json(*run.a);
    out["A_source"] = run.a_source;
  }
  if (run.error) {
    out["status"] = "error";
    out["error"] = {{"kind", kind_name(*run.error)}, {"message", run.message}};
    return out;
  }
  out["status"] = run.result->verified ? "verified" : "unverified";
  out["result"] = base_change_json(*run.result, with_gauge);
  if (run.first) out["first_step"] = base_change_json(*run.first, with_gauge);
  return out;
}

oj cohomology_json(const FuchsianSystem& sys, const CohomologyReport& c) {
  oj out;
  out["chi_c"] = c.chi_c;
  out["chi_p"] = c.chi_p;
  oj local = oj::array();
  for (std::size_t i = 0; i < sys.locals.size(); ++i)
    local.push_back({{"point", sys.locals[i].point.to_string()},
                     {"jordan", sys.locals[i].jordan.to_string()},
                     {"h0_end", c.local_h0[i]},
                     {"h0_self", c.local_h0_self[i]},
                     {"resonant", c.resonance_flags[i]}});
  out["local_h0"] = std::move(local);
  out["chi_c_self"] = c.chi_c_self;
  out["chi_p_self"] = c.chi_p_self;
  out["rigidity_index"] = c.rigidity_index;
  if (c.h1p_end) {
    out["h1p_end"] = *c.h1p_end;
  } else {
    out["h1p_end"] = nullptr;
  }
  out["rigid"] = c.rigid;
  out["irreducible_asserted"] = sys.irreducible;
  oj notes = oj::array();
  notes.push_back("chi_p is simultaneously the classical and the p-adic value under C1-C3");
  if (!sys.irreducible) notes.push_back("irreducibility not asserted: accessory parameters undefined");
  else if (!c.h1p_end) notes.push_back("rigidity index is impossible for an irreducible system: the assertion is inconsistent");
  out["notes"] = std::move(notes);
  return out;
}

oj conditions_json(const ConditionReport& c) {
  oj out;
  out["prime"] = c.prime.value();
  out["c1"] = c.c1.pass ? "pass" : "fail";
  out["c2"] = c.c2_asserted ? "asserted" : "not-asserted";
  out["c3"] = c.c3.pass ? "pass" : "fail";
  out["c4"] = c.c4 ? "pass" : "fail";
  out["N"] = integer_json(c.N);
  if (c.f) {
    out["f"] = *c.f;
  } else {
    out["f"] = nullptr;
  }
  if (c.q) {
    out["q"] = integer_json(*c.q);
  } else {
    out["q"] = nullptr;
  }
  out["method1_available"] = c.method1_available;
  oj w = oj::array();
  for (const auto& [a, b] : c.c1.witnesses)
    w.push_back({{"condition", "c1"}, {"points", oj::array({a.to_string(), b.to_string()})}});
  for (const auto& o : c.c3.offending)
    w.push_back({{"condition", "c3"}, {"point", o.point.to_string()}, {"difference", o.difference.to_string()}});
  out["witnesses"] = std::move(w);
  out["notes"] = c.notes;
  return out;
}

oj precision_json(const Resolved& r) {
  return {{"x_window", r.prec.x_window},
          {"x_window_source", r.x_source},
          {"p_digits", r.prec.p_digits},
          {"p_digits_source", r.m_source},
          {"verification_threshold", verification_threshold(r.doc.prime, r.prec)}};
}

oj input_json(const Resolved& r) {
  oj pts = oj::array();
  for (const auto& l : r.doc.system.locals) pts.push_back({{"point", l.point.to_string()}, {"jordan", l.jordan.to_string()}});
  return {{"rank", r.doc.system.rank},
          {"prime", r.doc.prime.value()},
          {"points", std::move(pts)},
          {"residues_given", r.doc.system.residues.has_value()}};
}

// ---------------------------------------------------------------------------
// Text rendering

class TextOut {
 public:
  void section(const std::string& title) {
    if (!first_) os_ << '\n';
    first_ = false;
    os_ << title << '\n';
  }
  void row(const std::string& key, const std::string& value) {
    os_ << "  " << std::left << std::setw(24) << key << value << '\n';
  }
  void line(const std::string& text) { os_ << "  " << text << '\n'; }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  bool first_ = true;
};

std::string text_value(const oj& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

void render_conditions(TextOut& t, const oj& c) {
  t.section("conditions");
  for (const char* k : {"prime", "c1", "c2", "c3", "c4", "N", "f", "q", "method1_available"}) t.row(k, text_value(c[k]));
  for (const auto& w : c["witnesses"]) {
    if (w["condition"] == "c1") {
      t.row("witness c1", w["points"][0].get<std::string>() + " ~ " + w["points"][1].get<std::string>());
    } else {
      t.row("witness c3", "at " + w["point"].get<std::string>() + ": difference " + w["difference"].get<std::string>());
    }
  }
  for (const auto& n : c["notes"]) t.line("note: " + n.get<std::string>());
}

void render_cohomology(TextOut& t, const oj& c) {
  t.section("cohomology");
  for (const char* k : {"chi_c", "chi_p", "chi_c_self", "chi_p_self", "rigidity_index", "h1p_end", "rigid",
                        "irreducible_asserted"})
    t.row(k, text_value(c[k]));
  for (const auto& l : c["local_h0"])
    t.row("h0 at " + l["point"].get<std::string>(),
          "End " + text_value(l["h0_end"]) + ", self " + text_value(l["h0_self"]) + ", " + l["jordan"].get<std::string>() +
              (l["resonant"].get<bool>() ? ", resonant" : ""));
  for (const auto& n : c["notes"]) t.line("note: " + n.get<std::string>());
}

void render_precision(TextOut& t, const oj& p) {
  t.section("precision");
  t.row("x_window", text_value(p["x_window"]) + " (" + p["x_window_source"].get<std::string>() + ")");
  t.row("p_digits", text_value(p["p_digits"]) + " (" + p["p_digits_source"].get<std::string>() + ")");
  t.row("verification_threshold", text_value(p["verification_threshold"]));
}

void render_point(TextOut& t, const oj& pt, const PointRun* run) {
  t.row("point " + pt["point"].get<std::string>(), pt["status"].get<std::string>());
  if (pt.contains("error")) {
    t.line("  " + pt["error"]["kind"].get<std::string>() + ": " + pt["error"]["message"].get<std::string>());
    return;
  }
  const auto& r = pt["result"];
  t.line("  residual valuation " + text_value(r["residual_valuation"]) + " (threshold " + text_value(r["threshold"]) +
         "), window [" + text_value(r["window_checked"][0]) + ", " + text_value(r["window_checked"][1]) + ")");
  t.line("  convergence " + std::string(r["convergence_proven"].get<bool>() ? "proven" : "flagged, not proven"));
  for (const auto& n : r["notes"]) t.line("  note: " + n.get<std::string>());
  if (run && run->result) t.line("  gauge " + run->result->gauge.to_string());
}

int max_exit(int a, int b) {
  auto rank = [](int c) { return c == kExitPrecision ? 3 : c == kExitInput ? 2 : c == kExitCondition ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

int point_exit(const PointRun& run) {
  if (run.error) return exit_code_for(*run.error);
  if (!run.verified()) return kExitPrecision;
  return kExitOk;
}

template <class F>
CommandResult guarded(F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {exit_code_for(e.kind()), "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kExitInput, "", std::string("error: ") + e.what() + "\n"};
  }
}

std::string emit(const oj& out, bool json, const std::string& text) { return json ? out.dump(2) + "\n" : text; }

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return kExitInput;
    case ErrorKind::precision:
    case ErrorKind::convergence: return kExitPrecision;
    case ErrorKind::condition: return kExitCondition;
    case ErrorKind::inconsistency: return kExitInput;
  }
  return kExitInput;
}

CommandResult cmd_analyze(const std::string& document_text, const RunOptions& opts) {
  return guarded([&]() -> CommandResult {
    const Resolved r = resolve(document_text, opts);
    const auto& sys = r.doc.system;
    oj out;
    out["schema"] = kSchema;
    out["command"] = "analyze";
    out["input"] = input_json(r);
    out["precision"] = precision_json(r);
    out["cohomology"] = cohomology_json(sys, r.coh);
    out["conditions"] = conditions_json(r.cond);

    const bool rigid = r.coh.rigidity_index == 2;
    const bool conditions_ok = r.cond.all_pass() && r.cond.q.has_value();
    std::vector<PointRun> runs;
    oj fr;
    fr["method"] = to_string(opts.method);
    int exit = kExitOk;
    std::string verdict, note;
    if (rigid && sys.irreducible && conditions_ok && r.q) {
      const FrobLift lift = make_lift(r);
      fr["performed"] = true;
      fr["lift"] = lift_json(lift, r.q_source);
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < sys.locals.size(); ++i) idx.push_back(i);
      runs = run_points(r, idx, lift, opts.method);
      oj pts = oj::array();
      bool all = true;
      for (const auto& run : runs) {
        pts.push_back(point_run_json(run, true));
        all = all && run.verified();
        exit = max_exit(exit, point_exit(run));
      }
      fr["points"] = std::move(pts);
      if (all) {
        verdict = "rigid-with-frobenius-structure";
        note = "rigid, C1-C4 hold (C2 asserted), and a local Frobenius isomorphism phi^*M_A -> M_A is verified at every "
               "singular point; by the local-to-global principle for rigid systems this gives a q-power Frobenius "
               "structure (no global gauge is constructed)";
      } else {
        verdict = "indeterminate";
        note = "rigid and the conditions hold, but some local Frobenius isomorphism could not be verified";
      }
    } else {
      fr["performed"] = false;
      if (!rigid) {
        verdict = "not-rigid";
        note = "rigidity index " + std::to_string(r.coh.rigidity_index) + " != 2";
      } else if (!sys.irreducible) {
        verdict = "indeterminate";
        note = "rigidity index is 2 but irreducibility is not asserted";
      } else {
        verdict = "rigid-conditions-failed";
        note = "rigid, but the hypotheses for a Frobenius structure fail:";
        if (!r.cond.c1.pass) note += " C1";
        if (!r.cond.c2_asserted) note += " C2 (not asserted)";
        if (!r.cond.c3.pass) note += " C3";
        if (r.cond.c1.pass && r.cond.c3.pass && r.cond.c2_asserted && !r.cond.q) note += " ramified denominator";
      }
      fr["reason"] = note;
    }
    out["frobenius"] = std::move(fr);
    out["verdict"] = verdict;
    out["verdict_note"] = note;
    if (exit == kExitOk && opts.strict && !(r.cond.all_pass() && r.cond.q)) exit = kExitCondition;

    TextOut t;
    t.section("analysis");
    t.row("verdict", verdict);
    t.line(note);
    render_precision(t, out["precision"]);
    render_cohomology(t, out["cohomology"]);
    render_conditions(t, out["conditions"]);
    if (!runs.empty()) {
      t.section("frobenius (method " + std::string(to_string(opts.method)) + ", q = " + std::to_string(*r.q) + ")");
      for (std::size_t i = 0; i < runs.size(); ++i) render_point(t, out["frobenius"]["points"][i], nullptr);
    }
    std::string diag;
    for (const auto& run : runs)
      if (run.error) diag += "error at " + run.point.to_string() + ": " + run.message + "\n";
    return {exit, emit(out, opts.json, t.str()), diag};
  });
}

CommandResult cmd_conditions(const std::string& document_text, const RunOptions& opts) {
  return guarded([&]() -> CommandResult {
    const Resolved r = resolve(document_text, opts);
    oj out;
    out["schema"] = kSchema;
    out["command"] = "conditions";
    out["input"] = input_json(r);
    out["conditions"] = conditions_json(r.cond);
    TextOut t;
    render_conditions(t, out["conditions"]);
    const bool ok = r.cond.all_pass() && r.cond.q.has_value();
    return {opts.strict && !ok ? kExitCondition : kExitOk, emit(out, opts.json, t.str()), ""};
  });
}

CommandResult cmd_frobenius(const std::string& document_text, const RunOptions& opts) {
  return guarded([&]() -> CommandResult {
    const Resolved r = resolve(document_text, opts);
    const auto& sys = r.doc.system;
    std::vector<std::size_t> idx;
    if (opts.point) {
      const SingularPoint want = SingularPoint::parse(*opts.point);
      for (std::size_t i = 0; i < sys.locals.size(); ++i)
        if (sys.locals[i].point == want) idx.push_back(i);
      if (idx.empty()) fail(ErrorKind::input, "point not found: " + *opts.point);
    } else {
      for (std::size_t i = 0; i < sys.locals.size(); ++i) idx.push_back(i);
    }
    if (!r.q)
      fail(ErrorKind::condition, "no Frobenius power q: the conditions fail and the document gives neither f nor q");
    const FrobLift lift = make_lift(r);
    const auto runs = run_points(r, idx, lift, opts.method);
    oj out;
    out["schema"] = kSchema;
    out["command"] = "frobenius";
    out["prime"] = r.doc.prime.value();
    out["method"] = to_string(opts.method);
    out["lift"] = lift_json(lift, r.q_source);
    out["precision"] = precision_json(r);
    oj pts = oj::array();
    int exit = kExitOk;
    for (const auto& run : runs) {
      pts.push_back(point_run_json(run, true));
      exit = max_exit(exit, point_exit(run));
    }
    out["points"] = std::move(pts);
    TextOut t;
    render_precision(t, out["precision"]);
    t.section("frobenius (method " + std::string(to_string(opts.method)) + ", q = " + std::to_string(*r.q) + ")");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      render_point(t, out["points"][i], &runs[i]);
      if (runs[i].first) t.line("  first step gauge " + runs[i].first->gauge.to_string());
    }
    std::string diag;
    for (const auto& run : runs) {
      if (!run.error) continue;
      diag += "error at " + run.point.to_string() + ": " + run.message + "\n";
    }
    return {exit, emit(out, opts.json, t.str()), diag};
  });
}

}  // namespace padrig
