// zhom: command-line front end for the library.
//
//   zhom validate|resolve|check|duality|export <file | --builtin name [arg]> [flags]
//
// Exit codes: 0 success, 1 computational failure or unmet precondition,
// 2 validation failure (or an unmatched duality table), 3 parse error,
// 4 I/O error. Verdicts such as "Fail" are data, not failures.

#include "zhom/io.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace zhom;

enum Exit { kOk = 0, kFailure = 1, kInvalid = 2, kParse = 3, kIo = 4 };

struct Source {
  std::string file;
  std::vector<std::string> builtin;
  int lo = -2;
  int hi = 14;
  int guard = 2;
  std::string field = "Q";
};

struct Options {
  Source src;
  bool json = false;
  std::string module;
  int max_length = 8;
  bool as = false;
  bool asf = false;
  bool all = false;
};

void add_source(CLI::App *cmd, Options &o) {
  cmd->add_option("file", o.src.file, "Algebra file (JSON)");
  cmd->add_option("--builtin", o.src.builtin, "Built-in algebra: trivial | poly N | skew Q | nil")->expected(1, 2);
  cmd->add_option("--lo", o.src.lo, "Window bottom for built-ins")->capture_default_str();
  cmd->add_option("--hi", o.src.hi, "Window top for built-ins")->capture_default_str();
  cmd->add_option("--guard", o.src.guard, "Guard width for built-ins")->capture_default_str();
  cmd->add_option("--field", o.src.field, "Field for built-ins: Q or an odd prime p")->capture_default_str();
  cmd->add_flag("--json", o.json, "Machine-readable output on stdout");
}

AlgebraPtr load(const Source &s) {
  if (!s.file.empty() && !s.builtin.empty()) throw ParseError("give either a file or --builtin, not both", 0, 0);
  if (!s.file.empty()) return load_algebra(s.file);
  if (s.builtin.empty()) throw ParseError("no algebra given: pass a file or --builtin", 0, 0);
  BuiltinSpec spec;
  spec.name = s.builtin[0];
  if (s.builtin.size() > 1) {
    if (spec.name == "poly") {
      try {
        spec.n = std::stoi(s.builtin[1]);
      } catch (const std::exception &) {
        throw ParseError("poly expects an integer argument", 0, 0);
      }
    } else {
      spec.q = s.builtin[1];
    }
  } else if (spec.name == "poly") {
    spec.n = 1;
  }
  Field f = Field::rationals();
  if (s.field != "Q") {
    try {
      f = Field::prime(std::stoull(s.field));
    } catch (const std::invalid_argument &) {
      throw ParseError("--field expects Q or an odd prime", 0, 0);
    }
  }
  return make_builtin(spec, Window{s.lo, s.hi, s.guard}, f);
}

void emit(const Options &o, const Json &j, const std::string &text) {
  if (o.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int emit_error(const Options &o, const std::string &kind, const std::string &msg, int code, const Json &extra = {}) {
  if (o.json) {
    Json j{{"error", {{"kind", kind}, {"message", msg}}}};
    if (!extra.is_null()) j["error"].update(extra);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cerr << "zhom: " << kind << ": " << msg << "\n";
  }
  return code;
}

std::string violation_text(const Violation &v) {
  std::ostringstream os;
  os << "  " << v.kind << " at degrees (";
  for (std::size_t i = 0; i < v.degrees.size(); ++i) os << (i ? "," : "") << v.degrees[i];
  os << ") basis (";
  for (std::size_t i = 0; i < v.basis.size(); ++i) os << (i ? "," : "") << v.basis[i];
  os << "): " << v.detail << "\n";
  return os.str();
}

/// Validates the algebra; on violations prints them and returns false.
bool ensure_valid(const Options &o, const ZAlgebra &a, int &code) {
  const ValidationReport rep = validate(a);
  if (rep.ok()) return true;
  std::ostringstream os;
  os << "algebra is invalid (" << rep.violations.size() << " violations)\n";
  for (const auto &v : rep.violations) os << violation_text(v);
  emit(o, Json{{"validation", to_json(rep)}}, os.str());
  code = kInvalid;
  return false;
}

int cmd_validate(const Options &o) {
  const AlgebraPtr a = load(o.src);
  const ValidationReport rep = validate(*a);
  std::ostringstream os;
  if (rep.ok()) {
    os << "valid: " << a->field().name() << ", window [" << a->lo() << ", " << a->hi() << "], guard "
       << a->window().guard << "\n";
  } else {
    os << "invalid: " << rep.violations.size() << " violations\n";
    for (const auto &v : rep.violations) os << violation_text(v);
  }
  emit(o, to_json(rep), os.str());
  return rep.ok() ? kOk : kInvalid;
}

int cmd_resolve(const Options &o) {
  const AlgebraPtr a = load(o.src);
  int code = kOk;
  if (!ensure_valid(o, *a, code)) return code;
  const GradedModule m = module_from_spec(a, o.module);
  const FreeResolution r = minimal_free_resolution(m, o.max_length);
  Json j = to_json(r);
  j["module"] = o.module;
  j["max_length"] = o.max_length;
  emit(o, j, "module " + o.module + "\n" + betti_text(r));
  return kOk;
}

std::string report_text(const std::string &label, const RegularityReport &r) {
  std::ostringstream os;
  os << label << ": " << verdict_text(r) << "  (indices " << r.checked_lo << ".." << r.checked_hi << ")\n";
  if (!r.regular) os << "  witness: " << r.witness << "\n";
  for (const auto &c : r.caveats) os << "  caveat: " << c << "\n";
  if (r.regular && r.kind == RegularityKind::AS) {
    for (const auto &ir : r.indices) {
      os << "  i=" << ir.i << " pd=" << ir.pd.value << " Ext:";
      for (const auto &c : ir.nonzero) os << " (q=" << c.q << ", j=" << c.index << "):" << c.dim;
      os << "\n";
    }
  }
  return os.str();
}

int cmd_check(const Options &o) {
  const AlgebraPtr a = load(o.src);
  int code = kOk;
  if (!ensure_valid(o, *a, code)) return code;
  const bool all = o.all || (!o.as && !o.asf);
  Json j;
  std::string text;
  if (all) {
    const EquivalenceReport e = verify_equivalence_suite(a);
    j = to_json(e);
    text = report_text("AS", e.as) + report_text("ASF", e.asf) + report_text("AS (opposite)", e.as_opposite) +
           report_text("ASF (opposite)", e.asf_opposite);
    text += std::string("agree: ") + (e.agree ? "yes" : "no") + "\n";
    for (const auto &n : e.notes) text += "note: " + n + "\n";
  } else {
    if (o.as) {
      const auto r = check_as_regular(a);
      j["as"] = to_json(r);
      text += report_text("AS", r);
    }
    if (o.asf) {
      const auto r = check_asf_regular(a);
      j["asf"] = to_json(r);
      text += report_text("ASF", r);
    }
  }
  emit(o, j, text);
  return kOk;
}

int cmd_duality(const Options &o) {
  const AlgebraPtr a = load(o.src);
  int code = kOk;
  if (!ensure_valid(o, *a, code)) return code;
  const RegularityReport reg = check_as_regular(a);
  const GradedModule m = module_from_spec(a, o.module);
  const DualityReport rep = verify_local_duality(a, m, reg);
  std::ostringstream os;
  os << "module " << o.module << ", d = " << rep.d << "\n";
  for (int q = 0; q <= rep.d; ++q) {
    os << "q = " << q << " (compared through degree " << rep.compared_hi[static_cast<std::size_t>(q)] << ")\n";
    os << "     i  dim D R^q  dim Ext^" << rep.d - q << "\n";
    for (const auto &c : rep.cells)
      if (c.q == q)
        os << std::setw(6) << c.i << std::setw(11) << c.lhs << std::setw(10) << c.rhs << (c.lhs == c.rhs ? "" : "  *")
           << "\n";
    os << "  module iso: " << (rep.iso[static_cast<std::size_t>(q)] ? "Iso" : "NotIso") << "\n";
  }
  for (const auto &c : rep.caveats) os << "caveat: " << c << "\n";
  os << (rep.matched() ? "matched\n" : "NOT matched\n");
  Json j = to_json(rep);
  j["module"] = o.module;
  emit(o, j, os.str());
  return rep.matched() ? kOk : kInvalid;
}

int cmd_export(const Options &o) {
  const AlgebraPtr a = load(o.src);
  std::cout << algebra_to_json(*a).dump(o.json ? 2 : -1) << "\n";
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact homological algebra over connected Z-algebras on finite windows"};
  app.require_subcommand(1);
  Options o;
  auto *val = app.add_subcommand("validate", "Check the algebra axioms");
  auto *res = app.add_subcommand("resolve", "Minimal free resolution and Betti table of a module");
  auto *chk = app.add_subcommand("check", "AS / ASF regularity checks");
  auto *dua = app.add_subcommand("duality", "Verify local duality for a module");
  auto *exp = app.add_subcommand("export", "Print the algebra as structure constants (JSON)");
  for (auto *c : {val, res, chk, dua, exp}) add_source(c, o);
  res->add_option("--module", o.module, "e_iA | e_iA0 | Ae_j | A0e_j | e_i(A/A>=n) | e_iA>=n | @file")
      ->default_val("e_0A0");
  res->add_option("--max-length", o.max_length, "Resolution length limit")->capture_default_str();
  dua->add_option("--module", o.module, "Right module: e_iA | e_iA0 | e_i(A/A>=n) | e_iA>=n | @file")
      ->default_val("e_0A");
  chk->add_flag("--as", o.as, "Run the AS check");
  chk->add_flag("--asf", o.asf, "Run the ASF check");
  chk->add_flag("--all", o.all, "Run both checks on the algebra and its opposite (default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    if (val->parsed()) return cmd_validate(o);
    if (res->parsed()) return cmd_resolve(o);
    if (chk->parsed()) return cmd_check(o);
    if (exp->parsed()) return cmd_export(o);
    return cmd_duality(o);
  } catch (const ParseError &e) {
    Json where{{"line", e.line()}, {"column", e.column()}};
    if (!e.pointer().empty()) where["pointer"] = e.pointer();
    return emit_error(o, "ParseError", e.what(), kParse, where);
  } catch (const IoError &e) {
    return emit_error(o, "IoError", e.what(), kIo);
  } catch (const WindowTooSmall &e) {
    return emit_error(o, "WindowTooSmall", e.what(), kFailure);
  } catch (const NotLeftBounded &e) {
    return emit_error(o, "NotLeftBounded", e.what(), kFailure);
  } catch (const RequiresRegular &e) {
    return emit_error(o, "RequiresRegular", e.what(), kFailure);
  } catch (const Error &e) {
    return emit_error(o, "Error", e.what(), kFailure);
  }
}
