#include "zhom/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

namespace zhom {

ParseError::ParseError(const std::string &msg, int line, int column, std::string pointer)
    : Error(msg), line_(line), column_(column), pointer_(std::move(pointer)) {}

namespace {

[[noreturn]] void schema_error(const std::string &pointer, const std::string &what) {
  throw ParseError(pointer + ": " + what, 0, 0, pointer);
}

const Json &require(const Json &obj, const std::string &key, const std::string &at) {
  if (!obj.is_object()) schema_error(at, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(at, "missing field \"" + key + "\"");
  return *it;
}

long long as_int(const Json &v, const std::string &at) {
  if (!v.is_number_integer()) schema_error(at, "expected an integer");
  return v.get<long long>();
}

std::size_t as_count(const Json &v, const std::string &at) {
  const long long x = as_int(v, at);
  if (x < 0) schema_error(at, "expected a nonnegative integer");
  return static_cast<std::size_t>(x);
}

bool as_bool(const Json &v, const std::string &at) {
  if (!v.is_boolean()) schema_error(at, "expected a boolean");
  return v.get<bool>();
}

const Json &as_array(const Json &v, const std::string &at) {
  if (!v.is_array()) schema_error(at, "expected an array");
  return v;
}

Scalar as_scalar(const Field &f, const Json &v, const std::string &at) {
  try {
    if (v.is_number_integer()) return f.from_int(v.get<long long>());
    if (v.is_string()) return f.parse(v.get<std::string>());
  } catch (const Error &e) {
    schema_error(at, e.what());
  }
  schema_error(at, "expected an integer or a rational string");
}

std::string at_index(const std::string &base, std::size_t i) { return base + "/" + std::to_string(i); }

Field field_from_json(const Json &v) {
  if (v.is_string() && v.get<std::string>() == "Q") return Field::rationals();
  if (v.is_object() && v.contains("GFp")) {
    const long long p = as_int(v["GFp"], "/field/GFp");
    if (p <= 2) schema_error("/field/GFp", "expected an odd prime");
    try {
      return Field::prime(static_cast<std::uint64_t>(p));
    } catch (const Error &e) {
      schema_error("/field/GFp", e.what());
    }
  }
  schema_error("/field", "expected \"Q\" or {\"GFp\": p}");
}

Window window_from_json(const Json &v) {
  Window w;
  w.lo = static_cast<int>(as_int(require(v, "lo", "/window"), "/window/lo"));
  w.hi = static_cast<int>(as_int(require(v, "hi", "/window"), "/window/hi"));
  if (v.contains("guard")) w.guard = static_cast<int>(as_int(v["guard"], "/window/guard"));
  try {
    w.check();
  } catch (const Error &e) {
    schema_error("/window", e.what());
  }
  return w;
}

BuiltinSpec builtin_from_json(const Json &v) {
  BuiltinSpec s;
  const Json &name = require(v, "name", "/builtin");
  if (!name.is_string()) schema_error("/builtin/name", "expected a string");
  s.name = name.get<std::string>();
  if (v.contains("n")) s.n = static_cast<int>(as_int(v["n"], "/builtin/n"));
  if (v.contains("q")) {
    const Json &q = v["q"];
    if (q.is_number_integer())
      s.q = std::to_string(q.get<long long>());
    else if (q.is_string())
      s.q = q.get<std::string>();
    else
      schema_error("/builtin/q", "expected an integer or a rational string");
  }
  return s;
}

AlgebraPtr structure_constants(const Json &doc, const Field &f, const Window &w) {
  const auto width = static_cast<std::size_t>(w.width());
  std::vector<std::size_t> dims(width * width, 0);
  auto pair = [&](int i, int j) {
    return static_cast<std::size_t>(i - w.lo) * width + static_cast<std::size_t>(j - w.lo);
  };
  auto in_window = [&](long long d, const std::string &at) {
    if (d < w.lo || d > w.hi) schema_error(at, "degree outside the window");
    return static_cast<int>(d);
  };
  const Json &dlist = as_array(require(doc, "dims", ""), "/dims");
  for (std::size_t e = 0; e < dlist.size(); ++e) {
    const std::string at = at_index("/dims", e);
    const Json &row = as_array(dlist[e], at);
    if (row.size() != 3) schema_error(at, "expected [i, j, dim]");
    const int i = in_window(as_int(row[0], at + "/0"), at + "/0");
    const int j = in_window(as_int(row[1], at + "/1"), at + "/1");
    dims[pair(i, j)] = as_count(row[2], at + "/2");
  }
  ZAlgebra::Data data = ZAlgebra::blank(f, w, dims);
  const Json &mlist = as_array(require(doc, "mult", ""), "/mult");
  for (std::size_t e = 0; e < mlist.size(); ++e) {
    const std::string at = at_index("/mult", e);
    const Json &row = as_array(mlist[e], at);
    if (row.size() != 7) schema_error(at, "expected [i, j, k, s, t, u, coefficient]");
    const int i = in_window(as_int(row[0], at + "/0"), at + "/0");
    const int j = in_window(as_int(row[1], at + "/1"), at + "/1");
    const int k = in_window(as_int(row[2], at + "/2"), at + "/2");
    if (i > j || j > k) schema_error(at, "product indices must satisfy i <= j <= k");
    MultTensor &t = data.mult[pair(i, j) * width + static_cast<std::size_t>(k - w.lo)];
    const std::size_t s = as_count(row[3], at + "/3"), u = as_count(row[4], at + "/4"),
                      o = as_count(row[5], at + "/5");
    if (s >= t.left || u >= t.right || o >= t.out) schema_error(at, "basis index out of range");
    t.at(s, u).set(static_cast<std::uint32_t>(o), as_scalar(f, row[6], at + "/6"));
  }
  return ZAlgebra::create(std::move(data));
}

std::vector<std::vector<Scalar>> relation_vectors(const Json &v, const Field &f, const std::string &at) {
  std::vector<std::vector<Scalar>> out;
  const Json &list = as_array(v, at);
  for (std::size_t r = 0; r < list.size(); ++r) {
    const Json &vec = as_array(list[r], at_index(at, r));
    std::vector<Scalar> coords;
    for (std::size_t c = 0; c < vec.size(); ++c) coords.push_back(as_scalar(f, vec[c], at_index(at_index(at, r), c)));
    out.push_back(std::move(coords));
  }
  return out;
}

AlgebraPtr adjacent(const Json &doc, const Field &f, const Window &w) {
  std::map<int, std::size_t> gens;
  std::vector<RelationSpace> rels;
  if (doc.contains("uniform")) {
    // Translation-invariant presentation: the same generator count and
    // relation vectors at every degree of the window.
    const Json &u = doc["uniform"];
    const std::size_t g = as_count(require(u, "generators", "/uniform"), "/uniform/generators");
    for (int i = w.lo; i < w.hi; ++i) gens[i] = g;
    if (u.contains("relations")) {
      const Json &list = as_array(u["relations"], "/uniform/relations");
      for (std::size_t r = 0; r < list.size(); ++r) {
        const std::string at = at_index("/uniform/relations", r);
        const int len = static_cast<int>(as_int(require(list[r], "length", at), at + "/length"));
        auto vecs = relation_vectors(require(list[r], "vectors", at), f, at + "/vectors");
        for (int i = w.lo; i + len <= w.hi; ++i) rels.push_back({i, i + len, vecs});
      }
    }
  } else {
    const Json &list = as_array(require(doc, "generators", ""), "/generators");
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string at = at_index("/generators", e);
      const Json &row = as_array(list[e], at);
      if (row.size() != 2) schema_error(at, "expected [degree, dim]");
      gens[static_cast<int>(as_int(row[0], at + "/0"))] = as_count(row[1], at + "/1");
    }
    if (doc.contains("relations")) {
      const Json &rl = as_array(doc["relations"], "/relations");
      for (std::size_t r = 0; r < rl.size(); ++r) {
        const std::string at = at_index("/relations", r);
        RelationSpace rs;
        rs.from = static_cast<int>(as_int(require(rl[r], "from", at), at + "/from"));
        rs.to = static_cast<int>(as_int(require(rl[r], "to", at), at + "/to"));
        rs.vectors = relation_vectors(require(rl[r], "vectors", at), f, at + "/vectors");
        rels.push_back(std::move(rs));
      }
    }
  }
  try {
    return make_adjacent_presentation(gens, rels, w, f);
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    schema_error("/relations", e.what());
  }
}

Json json_scalar(const Scalar &s) {
  // Integers stay numbers; fractions become strings so nothing is rounded.
  const std::string text = s.to_string();
  if (text.find('/') == std::string::npos && text.size() < 18) return std::stoll(text);
  return text;
}

Json matrix_entries(const SparseMatrix &m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto &[c, v] : m.row(r)) out.push_back(Json::array({r, c, json_scalar(v)}));
  return out;
}

Json pd_json(const ProjectiveDimension &pd) { return Json{{"exact", pd.exact}, {"value", pd.value}}; }

} // namespace

AlgebraPtr make_builtin(const BuiltinSpec &spec, const Window &w, const Field &f) {
  if (spec.name == "trivial" || spec.name == "K") return make_trivial(w, f);
  if (spec.name == "poly") {
    if (spec.n < 0) throw Error("poly needs n >= 0");
    return make_poly(spec.n, w, f);
  }
  if (spec.name == "skew") return make_skew(f.parse(spec.q), w);
  if (spec.name == "nil") return make_nil(w, f);
  throw Error("unknown builtin \"" + spec.name + "\" (expected trivial, poly, skew or nil)");
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return os.str();
}

Json parse_json(const std::string &text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    // e.byte is the 1-based offset of the offending character.
    int line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": " << e.what();
    throw ParseError(os.str(), line, column);
  }
}

AlgebraPtr algebra_from_json(const Json &doc) {
  if (!doc.is_object()) schema_error("", "expected an object");
  const long long version = as_int(require(doc, "schemaVersion", ""), "/schemaVersion");
  if (version != kSchemaVersion) schema_error("/schemaVersion", "unsupported schema version " + std::to_string(version));
  const Field f = doc.contains("field") ? field_from_json(doc["field"]) : Field::rationals();
  const Window w = window_from_json(require(doc, "window", ""));
  const Json &mode = require(doc, "mode", "");
  if (!mode.is_string()) schema_error("/mode", "expected a string");
  const std::string m = mode.get<std::string>();
  if (m == "structure_constants") return structure_constants(doc, f, w);
  if (m == "adjacent_presentation") return adjacent(doc, f, w);
  if (m == "builtin") {
    try {
      return make_builtin(builtin_from_json(require(doc, "builtin", "")), w, f);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      schema_error("/builtin", e.what());
    }
  }
  schema_error("/mode", "unknown mode \"" + m + "\"");
}

AlgebraPtr load_algebra(const std::string &path) { return algebra_from_json(parse_json(read_file(path))); }

Json to_json(const Field &f) {
  if (f.is_rational()) return "Q";
  return Json{{"GFp", f.characteristic()}};
}

Json to_json(const Window &w) { return Json{{"lo", w.lo}, {"hi", w.hi}, {"guard", w.guard}}; }

Json algebra_to_json(const ZAlgebra &a) {
  Json dims = Json::array(), mult = Json::array();
  const int lo = a.lo(), hi = a.hi();
  for (int i = lo; i <= hi; ++i)
    for (int j = i; j <= hi; ++j)
      if (a.dim(i, j)) dims.push_back(Json::array({i, j, a.dim(i, j)}));
  for (int i = lo; i <= hi; ++i)
    for (int j = i; j <= hi; ++j)
      for (int k = j; k <= hi; ++k) {
        if (!a.dim(i, j) || !a.dim(j, k) || !a.dim(i, k)) continue;
        const MultTensor &t = a.mult(i, j, k);
        for (std::size_t s = 0; s < t.left; ++s)
          for (std::size_t u = 0; u < t.right; ++u)
            for (const auto &[o, c] : t.at(s, u)) mult.push_back(Json::array({i, j, k, s, u, o, json_scalar(c)}));
      }
  return Json{{"schemaVersion", kSchemaVersion},
              {"field", to_json(a.field())},
              {"window", to_json(a.window())},
              {"mode", "structure_constants"},
              {"dims", std::move(dims)},
              {"mult", std::move(mult)}};
}

Json builtin_to_json(const BuiltinSpec &spec, const Window &w, const Field &f) {
  Json b{{"name", spec.name}};
  if (spec.name == "poly") b["n"] = spec.n;
  if (spec.name == "skew") b["q"] = spec.q;
  return Json{{"schemaVersion", kSchemaVersion}, {"field", to_json(f)}, {"window", to_json(w)}, {"mode", "builtin"},
              {"builtin", std::move(b)}};
}

GradedModule module_from_json(const AlgebraPtr &a, const Json &doc) {
  if (!doc.is_object()) schema_error("", "expected an object");
  if (doc.contains("schemaVersion") && as_int(doc["schemaVersion"], "/schemaVersion") != kSchemaVersion)
    schema_error("/schemaVersion", "unsupported schema version");
  Side side = Side::Right;
  if (doc.contains("side")) {
    const Json &s = doc["side"];
    if (s == "right")
      side = Side::Right;
    else if (s == "left")
      side = Side::Left;
    else
      schema_error("/side", "expected \"right\" or \"left\"");
  }
  const int lo = a->lo(), hi = a->hi();
  std::vector<std::size_t> dims(static_cast<std::size_t>(a->window().width()), 0);
  const Json &dl = as_array(require(doc, "dims", ""), "/dims");
  for (std::size_t e = 0; e < dl.size(); ++e) {
    const std::string at = at_index("/dims", e);
    const Json &row = as_array(dl[e], at);
    if (row.size() != 2) schema_error(at, "expected [degree, dim]");
    const long long t = as_int(row[0], at + "/0");
    if (t < lo || t > hi) schema_error(at + "/0", "degree outside the window");
    dims[static_cast<std::size_t>(t - lo)] = as_count(row[1], at + "/1");
  }
  GradedModule m(a, side, dims);
  if (doc.contains("actions")) {
    const Json &al = as_array(doc["actions"], "/actions");
    for (std::size_t e = 0; e < al.size(); ++e) {
      const std::string at = at_index("/actions", e);
      const int j = static_cast<int>(as_int(require(al[e], "from", at), at + "/from"));
      const int k = static_cast<int>(as_int(require(al[e], "to", at), at + "/to"));
      if (j < lo || k > hi || j >= k) schema_error(at, "expected lo <= from < to <= hi");
      const std::size_t s = as_count(require(al[e], "basis", at), at + "/basis");
      if (s >= a->dim(j, k)) schema_error(at + "/basis", "basis index out of range");
      const auto pos = generator_position(*a, j, k, s);
      if (!pos) schema_error(at + "/basis", "not an algebra generator; actions are derived for decomposables");
      SparseMatrix mat = m.zero_action(j, k);
      const Json &entries = as_array(require(al[e], "entries", at), at + "/entries");
      for (std::size_t r = 0; r < entries.size(); ++r) {
        const std::string eat = at_index(at + "/entries", r);
        const Json &ent = as_array(entries[r], eat);
        if (ent.size() != 3) schema_error(eat, "expected [row, column, value]");
        const std::size_t row = as_count(ent[0], eat + "/0"), col = as_count(ent[1], eat + "/1");
        if (row >= mat.rows() || col >= mat.cols()) schema_error(eat, "entry outside the action matrix");
        mat.set(row, col, as_scalar(a->field(), ent[2], eat + "/2"));
      }
      m.set_generator_action(j, k, *pos, std::move(mat));
    }
  }
  if (doc.contains("open_below")) m.flags.open_below = as_bool(doc["open_below"], "/open_below");
  if (doc.contains("open_above")) m.flags.open_above = as_bool(doc["open_above"], "/open_above");
  m.flags.reliable_lo = lo;
  m.flags.reliable_hi = hi;
  if (doc.contains("reliable")) {
    const Json &r = as_array(doc["reliable"], "/reliable");
    if (r.size() != 2) schema_error("/reliable", "expected [lo, hi]");
    m.flags.reliable_lo = static_cast<int>(as_int(r[0], "/reliable/0"));
    m.flags.reliable_hi = static_cast<int>(as_int(r[1], "/reliable/1"));
  }
  return m;
}

Json module_to_json(const GradedModule &m) {
  const ZAlgebra &a = *m.algebra();
  Json dims = Json::array(), actions = Json::array();
  for (int t = m.lo(); t <= m.hi(); ++t)
    if (m.dim(t)) dims.push_back(Json::array({t, m.dim(t)}));
  for (int j = m.lo(); j <= m.hi(); ++j)
    for (int k = j + 1; k <= m.hi(); ++k) {
      if (!m.dim(j) || !m.dim(k) || !a.dim(j, k)) continue;
      for (std::uint32_t s : a.generators(j, k)) {
        const SparseMatrix &mat = m.action(j, k, s);
        if (mat.is_zero()) continue;
        actions.push_back(Json{{"from", j}, {"to", k}, {"basis", s}, {"entries", matrix_entries(mat)}});
      }
    }
  return Json{{"schemaVersion", kSchemaVersion},
              {"side", m.side() == Side::Right ? "right" : "left"},
              {"dims", std::move(dims)},
              {"actions", std::move(actions)},
              {"open_below", m.flags.open_below},
              {"open_above", m.flags.open_above},
              {"reliable", Json::array({m.flags.reliable_lo, m.flags.reliable_hi})}};
}

GradedModule module_from_spec(const AlgebraPtr &a, const std::string &spec) {
  if (!spec.empty() && spec[0] == '@') return module_from_json(a, parse_json(read_file(spec.substr(1))));
  static const std::regex row(R"(e_?(-?\d+)A)"), aug_row(R"(e_?(-?\d+)A_?0)"), col(R"(Ae_?(-?\d+))"),
      aug_col(R"(A_?0e_?(-?\d+))"), quot(R"(e_?(-?\d+)\(A/A(?:>=|≥|_>=|_≥)(\d+)\))"),
      ideal(R"(e_?(-?\d+)A(?:>=|≥|_>=|_≥)(\d+))");
  std::smatch mt;
  auto index = [&](int d) {
    if (!a->window().contains(d)) throw IndexOutsideWindow("module index " + std::to_string(d) + " outside the window");
    return d;
  };
  if (std::regex_match(spec, mt, row)) return free_row(a, index(std::stoi(mt[1])));
  if (std::regex_match(spec, mt, aug_row)) return augmentation(a).row(index(std::stoi(mt[1])));
  if (std::regex_match(spec, mt, col)) return free_col(a, index(std::stoi(mt[1])));
  if (std::regex_match(spec, mt, aug_col)) return augmentation(a).col(index(std::stoi(mt[1])));
  if (std::regex_match(spec, mt, quot)) return quotient_bimodule(a, std::stoi(mt[2])).row(index(std::stoi(mt[1])));
  if (std::regex_match(spec, mt, ideal)) return ideal_bimodule(a, std::stoi(mt[2])).row(index(std::stoi(mt[1])));
  throw ParseError("unrecognized module spec \"" + spec + "\" (expected e_iA, e_iA0, Ae_j, A0e_j, e_i(A/A>=n), e_iA>=n or @file)",
                   0, 0);
}

Json to_json(const ValidationReport &r) {
  Json v = Json::array();
  for (const auto &x : r.violations)
    v.push_back(Json{{"kind", x.kind}, {"degrees", x.degrees}, {"basis", x.basis}, {"detail", x.detail}});
  return Json{{"ok", r.ok()}, {"violations", std::move(v)}};
}

Json to_json(const FreeResolution &r) {
  Json betti = Json::array(), ranks = Json::array();
  for (const auto &[key, n] : r.betti_table()) betti.push_back(Json{{"p", key.first}, {"degree", key.second}, {"rank", n}});
  for (const auto &f : r.free) ranks.push_back(f.rank());
  Json out{{"side", r.flipped ? "left" : "right"},
           {"status", r.status == ResolutionStatus::Terminated ? "Terminated" : "WindowTruncated"},
           {"length", r.length()},
           {"ranks", std::move(ranks)},
           {"betti", std::move(betti)},
           {"kernel_vanished", r.kernel_vanished},
           {"certified_through", r.certified_through},
           {"projective_dimension", pd_json(projective_dimension(r))}};
  if (r.status != ResolutionStatus::Terminated) out["truncated_at"] = r.truncated_at;
  return out;
}

Json to_json(const RegularityReport &r) {
  Json idx = Json::array();
  for (const auto &ir : r.indices) {
    Json cells = Json::array();
    for (const auto &c : ir.nonzero) cells.push_back(Json{{"q", c.q}, {"index", c.index}, {"dim", c.dim}});
    Json e{{"i", ir.i}, {"pd", pd_json(ir.pd)}, {"nonzero", std::move(cells)}};
    if (r.kind == RegularityKind::ASF) e["reliable_hi"] = ir.reliable_hi;
    idx.push_back(std::move(e));
  }
  Json out{{"kind", r.kind == RegularityKind::AS ? "AS" : "ASF"},
           {"regular", r.regular},
           {"verdict", verdict_text(r)},
           {"checked", Json::array({r.checked_lo, r.checked_hi})},
           {"indices", std::move(idx)},
           {"caveats", r.caveats}};
  if (r.regular) {
    out["d"] = r.d;
    out["l"] = r.l;
    out["offset"] = r.offset;
  } else {
    out["witness"] = r.witness;
  }
  return out;
}

Json to_json(const DualityReport &r) {
  Json cells = Json::array();
  for (const auto &c : r.cells) cells.push_back(Json{{"q", c.q}, {"i", c.i}, {"lhs", c.lhs}, {"rhs", c.rhs}});
  Json iso = Json::array();
  for (bool b : r.iso) iso.push_back(b);
  return Json{{"d", r.d},           {"cells", std::move(cells)}, {"compared_hi", r.compared_hi},
              {"iso", std::move(iso)}, {"dims_match", r.dims_match()}, {"matched", r.matched()},
              {"caveats", r.caveats}};
}

Json to_json(const EquivalenceReport &r) {
  return Json{{"as", to_json(r.as)},
              {"asf", to_json(r.asf)},
              {"as_opposite", to_json(r.as_opposite)},
              {"asf_opposite", to_json(r.asf_opposite)},
              {"agree", r.agree},
              {"generator_identity", r.generator_identity},
              {"notes", r.notes}};
}

std::string betti_text(const FreeResolution &r) {
  const auto table = r.betti_table();
  std::ostringstream os;
  os << "status: " << (r.status == ResolutionStatus::Terminated ? "Terminated" : "WindowTruncated");
  if (r.status != ResolutionStatus::Terminated) {
    const auto pd = projective_dimension(r);
    os << " (pd AtLeast(" << pd.value << "))";
  }
  os << "\n";
  if (table.empty()) {
    os << "zero module\n";
    return os.str();
  }
  int dlo = table.begin()->first.second, dhi = dlo;
  for (const auto &[key, n] : table) {
    dlo = std::min(dlo, key.second);
    dhi = std::max(dhi, key.second);
  }
  const int plen = r.length();
  std::vector<std::string> head{""};
  for (int p = 0; p <= plen; ++p) head.push_back(std::to_string(p));
  std::vector<std::vector<std::string>> rows{head};
  std::vector<std::string> total{"total:"};
  for (int p = 0; p <= plen; ++p) total.push_back(std::to_string(r.free[static_cast<std::size_t>(p)].rank()));
  rows.push_back(total);
  for (int d = dlo; d <= dhi; ++d) {
    std::vector<std::string> line{std::to_string(d) + ":"};
    for (int p = 0; p <= plen; ++p) {
      auto it = table.find({p, d});
      line.push_back(it == table.end() ? "." : std::to_string(it->second));
    }
    rows.push_back(line);
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto &row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  for (const auto &row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? " " : "") << std::setw(static_cast<int>(width[c])) << row[c];
    os << "\n";
  }
  return os.str();
}

std::string verdict_text(const RegularityReport &r) {
  if (!r.regular) return "Fail";
  return "Regular(" + std::to_string(r.d) + ", " + std::to_string(r.l) + ")";
}

} // namespace zhom
