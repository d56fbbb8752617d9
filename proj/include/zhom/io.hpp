#pragma once

#include "zhom/regularity.hpp"

#include <json.hpp>

#include <string>

namespace zhom {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or schema-violating input. Syntax errors carry a 1-based line and
/// column; schema errors carry the JSON pointer of the offending value.
class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line, int column, std::string pointer = {});
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string &pointer() const { return pointer_; }

private:
  int line_;
  int column_;
  std::string pointer_;
};

/// The input file could not be read.
class IoError : public Error {
public:
  using Error::Error;
};

/// A built-in algebra: "trivial", "poly" (n), "skew" (q), "nil".
struct BuiltinSpec {
  std::string name;
  int n = 0;
  std::string q = "2";
};

AlgebraPtr make_builtin(const BuiltinSpec &spec, const Window &w, const Field &f = Field::rationals());

std::string read_file(const std::string &path);
/// Parses JSON text, translating syntax errors into located ParseErrors.
Json parse_json(const std::string &text);

/// Builds the algebra described by an algebra file. The result is not
/// validated: structure constants are taken as given.
AlgebraPtr algebra_from_json(const Json &doc);
AlgebraPtr load_algebra(const std::string &path);

/// Structure-constant form of an algebra (mode "structure_constants").
Json algebra_to_json(const ZAlgebra &a);
/// Builtin form (mode "builtin").
Json builtin_to_json(const BuiltinSpec &spec, const Window &w, const Field &f);

/// Right or left module with explicit generator actions.
GradedModule module_from_json(const AlgebraPtr &a, const Json &doc);
Json module_to_json(const GradedModule &m);

/// Module shorthand: e_iA, e_iA0, Ae_j, A0e_j, e_i(A/A>=n), e_iA>=n, or
/// @path to a module file.
GradedModule module_from_spec(const AlgebraPtr &a, const std::string &spec);

Json to_json(const Field &f);
Json to_json(const Window &w);
Json to_json(const ValidationReport &r);
Json to_json(const FreeResolution &r);
Json to_json(const RegularityReport &r);
Json to_json(const DualityReport &r);
Json to_json(const EquivalenceReport &r);

/// Betti table with homological degree across and internal degree down.
std::string betti_text(const FreeResolution &r);
/// "Regular(d, l)" or "Fail".
std::string verdict_text(const RegularityReport &r);

} // namespace zhom
