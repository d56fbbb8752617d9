#pragma once

#include "zhom/derived.hpp"

#include <memory>
#include <string>
#include <vector>

namespace zhom {

/// The interior index range left after the margins is empty.
class WindowTooSmall : public Error {
public:
  using Error::Error;
};
/// A duality computation was requested for an algebra without a Regular verdict.
class RequiresRegular : public Error {
public:
  using Error::Error;
};

struct RegularityOptions {
  /// Largest dimension the checks are designed for; sets the interior margins.
  int d_max = 3;
  /// Resolution length limit.
  int max_length = 8;
};

/// Interior indices [lo + d_max + guard, hi - d_max - guard].
std::pair<int, int> interior_range(const ZAlgebra &a, const RegularityOptions &opts);

enum class RegularityKind { AS, ASF };

/// One nonzero cell of the concentration table: Ext^q(e_iA_0, e_jA) for AS,
/// R^qτ(e_jA) in degree i for ASF.
struct ConcentrationCell {
  int q;
  int index; // j for AS, the module degree i for ASF
  std::size_t dim;
};

struct IndexReport {
  int i = 0;
  ProjectiveDimension pd;
  std::vector<ConcentrationCell> nonzero;
  int reliable_hi = 0; // ASF: reliable top of R^dτ(e_iA)
};

struct RegularityReport {
  RegularityKind kind = RegularityKind::AS;
  bool regular = false;
  int d = -1;
  /// Gorenstein parameter in the convention j = i - l.
  int l = 0;
  /// The raw concentration offset j - i (= -l), independent of sign conventions.
  int offset = 0;
  std::string witness; // failure certificate when !regular
  int checked_lo = 0;
  int checked_hi = -1;
  std::vector<IndexReport> indices;
  std::vector<std::string> caveats;
};

/// Checks indices i from the window bottom to the interior end: e_iA_0 needs
/// no margin below, and the local cohomology used by the ASF check reaches
/// down to the window bottom as well. Indices above the interior end (up to
/// the reliable top) whose resolution and Ext table are certified must agree
/// with the verdict; uncertifiable ones are skipped.
RegularityReport check_as_regular(const AlgebraPtr &a, const RegularityOptions &opts = {});
/// Uses (and fills) the engine's caches when one is given.
RegularityReport check_asf_regular(const AlgebraPtr &a, const RegularityOptions &opts = {},
                                   std::shared_ptr<LocalCohomologyEngine> engine = nullptr);

struct DualityCell {
  int q;
  int i;
  std::size_t lhs; // dim D(R^qτ(M))_i
  std::size_t rhs; // dim Ext^{d-q}(M, e_iω)
};

struct DualityReport {
  int d = 0;
  std::vector<DualityCell> cells;  // cells certified on both sides
  std::vector<int> compared_hi;    // per q: top of the degree range compared
  std::vector<bool> iso;           // per q: module-level verdict on that range
  std::vector<std::string> caveats;
  bool dims_match() const;
  bool matched() const;
};

/// Compares D(R^qτ(M)) with Ext^{d-q}(M, ω), ω = D(R^dτ(A)), for q = 0..d, as
/// dimension tables and as left modules.
DualityReport verify_local_duality(const AlgebraPtr &a, const GradedModule &m, const RegularityReport &report,
                                   std::shared_ptr<LocalCohomologyEngine> engine = nullptr);

struct EquivalenceReport {
  RegularityReport as;
  RegularityReport asf;
  RegularityReport as_opposite;
  RegularityReport asf_opposite;
  bool agree = false;
  /// When regular: dim R^dτ(e_iA)_t = dim A_{t,i+l} on the reliable range, on both sides.
  bool generator_identity = true;
  std::vector<std::string> notes;
};

EquivalenceReport verify_equivalence_suite(const AlgebraPtr &a, const RegularityOptions &opts = {});

} // namespace zhom
