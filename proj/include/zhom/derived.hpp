#pragma once

#include "zhom/resolution.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

namespace zhom {

// ---------------------------------------------------------------- Hom and tensor complexes

/// Matrix of φ ↦ φ∘f from Hom(f.target, N) = ⊕_h N_{d_h} to Hom(f.source, N) = ⊕_g N_{d_g}.
SparseMatrix hom_pullback(const FreeMap &f, const GradedModule &n);
/// Matrix of φ ↦ u∘φ from Hom(F, u.source) to Hom(F, u.target).
SparseMatrix hom_pushforward(const FreeModule &f, const ModuleMorphism &u);
/// Matrix of f ⊗ L from F_src ⊗ L = ⊕_g L_{d_g} to F_dst ⊗ L for a left module L.
SparseMatrix tensor_map(const FreeMap &f, const GradedModule &l);

/// Hom(F_•, N): dims[p] = dim C^p and delta[p] : C^p → C^{p+1}, for p = 0..top.
struct HomComplex {
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix> delta;
};
HomComplex hom_cochain(const FreeResolution &r, const GradedModule &n, int top);

/// A cohomology (or homology) group as a subquotient of the cochain space.
struct Cohomology {
  std::size_t ambient = 0;
  Subquotient space;
  std::size_t dim() const { return space.dim(); }
};

/// Ext^q(M, N) from a minimal resolution of M (right modules; if the resolution
/// is of a left module, N is a left module of the same algebra and is flipped).
/// Throws ResolutionTruncated when the window does not determine the value:
/// F_{q+1} unknown, F_p not certified against a target that is open above,
/// or a generator degree outside the target's reliable interval.
Cohomology ext_from_resolution(const FreeResolution &r, const GradedModule &n, int q);
std::size_t ext_dim(const FreeResolution &r, const GradedModule &n, int q);

/// Tor_p(M, L) = H_p(F_• ⊗ L) for the resolved module M and a left module L
/// (a right module of the original algebra when the resolution is flipped).
std::size_t tor_dim(const FreeResolution &r, const GradedModule &l, int p);
/// ūTor_p(M, N) for a bimodule N: component t is Tor_p(M, N e_t).
std::vector<std::size_t> tor(const FreeResolution &r, const Bimodule &n, int p);

struct TorBalanceReport {
  int i = 0;
  int j = 0;
  std::vector<std::size_t> from_right; // Tor_p(e_iA_0, A_0e_j) from a resolution of e_iA_0, p = 0..pmax
  std::vector<std::size_t> from_left;  // the same from a resolution of A_0e_j
  bool agree() const { return from_right == from_left; }
};
TorBalanceReport tor_balance_check(const AlgebraPtr &a, int i, int j, int pmax);
/// tor_balance_check for every pair (i, j) in [lo, hi]^2, row-major in i,
/// resolving each e_iA_0 and A_0e_j once.
std::vector<TorBalanceReport> tor_balance_table(const AlgebraPtr &a, int lo, int hi, int pmax);

/// Component j of ūExt^q(A/A_{≥n}, target), together with the twisting identity
/// for the graded piece: dim Ext^q(e_j(A_{≥n}/A_{≥n+1}), target) equals
/// dim Ext^q(e_{j+n}A_0, target) · dim A_{j,j+n}. Uncertified cells are nullopt.
struct GradedQuotientExt {
  int n = 0;
  int q = 0;
  std::vector<std::optional<std::size_t>> quotient; // indexed by j - lo
  std::vector<std::optional<std::size_t>> piece;
  std::vector<std::optional<std::size_t>> twisted;
  bool twisting_holds() const;
};
GradedQuotientExt ext_graded_quotient(const AlgebraPtr &a, int n, const GradedModule &target, int q);

// ---------------------------------------------------------------- local cohomology

struct LocalCohomologyOptions {
  int q_max = 3;
  /// Consecutive isomorphic colimit steps required before a value is final.
  int stability_runs = 2;
  /// Largest truncation level tried; 0 means the window width.
  int n_max = 0;
};

struct LocalCohomologyCell {
  std::size_t dim = 0;
  int stabilized_at = -1; // -1: never stabilized (flagged)
  bool stabilized() const { return stabilized_at >= 0; }
};

struct LocalCohomologyTable {
  int lo = 0;
  int q_max = 0;
  std::vector<std::vector<LocalCohomologyCell>> cells; // [q][i - lo]
  /// Top of the maximal initial interval of degrees on which R^q is final.
  std::vector<int> reliable_hi;

  const LocalCohomologyCell &cell(int q, int i) const {
    return cells[static_cast<std::size_t>(q)][static_cast<std::size_t>(i - lo)];
  }
  std::size_t dim(int q, int i) const { return cell(q, i).dim; }
  bool all_stabilized(int q) const;
};

class LocalCohomology;

/// Computes R^qτ(M)_i = colim_n Ext^q(e_i(A/A_{≥n}), M) with explicit colimit
/// maps. Resolutions of the truncations e_i(A/A_{≥n}) and the comparison lifts
/// between them depend only on the algebra and are cached here.
class LocalCohomologyEngine : public std::enable_shared_from_this<LocalCohomologyEngine> {
public:
  static std::shared_ptr<LocalCohomologyEngine> create(AlgebraPtr a, LocalCohomologyOptions opts = {});

  const AlgebraPtr &algebra() const { return alg_; }
  const LocalCohomologyOptions &options() const { return opts_; }

  std::shared_ptr<const LocalCohomology> compute(const GradedModule &m);
  /// R^qτ(A) as a bimodule: rows R^qτ(e_jA), left action induced by left
  /// multiplication e_jA → e_lA; validated before it is returned.
  Bimodule bimodule(int q);
  /// ω = D(R^dτ(A)).
  Bimodule omega(int d) { return dual(bimodule(d)); }

  // Internals shared with LocalCohomology.
  /// Truncation levels n available at degree i form the run
  /// first_level(i)..level_limit(i): e_i(A/A_{≥n}) has a resolution certified
  /// through step q_max + 1 and its top generators stay below the guard zone.
  int first_level(int i);
  int level_limit(int i);
  const FreeResolution &truncation(int i, int n);
  /// Lift of the projection e_i(A/A_{≥n+1}) → e_i(A/A_{≥n}).
  const std::vector<FreeMap> &projection_lift(int i, int n);
  /// Lift of left multiplication by basis element s of A_ik, e_k(A/A_{≥n}) → e_i(A/A_{≥n}).
  const std::vector<FreeMap> &left_mult_lift(int i, int k, std::size_t s, int n);

private:
  LocalCohomologyEngine(AlgebraPtr a, LocalCohomologyOptions opts);
  void ensure_truncations();

  AlgebraPtr alg_;
  LocalCohomologyOptions opts_;
  std::once_flag truncations_once_;
  std::vector<std::vector<FreeResolution>> truncations_; // [i - lo][n - first]
  std::vector<int> firsts_;
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::vector<FreeMap>> projections_;
  std::map<std::tuple<int, int, std::size_t, int>, std::vector<FreeMap>> left_mults_;
  std::map<int, Bimodule> bimodules_;
};

/// Local cohomology of one right module: the colimit data per (q, i).
class LocalCohomology {
public:
  const LocalCohomologyTable &table() const { return table_; }
  /// R^qτ(M) as a right module on its reliable interval (zero above it).
  GradedModule module(int q) const;
  /// Matrix R^qτ(M)_i → R^qτ(target)_i induced by a module map M → target,
  /// both stabilized at i (computed at a common level).
  SparseMatrix induced(const LocalCohomology &target, const ModuleMorphism &u, int q, int i) const;

private:
  friend class LocalCohomologyEngine;
  struct Level {
    HomComplex complex;
    std::vector<Cohomology> h; // per q
  };
  struct Column {
    int n_last = 0; // levels first..n_last are available
    std::vector<Level> levels;
    std::vector<std::vector<SparseMatrix>> phi; // [q][n - first] : H_n → H_{n+1}
  };
  /// H_{n0(i)} → H_n at degree i (iso for n ≥ n0).
  SparseMatrix transport(int q, int i, int n) const;
  const Cohomology &at_level(int q, int i, int n) const;
  const Column &column(int i) const { return columns_[static_cast<std::size_t>(i - table_.lo)]; }

  std::shared_ptr<LocalCohomologyEngine> engine_;
  GradedModule target_;
  std::vector<Column> columns_;
  std::vector<int> first_; // first available level per degree
  LocalCohomologyTable table_;
};

} // namespace zhom
