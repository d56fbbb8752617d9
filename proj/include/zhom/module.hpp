#pragma once

#include "zhom/zalgebra.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace zhom {

class NotLeftBounded : public Error {
public:
  using Error::Error;
};
class AlgebraMismatch : public Error {
public:
  using Error::Error;
};
/// An internal consistency check failed; indicates a bug, never bad input.
class AssertionFailure : public Error {
public:
  using Error::Error;
};

enum class Side { Right, Left };

/// Truncation bookkeeping. Data on the window is always exact; these flags
/// record what the window cannot see.
struct ModuleFlags {
  /// The untruncated module may be nonzero below the window.
  bool open_below = false;
  /// The untruncated module may be nonzero above the window.
  bool open_above = false;
  /// Degrees whose components (and the actions between them) are certified;
  /// outside this range values are window artifacts.
  int reliable_lo = 0;
  int reliable_hi = -1;
};

/// Graded right or left module over a ZAlgebra on the algebra's window.
///
/// A right module stores, for every algebra generator s in A_jk, the matrix
/// of m -> m s from M_j to M_k; a left module stores n -> s n from N_k to
/// N_j. Actions of arbitrary basis elements are derived lazily through the
/// algebra's generator recipes (or taken from a provider when one is given).
class GradedModule {
public:
  using Provider = std::function<SparseMatrix(int, int, std::size_t)>;

  GradedModule() = default;
  /// Module with the given component dimensions (indexed from window.lo) and zero actions.
  GradedModule(AlgebraPtr a, Side side, std::vector<std::size_t> dims);
  /// Module whose action of basis element s of A_jk is provider(j, k, s).
  static GradedModule from_provider(AlgebraPtr a, Side side, std::vector<std::size_t> dims, Provider p);

  bool valid() const { return static_cast<bool>(alg_); }
  const AlgebraPtr &algebra() const { return alg_; }
  Side side() const { return side_; }
  const Field &field() const { return alg_->field(); }
  const Window &window() const { return alg_->window(); }
  int lo() const { return alg_->lo(); }
  int hi() const { return alg_->hi(); }

  std::size_t dim(int t) const;
  const std::vector<std::size_t> &dims() const { return dims_; }
  std::size_t total_dim() const;
  bool is_zero() const { return total_dim() == 0; }

  /// Shape of action matrices for A_jk: dim(k) x dim(j) on the right, dim(j) x dim(k) on the left.
  SparseMatrix zero_action(int j, int k) const;

  /// Action of the pos-th generator of A_jk.
  const SparseMatrix &generator_action(int j, int k, std::size_t pos) const;
  void set_generator_action(int j, int k, std::size_t pos, SparseMatrix m);
  /// Action of basis element s of A_jk.
  const SparseMatrix &action(int j, int k, std::size_t s) const;
  /// Action of an arbitrary element a of A_jk.
  SparseMatrix action(int j, int k, const SparseVector &a) const;

  ModuleFlags flags;
  bool reliable(int t) const { return t >= flags.reliable_lo && t <= flags.reliable_hi; }

private:
  struct State;
  void ensure_unique();

  AlgebraPtr alg_;
  Side side_ = Side::Right;
  std::vector<std::size_t> dims_;
  std::shared_ptr<State> st_;
};

/// Position of basis index s in the generator list of A_jk, if it is a generator.
std::optional<std::size_t> generator_position(const ZAlgebra &a, int j, int k, std::size_t s);

/// Checks the module axioms: the lazily completed action is associative.
ValidationReport validate_module(const GradedModule &m);

/// Degree-preserving module map given by one matrix per window degree.
struct ModuleMorphism {
  GradedModule source;
  GradedModule target;
  std::vector<SparseMatrix> mats; // indexed by degree - lo; target_dim x source_dim

  const SparseMatrix &at(int t) const { return mats[static_cast<std::size_t>(t - source.lo())]; }
  bool commutes_with_action() const;
  static ModuleMorphism zero(const GradedModule &s, const GradedModule &t);
  static ModuleMorphism identity(const GradedModule &m);
};

/// A-A bimodule stored both rowwise (right modules e_iM) and columnwise
/// (left modules Me_t) over the same vector spaces M_it.
struct Bimodule {
  AlgebraPtr algebra;
  std::vector<GradedModule> rows; // rows[i - lo] = e_i M
  std::vector<GradedModule> cols; // cols[t - lo] = M e_t

  const GradedModule &row(int i) const { return rows[static_cast<std::size_t>(i - algebra->lo())]; }
  const GradedModule &col(int t) const { return cols[static_cast<std::size_t>(t - algebra->lo())]; }
  std::size_t dim(int i, int t) const { return row(i).dim(t); }
};

/// Left and right actions commute and both sides are modules.
ValidationReport validate_bimodule(const Bimodule &b);

// ---------------------------------------------------------------- builders

/// e_iA.
GradedModule free_row(const AlgebraPtr &a, int i);
/// Ae_j (left module).
GradedModule free_col(const AlgebraPtr &a, int j);

/// Subquotient of A keeping the components A_it with from <= t - i < to
/// (to < 0 means unbounded): A, A_0, A/A_{>=n}, A_{>=n}, A_{>=n}/A_{>=n+1}.
Bimodule band_bimodule(const AlgebraPtr &a, int from, int to);
inline Bimodule algebra_bimodule(const AlgebraPtr &a) { return band_bimodule(a, 0, -1); }
inline Bimodule augmentation(const AlgebraPtr &a) { return band_bimodule(a, 0, 1); }
inline Bimodule quotient_bimodule(const AlgebraPtr &a, int n) { return band_bimodule(a, 0, n); }
inline Bimodule ideal_bimodule(const AlgebraPtr &a, int n) { return band_bimodule(a, n, -1); }
inline Bimodule graded_piece(const AlgebraPtr &a, int n) { return band_bimodule(a, n, n + 1); }

/// The duality D: componentwise dual with transposed actions; swaps sides.
GradedModule dual(const GradedModule &m);
/// D on bimodules: D(M)_it = (M_ti)^*.
Bimodule dual(const Bimodule &b);

/// Left A-module N as the right Ã^op-module with components N_{-t}, or a right
/// A-module as a left Ã^op-module. flip(flip(M)) recovers M.
GradedModule flip(const GradedModule &m);

/// Restriction to degrees in [a, b] (a subquotient, hence again a module).
GradedModule restrict_degrees(const GradedModule &m, int a, int b);

GradedModule direct_sum(const GradedModule &m, const GradedModule &n);

/// Submodule spanned degreewise by the given subspaces; closure is verified.
/// Returns the module and the inclusion.
std::pair<GradedModule, ModuleMorphism> submodule(const GradedModule &m, const std::vector<Echelon> &spaces);
/// Quotient by degreewise subspaces forming a submodule (verified).
std::pair<GradedModule, ModuleMorphism> quotient(const GradedModule &m, const std::vector<Echelon> &spaces);

GradedModule kernel(const ModuleMorphism &f);
GradedModule image(const ModuleMorphism &f);
GradedModule cokernel(const ModuleMorphism &f);

/// M ⊗_A L for a right module M and left module L (a vector space); returns its dimension.
std::size_t tensor_dim(const GradedModule &m, const GradedModule &l);
/// M ⊗_A N as a right module, (M ⊗ N)_t = M ⊗ N e_t.
GradedModule tensor(const GradedModule &m, const Bimodule &n);

/// Basis of the space of degree-preserving module maps m -> n (same side).
std::vector<ModuleMorphism> hom_space(const GradedModule &m, const GradedModule &n);
/// Hom(e_jA, N) ≅ N_j: the dimension of the evaluation target.
inline std::size_t hom_free_dim(int j, const GradedModule &n) { return n.dim(j); }
/// Internal Hom(N, P) for a bimodule N and right module P: component i is
/// Hom(e_iN, P), with right action induced by the left action on N.
GradedModule internal_hom(const Bimodule &n, const GradedModule &p);

struct TorsionResult {
  GradedModule module;
  /// Set when the torsion found reaches the guard zone, where vectors that
  /// die at the window's top might survive beyond it.
  bool window_relative = false;
};
/// τ(M) for a right module: vectors v in M_t with v·A_{t,hi} = 0.
TorsionResult torsion_submodule(const GradedModule &m);

struct IsoResult {
  bool iso = false;
  std::optional<ModuleMorphism> witness;
  std::string reason;
};
/// Decides whether two modules on the same side are isomorphic: solves for the
/// space of module maps and searches it for a degreewise invertible element
/// (seeded random combinations; exhaustive over small prime fields).
IsoResult module_iso_test(const GradedModule &m, const GradedModule &n, std::uint64_t seed = 1);

} // namespace zhom
