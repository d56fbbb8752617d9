#pragma once

#include "zhom/module.hpp"

#include <map>
#include <utility>
#include <vector>

namespace zhom {

/// Requested data lies beyond the part of a resolution that the window certifies.
class ResolutionTruncated : public Error {
public:
  using Error::Error;
};

/// Free right module ⊕_g e_{d_g}A. Its degree-t component is the
/// concatenation of the blocks A_{d_g,t} in generator order.
struct FreeModule {
  AlgebraPtr algebra;
  std::vector<int> degrees; // nondecreasing

  std::size_t rank() const { return degrees.size(); }
  bool empty() const { return degrees.empty(); }
  std::size_t dim(int t) const;
  /// Start of generator g's block inside the degree-t component.
  std::size_t offset(std::size_t g, int t) const;
  std::size_t block_dim(std::size_t g, int t) const { return algebra->dim(degrees[g], t); }
  /// x * s for x in degree j and s a basis element of A_jk.
  SparseVector act(int j, int k, std::size_t s, const SparseVector &x) const;
  /// x * a for x in degree j and a in A_jk.
  SparseVector act(int j, int k, const SparseVector &a, const SparseVector &x) const;
  /// The generator g as an element of degree degrees[g].
  SparseVector generator(std::size_t g) const;
  GradedModule module() const;
};

/// Module map between free modules, determined by the images of the generators.
struct FreeMap {
  FreeModule source;
  FreeModule target;
  std::vector<SparseVector> images;  // images[g] lies in target degree source.degrees[g]
  std::vector<SparseMatrix> mats;    // per window degree: target.dim(t) x source.dim(t)

  static FreeMap make(FreeModule source, FreeModule target, std::vector<SparseVector> images);
  const SparseMatrix &at(int t) const { return mats[static_cast<std::size_t>(t - source.algebra->lo())]; }
};

enum class ResolutionStatus { Terminated, WindowTruncated };

/// Minimal free resolution ... → F_1 → F_0 → M → 0 of a right module, computed
/// on the window. Data on the window is exact; `status` and `certified_through`
/// record what the window cannot see. The resolution counts as Terminated when
/// the last kernel vanishes on the window, every generator lies at most at
/// hi - guard, and (for a module that is zero above the window) the module
/// already vanishes on the guard zone. Left modules are resolved as right
/// modules over the opposite algebra (`flipped`), and betti() reports their
/// generator degrees back in the original indexing.
struct FreeResolution {
  GradedModule module;                   // the (possibly flipped) right module resolved
  bool flipped = false;
  std::vector<FreeModule> free;          // F_0 .. F_L
  std::vector<SparseVector> cover_images; // ψ(g) in M_{d_g} for generators of F_0
  std::vector<SparseMatrix> cover;       // ψ per window degree
  std::vector<FreeMap> differentials;    // differentials[p - 1] = d_p : F_p → F_{p-1}
  ResolutionStatus status = ResolutionStatus::WindowTruncated;
  int truncated_at = -1;                 // step at which truncation was detected
  bool kernel_vanished = false;          // the last kernel is zero on the window
  /// Largest p such that F_0..F_p have all generators at most hi - guard.
  int certified_through = -1;

  const AlgebraPtr &algebra() const { return module.algebra(); }
  int length() const { return static_cast<int>(free.size()) - 1; }
  const FreeMap &differential(int p) const { return differentials[static_cast<std::size_t>(p - 1)]; }
  /// True when F_p is known to have no generators outside the window: either
  /// the resolution terminated, or F_0..F_p lie below the guard zone.
  bool certified(int p) const;
  /// Multiplicity of degree j in J_p (degrees in the original indexing).
  std::size_t betti(int p, int j) const;
  /// All nonzero Betti numbers keyed by (p, j).
  std::map<std::pair<int, int>, std::size_t> betti_table() const;
};

struct Cover {
  FreeModule free;
  std::vector<SparseVector> images;
  std::vector<SparseMatrix> mats;
};

/// Minimal generators of a left-bounded right module: in every degree the
/// non-pivot unit vectors of the echelon form of (M·A_{≥1})_j.
Cover minimal_generators(const GradedModule &m);

/// Minimal free resolution through step max_length (default 8).
FreeResolution minimal_free_resolution(const GradedModule &m, int max_length = 8);

/// Exact rank checks of the resolution: surjectivity of the cover, d∘d = 0,
/// exactness at every computed position, injectivity of the last map when the
/// resolution terminated, and minimality (no generator image has a component
/// in A_{jj}). Returns a description of each failure.
std::vector<std::string> check_resolution(const FreeResolution &r);

struct ProjectiveDimension {
  bool exact = false;
  int value = -1; // -1 encodes the zero module
};
ProjectiveDimension projective_dimension(const FreeResolution &r);
ProjectiveDimension projective_dimension(const GradedModule &m, int max_length = 8);

/// Comparison theorem: chain maps f_p : P_p → Q_p over a module map f, for
/// p = 0..upto, found degree by degree with solve().
std::vector<FreeMap> lift_chain_map(const FreeResolution &p, const FreeResolution &q, const ModuleMorphism &f,
                                    int upto);

} // namespace zhom
