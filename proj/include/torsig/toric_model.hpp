#pragma once

// Normal affine semigroup rings k[S], S = L ∩ C, given by a full-rank
// lattice L ⊆ Z^d and the facet functionals of a pointed full-dimensional
// rational cone C. The characteristic is never part of a ring: every
// computation takes p separately.

#include "torsig/scalar.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace torsig {

struct Lattice {
  IntMat basis;  // d x d, rows are basis vectors

  Eigen::Index dim() const { return basis.cols(); }
  /// |det(basis)|, the index of L in Z^d.
  BigInt covolume() const;
};

struct FacetFunctional {
  RatVec covector;
};

struct RingSpec {
  std::string name;
  Lattice lattice;
  std::vector<FacetFunctional> facets;

  Eigen::Index dim() const { return lattice.dim(); }
  Eigen::Index facet_count() const { return static_cast<Eigen::Index>(facets.size()); }
};

/// One failed well-formedness invariant. `invariant` is one of the fixed
/// names below; `facet` is set when a particular facet is at fault.
struct Violation {
  std::string invariant;
  std::optional<std::size_t> facet;

  std::string describe() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace invariant_names {
inline constexpr std::string_view kBasisShape = "lattice basis not square d x d";
inline constexpr std::string_view kBasisRank = "lattice basis not full rank";
inline constexpr std::string_view kNoFacets = "no facets";
inline constexpr std::string_view kCovectorLength = "covector length mismatch";
inline constexpr std::string_view kNotIntegral = "functional not integer-valued on L";
inline constexpr std::string_view kNotPrimitive = "functional not primitive on L";
inline constexpr std::string_view kNotPointed = "cone not pointed";
inline constexpr std::string_view kNotFullDimensional = "cone not full-dimensional";
inline constexpr std::string_view kRedundantFacet = "redundant facet";
inline constexpr std::string_view kDuplicateFacet = "duplicate facet";
}  // namespace invariant_names

/// Empty iff the spec is well formed.
std::vector<Violation> validate(const RingSpec& spec);

/// Throws InputError listing the violations when `validate` is non-empty.
void require_valid(const RingSpec& spec);

/// u ∈ L (u has integer coordinates in Z^d).
bool in_lattice(const Lattice& lattice, const IntVec& u);

/// u ∈ S = L ∩ C. Throws InputError on dimension mismatch.
bool contains(const RingSpec& spec, const IntVec& u);

Rational pairing(const FacetFunctional& facet, const IntVec& u);

/// Integer matrix with entry (j, i) = facet_i(basis row j). Throws
/// InputError when a facet is not integer-valued on L.
IntMat basis_pairings(const RingSpec& spec, const IntMat& basis);
inline IntMat basis_pairings(const RingSpec& spec) {
  return basis_pairings(spec, spec.lattice.basis);
}

/// Basis of L in row Hermite normal form (the canonical basis used for
/// coset representatives).
IntMat canonical_basis(const Lattice& lattice);

/// Machine-word membership test for enumeration loops:
/// u ∈ L  <=>  u · adj(B) ≡ 0 (mod det B).
class LatticeMembership {
 public:
  explicit LatticeMembership(const Lattice& lattice);
  bool contains(const SmallVec& u) const;

 private:
  SmallMat adjugate_;
  std::int64_t modulus_;
};

/// Facets scaled to integer covectors: facet_i(u) = numerators.row(i)·u / denominators(i).
struct ScaledFacets {
  SmallMat numerators;    // m x d
  SmallVec denominators;  // m, all > 0

  explicit ScaledFacets(const RingSpec& spec);
};

/// Builtin corpus rings. `family` is one of polynomial/poly, an_singularity/an,
/// veronese, quadric_cone/quadric.
RingSpec builtin_ring(std::string_view family, std::optional<std::int64_t> param);

/// Parses the "family:param" addressing syntax ("an:4", "poly:2", "quadric").
RingSpec builtin_ring(std::string_view address);

/// Addresses of the default verification corpus.
std::vector<std::string> default_corpus();

/// When the ring is a builtin an_singularity, its n.
std::optional<std::int64_t> an_singularity_parameter(const RingSpec& spec);

}  // namespace torsig
