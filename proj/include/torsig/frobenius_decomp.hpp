#pragma once

// F^e_* R(D) for a toric ring splits into q^d divisorial summands, one per
// coset of L inside (1/q)L. For a representative w the summand is R(D_w)
// with D_w(i) = floor(facet_i(w) + D_i / q).

#include "torsig/divisor_algebra.hpp"

#include <map>
#include <optional>
#include <vector>

namespace torsig {

struct FrobeniusContext {
  std::int64_t p = 2;
  int e = 1;
  BigInt q = 2;

  /// Throws InputError unless p is prime and e >= 1.
  static FrobeniusContext make(std::int64_t p, int e);
};

struct DecomposeOptions {
  std::uint64_t cap = kDefaultEnumerationCap;  // max q^d
  bool detail = false;
  unsigned workers = 1;
};

/// One coset of L in (1/q)L. The representative is numerator / q with
/// numerator = sum_j c_j h_j, 0 <= c_j < q, over the Hermite basis rows h_j.
struct CosetSummand {
  SmallVec numerator;
  WeilDivisor divisor;

  friend bool operator==(const CosetSummand&, const CosetSummand&) = default;
};

struct FrobeniusDecomposition {
  FrobeniusContext ctx;
  WeilDivisor base_divisor;
  ClassElement base_class;
  BigInt rank;  // q^d
  std::map<ClassElement, std::uint64_t> summands;
  std::optional<std::vector<CosetSummand>> detail;

  std::uint64_t total_multiplicity() const;
};

FrobeniusDecomposition decompose(const RingSpec& spec, const ClassGroupData& cg,
                                 const WeilDivisor& base, const FrobeniusContext& ctx,
                                 const DecomposeOptions& opts = {});
FrobeniusDecomposition decompose(const RingSpec& spec, const WeilDivisor& base,
                                 const FrobeniusContext& ctx, const DecomposeOptions& opts = {});

/// Multiplicity of the trivial class: the free rank of F^e_* R(D).
/// It is a_e(R) only when the base divisor is principal.
std::uint64_t free_rank(const FrobeniusDecomposition& dec);

std::uint64_t multiplicity_of(const FrobeniusDecomposition& dec, const ClassElement& c);

/// n_e: summands whose class is torsion, one count per distinct class.
std::uint64_t simultaneous_torsion_count(const FrobeniusDecomposition& dec, const ClassGroupData& cg,
                                         std::uint64_t cap = kDefaultEnumerationCap);

/// #{u ∈ L : 0 <= facet_i(u) < q for all i} by brute-force membership over
/// an integer bounding box. For coordinate facets this is |S ∩ [0,q)^d|.
/// `cap` bounds the number of box points visited.
std::uint64_t box_count_oracle(const RingSpec& spec, const FrobeniusContext& ctx,
                               std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace torsig
