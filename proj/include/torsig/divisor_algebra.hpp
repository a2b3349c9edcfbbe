#pragma once

// Torus-invariant Weil divisors, principal divisors of monomials and the
// divisor class group Cl(R) = Z^m / {(facet_i(u))_i : u ∈ L}.

#include "torsig/toric_model.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace torsig {

/// Integer combination of the facet prime divisors.
struct WeilDivisor {
  SmallVec coeffs;

  WeilDivisor() = default;
  explicit WeilDivisor(SmallVec c) : coeffs(std::move(c)) {}
  WeilDivisor(std::initializer_list<std::int64_t> c);
  static WeilDivisor zero(Eigen::Index m) { return WeilDivisor(SmallVec::Zero(m)); }

  Eigen::Index size() const { return coeffs.size(); }

  friend WeilDivisor operator+(const WeilDivisor& a, const WeilDivisor& b);
  friend WeilDivisor operator-(const WeilDivisor& a, const WeilDivisor& b);
  friend WeilDivisor operator-(const WeilDivisor& a);
  friend WeilDivisor operator*(std::int64_t k, const WeilDivisor& a);
  friend bool operator==(const WeilDivisor& a, const WeilDivisor& b);
  friend bool operator<(const WeilDivisor& a, const WeilDivisor& b);
};

std::string to_string(const WeilDivisor& d);

/// Normal-form class: free coordinates, then torsion residues in [0, d_i).
struct ClassElement {
  std::vector<std::int64_t> free_coords;
  std::vector<std::int64_t> torsion_coords;

  bool is_zero() const;
  bool is_torsion() const;
  auto operator<=>(const ClassElement&) const = default;
};

/// "0" for the trivial class; otherwise free coordinates, then torsion
/// residues, comma separated, the two groups split by '|' when both exist.
std::string to_string(const ClassElement& c);

class ClassGroupData {
 public:
  ClassGroupData(Eigen::Index free_rank, std::vector<BigInt> invariant_factors, IntMat projection);

  Eigen::Index free_rank() const { return free_rank_; }
  const std::vector<BigInt>& invariant_factors() const { return invariant_factors_; }
  /// Rows: free coordinates first, then one row per invariant factor.
  const IntMat& projection() const { return projection_; }
  Eigen::Index divisor_length() const { return projection_.cols(); }

  BigInt torsion_cardinality() const;

  ClassElement zero() const;
  ClassElement add(const ClassElement& a, const ClassElement& b) const;
  ClassElement negate(const ClassElement& a) const;
  ClassElement scale(std::int64_t k, const ClassElement& a) const;

  /// Human-readable group, e.g. "Z", "Z/4", "Z^2 + Z/2 + Z/6", "0".
  std::string describe() const;

 private:
  ClassElement reduced(std::vector<std::int64_t> free, std::vector<BigInt> torsion) const;

  Eigen::Index free_rank_;
  std::vector<BigInt> invariant_factors_;
  IntMat projection_;
};

/// div(x^u): coefficients facet_i(u). Throws InputError when u ∉ L.
WeilDivisor principal_divisor(const RingSpec& spec, const IntVec& u);

ClassGroupData class_group(const RingSpec& spec);

ClassElement class_of(const ClassGroupData& cg, const WeilDivisor& d);

/// Least k >= 1 with k·c = 0; nullopt when c has infinite order.
std::optional<BigInt> order_of_class(const ClassGroupData& cg, const ClassElement& c);

/// All torsion classes, lexicographic in the torsion coordinates.
/// Throws CapExceeded when |tors Cl| > cap.
std::vector<ClassElement> torsion_elements(const ClassGroupData& cg,
                                           std::uint64_t cap = kDefaultEnumerationCap);

/// Half-open integer box [lo, hi).
struct Box {
  SmallVec lo;
  SmallVec hi;

  static Box cube(Eigen::Index d, std::int64_t lo, std::int64_t hi);
};

/// Lattice points of R(D) = {u ∈ L : facet_i(u) >= -D_i} inside the box.
std::vector<SmallVec> divisorial_points(const RingSpec& spec, const WeilDivisor& d, const Box& box);

/// Divisor whose ideal is Hom(R(D1), R(D2)) up to reflexive hull: D2 - D1.
inline WeilDivisor hom_divisor(const WeilDivisor& d1, const WeilDivisor& d2) { return d2 - d1; }
/// Divisor of the reflexive hull of R(D1) ⊗ R(D2): D1 + D2.
inline WeilDivisor reflexive_tensor_divisor(const WeilDivisor& d1, const WeilDivisor& d2) {
  return d1 + d2;
}

}  // namespace torsig
