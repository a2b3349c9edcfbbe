#include "torsig/divisor_algebra.hpp"

#include "torsig/exact_linalg.hpp"

#include <algorithm>
#include <sstream>

namespace torsig {

WeilDivisor::WeilDivisor(std::initializer_list<std::int64_t> c)
    : coeffs(static_cast<Eigen::Index>(c.size())) {
  Eigen::Index i = 0;
  for (auto v : c) coeffs(i++) = v;
}

WeilDivisor operator+(const WeilDivisor& a, const WeilDivisor& b) {
  if (a.size() != b.size()) throw InputError("divisor length mismatch");
  return WeilDivisor(a.coeffs + b.coeffs);
}
WeilDivisor operator-(const WeilDivisor& a, const WeilDivisor& b) {
  if (a.size() != b.size()) throw InputError("divisor length mismatch");
  return WeilDivisor(a.coeffs - b.coeffs);
}
WeilDivisor operator-(const WeilDivisor& a) { return WeilDivisor(SmallVec(-a.coeffs)); }
WeilDivisor operator*(std::int64_t k, const WeilDivisor& a) { return WeilDivisor(SmallVec(k * a.coeffs)); }
bool operator==(const WeilDivisor& a, const WeilDivisor& b) {
  return a.size() == b.size() && a.coeffs == b.coeffs;
}
bool operator<(const WeilDivisor& a, const WeilDivisor& b) {
  return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(),
                                      b.coeffs.end());
}

std::string to_string(const WeilDivisor& d) {
  std::ostringstream out;
  out << '(';
  for (Eigen::Index i = 0; i < d.size(); ++i) out << (i ? "," : "") << d.coeffs(i);
  out << ')';
  return out.str();
}

bool ClassElement::is_zero() const {
  auto zero = [](std::int64_t x) { return x == 0; };
  return std::all_of(free_coords.begin(), free_coords.end(), zero) &&
         std::all_of(torsion_coords.begin(), torsion_coords.end(), zero);
}

bool ClassElement::is_torsion() const {
  return std::all_of(free_coords.begin(), free_coords.end(), [](std::int64_t x) { return x == 0; });
}

std::string to_string(const ClassElement& c) {
  if (c.is_zero()) return "0";
  std::ostringstream out;
  for (std::size_t i = 0; i < c.free_coords.size(); ++i) out << (i ? "," : "") << c.free_coords[i];
  if (!c.free_coords.empty() && !c.torsion_coords.empty()) out << '|';
  for (std::size_t i = 0; i < c.torsion_coords.size(); ++i)
    out << (i ? "," : "") << c.torsion_coords[i];
  return out.str();
}

ClassGroupData::ClassGroupData(Eigen::Index free_rank, std::vector<BigInt> invariant_factors,
                               IntMat projection)
    : free_rank_(free_rank),
      invariant_factors_(std::move(invariant_factors)),
      projection_(std::move(projection)) {}

BigInt ClassGroupData::torsion_cardinality() const {
  BigInt n = 1;
  for (const auto& d : invariant_factors_) n *= d;
  return n;
}

ClassElement ClassGroupData::reduced(std::vector<std::int64_t> free, std::vector<BigInt> torsion) const {
  ClassElement c;
  c.free_coords = std::move(free);
  c.torsion_coords.reserve(torsion.size());
  for (std::size_t k = 0; k < torsion.size(); ++k)
    c.torsion_coords.push_back(to_int64(floor_mod(torsion[k], invariant_factors_[k])));
  return c;
}

ClassElement ClassGroupData::zero() const {
  ClassElement c;
  c.free_coords.assign(static_cast<std::size_t>(free_rank_), 0);
  c.torsion_coords.assign(invariant_factors_.size(), 0);
  return c;
}

ClassElement ClassGroupData::add(const ClassElement& a, const ClassElement& b) const {
  std::vector<std::int64_t> free(a.free_coords.size());
  for (std::size_t i = 0; i < free.size(); ++i) free[i] = checked_add(a.free_coords[i], b.free_coords[i]);
  std::vector<BigInt> tors;
  for (std::size_t k = 0; k < a.torsion_coords.size(); ++k)
    tors.push_back(BigInt(a.torsion_coords[k]) + b.torsion_coords[k]);
  return reduced(std::move(free), std::move(tors));
}

ClassElement ClassGroupData::negate(const ClassElement& a) const { return scale(-1, a); }

ClassElement ClassGroupData::scale(std::int64_t k, const ClassElement& a) const {
  std::vector<std::int64_t> free(a.free_coords.size());
  for (std::size_t i = 0; i < free.size(); ++i) free[i] = checked_mul(k, a.free_coords[i]);
  std::vector<BigInt> tors;
  for (auto t : a.torsion_coords) tors.push_back(BigInt(k) * t);
  return reduced(std::move(free), std::move(tors));
}

std::string ClassGroupData::describe() const {
  std::vector<std::string> parts;
  if (free_rank_ == 1) parts.push_back("Z");
  if (free_rank_ > 1) parts.push_back("Z^" + std::to_string(free_rank_));
  for (const auto& d : invariant_factors_) parts.push_back("Z/" + d.str());
  if (parts.empty()) return "0";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
  return out;
}

WeilDivisor principal_divisor(const RingSpec& spec, const IntVec& u) {
  if (u.size() != spec.dim()) throw InputError("point length does not match ring dimension");
  if (!in_lattice(spec.lattice, u)) throw InputError("point is not in the lattice L");
  SmallVec c(spec.facet_count());
  for (Eigen::Index i = 0; i < spec.facet_count(); ++i) {
    const Rational v = pairing(spec.facets[static_cast<std::size_t>(i)], u);
    if (!is_integer(v)) throw InputError(std::string(invariant_names::kNotIntegral));
    c(i) = to_int64(boost::multiprecision::numerator(v));
  }
  return WeilDivisor(std::move(c));
}

namespace {

// x^{-1} mod n for gcd(x, n) = 1.
BigInt inverse_mod(const BigInt& x, const BigInt& n) {
  BigInt r0 = n, r1 = x, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const BigInt q = r0 / r1;
    BigInt t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  return floor_mod(s0, n);
}

}  // namespace

ClassGroupData class_group(const RingSpec& spec) {
  // Columns of the divisor map are div(b_j) for the basis rows b_j of L.
  const IntMat divisor_map = basis_pairings(spec).transpose();
  const auto snf = smith_normal_form(divisor_map);
  const Eigen::Index m = divisor_map.rows();
  const auto diag = snf.diagonal();

  Eigen::Index rank = 0;
  for (const auto& d : diag)
    if (d != 0) ++rank;

  std::vector<Eigen::Index> rows;
  for (Eigen::Index k = rank; k < m; ++k) rows.push_back(k);
  std::vector<BigInt> factors;
  for (Eigen::Index k = 0; k < rank; ++k)
    if (diag[static_cast<std::size_t>(k)] > 1) {
      rows.push_back(k);
      factors.push_back(diag[static_cast<std::size_t>(k)]);
    }

  IntMat projection(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t r = 0; r < rows.size(); ++r)
    projection.row(static_cast<Eigen::Index>(r)) = snf.U.row(rows[r]);

  // Normalisation: free rows start with a positive entry; each cyclic row is
  // rescaled by a unit so the first facet it sends to a generator maps to 1,
  // then reduced into [0, d_k).
  const Eigen::Index free = m - rank;
  for (Eigen::Index r = 0; r < free; ++r)
    for (Eigen::Index j = 0; j < m; ++j)
      if (projection(r, j) != 0) {
        if (projection(r, j) < 0) projection.row(r) = -projection.row(r);
        break;
      }
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Eigen::Index r = free + static_cast<Eigen::Index>(k);
    const BigInt& n = factors[k];
    for (Eigen::Index j = 0; j < m; ++j) {
      const BigInt x = floor_mod(BigInt(projection(r, j)), n);
      if (detail::gcd_value(x, n) != 1) continue;
      const BigInt unit = inverse_mod(x, n);
      for (Eigen::Index c = 0; c < m; ++c) projection(r, c) = projection(r, c) * unit;
      break;
    }
    for (Eigen::Index c = 0; c < m; ++c) projection(r, c) = floor_mod(BigInt(projection(r, c)), n);
  }
  return ClassGroupData(m - rank, std::move(factors), std::move(projection));
}

ClassElement class_of(const ClassGroupData& cg, const WeilDivisor& d) {
  if (d.size() != cg.divisor_length())
    throw InputError("divisor has " + std::to_string(d.size()) + " coefficients, ring has " +
                     std::to_string(cg.divisor_length()) + " facets");
  const IntVec image = cg.projection() * d.coeffs.cast<BigInt>();
  ClassElement c = cg.zero();
  for (Eigen::Index i = 0; i < cg.free_rank(); ++i)
    c.free_coords[static_cast<std::size_t>(i)] = to_int64(image(i));
  for (std::size_t k = 0; k < c.torsion_coords.size(); ++k)
    c.torsion_coords[k] = to_int64(
        floor_mod(BigInt(image(cg.free_rank() + static_cast<Eigen::Index>(k))), cg.invariant_factors()[k]));
  return c;
}

std::optional<BigInt> order_of_class(const ClassGroupData& cg, const ClassElement& c) {
  if (!c.is_torsion()) return std::nullopt;
  BigInt order = 1;
  for (std::size_t k = 0; k < c.torsion_coords.size(); ++k) {
    const BigInt& n = cg.invariant_factors()[k];
    const BigInt part = n / detail::gcd_value(BigInt(c.torsion_coords[k]), n);
    order = order / detail::gcd_value(order, part) * part;
  }
  return order;
}

std::vector<ClassElement> torsion_elements(const ClassGroupData& cg, std::uint64_t cap) {
  const BigInt total = cg.torsion_cardinality();
  if (total > cap)
    throw CapExceeded("torsion subgroup has " + total.str() + " elements, above the enumeration cap " +
                      std::to_string(cap) + " (raise it with --cap)");
  std::vector<ClassElement> out;
  ClassElement c = cg.zero();
  const auto& factors = cg.invariant_factors();
  while (true) {
    out.push_back(c);
    // odometer, last coordinate fastest
    std::size_t k = c.torsion_coords.size();
    while (k > 0) {
      --k;
      if (++c.torsion_coords[k] < factors[k]) break;
      c.torsion_coords[k] = 0;
      if (k == 0) return out;
    }
    if (c.torsion_coords.empty()) return out;
  }
}

Box Box::cube(Eigen::Index d, std::int64_t lo, std::int64_t hi) {
  return Box{SmallVec::Constant(d, lo), SmallVec::Constant(d, hi)};
}

std::vector<SmallVec> divisorial_points(const RingSpec& spec, const WeilDivisor& d, const Box& box) {
  const Eigen::Index dim = spec.dim();
  if (d.size() != spec.facet_count()) throw InputError("divisor length does not match facet count");
  if (box.lo.size() != dim || box.hi.size() != dim) throw InputError("box dimension mismatch");
  std::vector<SmallVec> out;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (box.lo(i) >= box.hi(i)) return out;

  const LatticeMembership member(spec.lattice);
  const ScaledFacets facets(spec);
  SmallVec u = box.lo;
  while (true) {
    if (member.contains(u)) {
      bool inside = true;
      for (Eigen::Index i = 0; i < facets.numerators.rows() && inside; ++i)
        inside = facets.numerators.row(i).dot(u) >= -d.coeffs(i) * facets.denominators(i);
      if (inside) out.push_back(u);
    }
    Eigen::Index k = dim;
    while (k > 0) {
      --k;
      if (++u(k) < box.hi(k)) break;
      u(k) = box.lo(k);
      if (k == 0) return out;
    }
  }
}

}  // namespace torsig
