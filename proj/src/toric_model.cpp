#include "torsig/toric_model.hpp"

#include "torsig/exact_linalg.hpp"
#include "torsig/polytope.hpp"

#include <charconv>
#include <sstream>

namespace torsig {

namespace names = invariant_names;

BigInt Lattice::covolume() const {
  BigInt det = determinant(basis);
  return det < 0 ? BigInt(-det) : det;
}

std::string Violation::describe() const {
  if (!facet) return invariant;
  return invariant + " (facet " + std::to_string(*facet) + ")";
}

namespace {

bool positively_proportional(const RatVec& a, const RatVec& b) {
  // a = t b with t > 0
  std::optional<Rational> ratio;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if ((a(i) == 0) != (b(i) == 0)) return false;
    if (a(i) == 0) continue;
    Rational t = a(i) / b(i);
    if (t <= 0) return false;
    if (ratio && *ratio != t) return false;
    ratio = t;
  }
  return ratio.has_value();
}

}  // namespace

std::vector<Violation> validate(const RingSpec& spec) {
  std::vector<Violation> out;
  const auto& B = spec.lattice.basis;
  const Eigen::Index d = B.cols();
  if (B.rows() != d || d == 0) {
    out.push_back({std::string(names::kBasisShape), std::nullopt});
    return out;
  }
  if (determinant(B) == 0) out.push_back({std::string(names::kBasisRank), std::nullopt});
  if (spec.facets.empty()) out.push_back({std::string(names::kNoFacets), std::nullopt});
  for (std::size_t i = 0; i < spec.facets.size(); ++i)
    if (spec.facets[i].covector.size() != d) out.push_back({std::string(names::kCovectorLength), i});
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < spec.facets.size(); ++i) {
    const RatVec values = B.cast<Rational>() * spec.facets[i].covector;
    bool integral = true;
    for (Eigen::Index j = 0; j < d; ++j) integral = integral && is_integer(values(j));
    if (!integral) {
      out.push_back({std::string(names::kNotIntegral), i});
      continue;
    }
    // f(L) = g·Z where g = gcd of the values on a basis.
    BigInt g = 0;
    for (Eigen::Index j = 0; j < d; ++j)
      g = detail::gcd_value(g, BigInt(boost::multiprecision::numerator(values(j))));
    if (g != 1) out.push_back({std::string(names::kNotPrimitive), i});
  }
  for (std::size_t i = 0; i < spec.facets.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (positively_proportional(spec.facets[i].covector, spec.facets[j].covector)) {
        out.push_back({std::string(names::kDuplicateFacet), i});
        break;
      }

  RatMat normals(spec.facet_count(), d);
  for (std::size_t i = 0; i < spec.facets.size(); ++i)
    normals.row(static_cast<Eigen::Index>(i)) = spec.facets[i].covector.transpose();
  if (exact_rank(normals) < d) {
    out.push_back({std::string(names::kNotPointed), std::nullopt});
    return out;
  }

  // The cone is pointed, so P = {0 <= facet_i <= 1} is a polytope whose
  // local shape at the origin is the cone itself.
  const auto constraints = unit_facet_polytope(spec);
  const auto vertices = enumerate_vertices(constraints, d);
  if (affine_dimension(vertices) < d) {
    out.push_back({std::string(names::kNotFullDimensional), std::nullopt});
    return out;
  }
  for (std::size_t i = 0; i < spec.facets.size(); ++i) {
    std::vector<RatVec> on_face;
    for (const auto& v : vertices)
      if (spec.facets[i].covector.dot(v) == 0) on_face.push_back(v);
    if (affine_dimension(on_face) != d - 1) out.push_back({std::string(names::kRedundantFacet), i});
  }
  return out;
}

void require_valid(const RingSpec& spec) {
  const auto violations = validate(spec);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid ring '" << spec.name << "':";
  for (const auto& v : violations) msg << " [" << v.describe() << "]";
  throw InputError(msg.str());
}

bool in_lattice(const Lattice& lattice, const IntVec& u) {
  // u = x B  <=>  B^T x^T = u^T
  auto x = solve_exact(lattice.basis.transpose().cast<Rational>(), u.cast<Rational>());
  if (!x) throw std::logic_error("in_lattice: singular basis");
  for (Eigen::Index i = 0; i < x->size(); ++i)
    if (!is_integer((*x)(i))) return false;
  return true;
}

bool contains(const RingSpec& spec, const IntVec& u) {
  if (u.size() != spec.dim())
    throw InputError("point has length " + std::to_string(u.size()) + ", ring dimension is " +
                     std::to_string(spec.dim()));
  if (!in_lattice(spec.lattice, u)) return false;
  for (const auto& f : spec.facets)
    if (pairing(f, u) < 0) return false;
  return true;
}

Rational pairing(const FacetFunctional& facet, const IntVec& u) {
  return facet.covector.dot(u.cast<Rational>());
}

IntMat basis_pairings(const RingSpec& spec, const IntMat& basis) {
  const Eigen::Index d = basis.rows();
  IntMat out(d, spec.facet_count());
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < spec.facet_count(); ++i) {
      Rational v = pairing(spec.facets[static_cast<std::size_t>(i)], basis.row(j).transpose());
      if (!is_integer(v)) throw InputError(std::string(names::kNotIntegral));
      out(j, i) = boost::multiprecision::numerator(v);
    }
  return out;
}

IntMat canonical_basis(const Lattice& lattice) { return hermite_normal_form(lattice.basis).H; }

LatticeMembership::LatticeMembership(const Lattice& lattice) {
  const BigInt det = determinant(lattice.basis);
  if (det == 0) throw std::logic_error("LatticeMembership: singular basis");
  const Eigen::Index d = lattice.dim();
  // adj(B) = det(B) · B^{-1}, computed column by column
  IntMat adj(d, d);
  const RatMat B = lattice.basis.cast<Rational>();
  for (Eigen::Index c = 0; c < d; ++c) {
    RatVec e = RatVec::Zero(d);
    e(c) = 1;
    auto col = solve_exact(B, e);
    for (Eigen::Index r = 0; r < d; ++r) {
      Rational v = (*col)(r) * Rational(det);
      adj(r, c) = boost::multiprecision::numerator(v);
    }
  }
  adjugate_.resize(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) adjugate_(r, c) = to_int64(adj(r, c));
  modulus_ = to_int64(det < 0 ? BigInt(-det) : det);
}

bool LatticeMembership::contains(const SmallVec& u) const {
  if (modulus_ == 1) return true;
  for (Eigen::Index c = 0; c < adjugate_.cols(); ++c) {
    std::int64_t acc = 0;
    for (Eigen::Index r = 0; r < u.size(); ++r) acc = checked_add(acc, checked_mul(u(r), adjugate_(r, c)));
    if (acc % modulus_ != 0) return false;
  }
  return true;
}

ScaledFacets::ScaledFacets(const RingSpec& spec) {
  const Eigen::Index m = spec.facet_count(), d = spec.dim();
  numerators.resize(m, d);
  denominators.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& cov = spec.facets[static_cast<std::size_t>(i)].covector;
    BigInt den = 1;
    for (Eigen::Index j = 0; j < d; ++j) {
      const BigInt dj = boost::multiprecision::denominator(cov(j));
      den = den / detail::gcd_value(den, dj) * dj;
    }
    denominators(i) = to_int64(den);
    for (Eigen::Index j = 0; j < d; ++j) {
      Rational scaled = cov(j) * Rational(den);
      numerators(i, j) = to_int64(boost::multiprecision::numerator(scaled));
    }
  }
}

namespace {

RingSpec make_ring(std::string name, IntMat basis, const std::vector<std::vector<long>>& facets) {
  RingSpec spec;
  spec.name = std::move(name);
  spec.lattice.basis = std::move(basis);
  for (const auto& f : facets) {
    RatVec c(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) c(static_cast<Eigen::Index>(i)) = Rational(f[i]);
    spec.facets.push_back({std::move(c)});
  }
  return spec;
}

std::int64_t require_param(std::string_view family, std::optional<std::int64_t> param,
                           std::int64_t minimum) {
  if (!param) throw InputError("builtin family '" + std::string(family) + "' needs a parameter");
  if (*param < minimum)
    throw InputError("builtin family '" + std::string(family) + "' needs parameter >= " +
                     std::to_string(minimum) + ", got " + std::to_string(*param));
  return *param;
}

}  // namespace

RingSpec builtin_ring(std::string_view family, std::optional<std::int64_t> param) {
  if (family == "polynomial" || family == "poly") {
    const auto d = require_param(family, param, 1);
    if (d > 8) throw InputError("polynomial dimension too large (max 8)");
    std::vector<std::vector<long>> facets;
    for (std::int64_t i = 0; i < d; ++i) {
      std::vector<long> f(static_cast<std::size_t>(d), 0);
      f[static_cast<std::size_t>(i)] = 1;
      facets.push_back(f);
    }
    return make_ring("poly:" + std::to_string(d), IntMat::Identity(d, d), facets);
  }
  if (family == "an_singularity" || family == "an") {
    const auto n = require_param(family, param, 2);
    IntMat basis(2, 2);
    basis << 1, 1, 0, BigInt(n);
    return make_ring("an:" + std::to_string(n), basis, {{1, 0}, {0, 1}});
  }
  if (family == "veronese") {
    const auto n = require_param(family, param, 2);
    IntMat basis(2, 2);
    basis << 1, BigInt(n - 1), 0, BigInt(n);
    return make_ring("veronese:" + std::to_string(n), basis, {{1, 0}, {0, 1}});
  }
  if (family == "quadric_cone" || family == "quadric") {
    if (param) throw InputError("builtin family 'quadric' takes no parameter");
    return make_ring("quadric", IntMat::Identity(3, 3),
                     {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}});
  }
  throw InputError("unknown builtin family '" + std::string(family) + "'");
}

RingSpec builtin_ring(std::string_view address) {
  const auto colon = address.find(':');
  if (colon == std::string_view::npos) return builtin_ring(address, std::nullopt);
  const auto family = address.substr(0, colon);
  const auto text = address.substr(colon + 1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw InputError("bad builtin parameter in '" + std::string(address) + "'");
  return builtin_ring(family, value);
}

std::vector<std::string> default_corpus() {
  std::vector<std::string> out;
  for (int n = 2; n <= 6; ++n) out.push_back("an:" + std::to_string(n));
  for (int d = 1; d <= 3; ++d) out.push_back("poly:" + std::to_string(d));
  out.push_back("quadric");
  for (int n = 2; n <= 6; ++n) out.push_back("veronese:" + std::to_string(n));
  return out;
}

std::optional<std::int64_t> an_singularity_parameter(const RingSpec& spec) {
  if (spec.dim() != 2 || spec.facet_count() != 2) return std::nullopt;
  const BigInt n = spec.lattice.covolume();
  if (n < 2 || n > 1'000'000) return std::nullopt;
  const RingSpec model = builtin_ring("an", n.convert_to<std::int64_t>());
  if (canonical_basis(spec.lattice) != canonical_basis(model.lattice)) return std::nullopt;
  for (std::size_t i = 0; i < 2; ++i)
    if (spec.facets[i].covector != model.facets[i].covector) return std::nullopt;
  return n.convert_to<std::int64_t>();
}

}  // namespace torsig
