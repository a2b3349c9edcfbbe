#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "torsig/divisor_algebra.hpp"

#include <random>
#include <set>

using namespace torsig;

namespace {

IntVec point(std::initializer_list<long> xs) {
  IntVec u(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long x : xs) u(i++) = x;
  return u;
}

// Random lattice point x·B with small coordinates x.
IntVec random_lattice_point(const RingSpec& spec, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> c(-5, 5);
  IntVec x(spec.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = c(rng);
  return spec.lattice.basis.transpose() * x;
}

WeilDivisor random_divisor(Eigen::Index m, std::mt19937_64& rng, long bound = 7) {
  std::uniform_int_distribution<long> c(-bound, bound);
  SmallVec v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = c(rng);
  return WeilDivisor(v);
}

std::set<std::vector<std::int64_t>> as_set(const std::vector<SmallVec>& pts) {
  std::set<std::vector<std::int64_t>> out;
  for (const auto& p : pts) out.insert(std::vector<std::int64_t>(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST_CASE("principal divisors") {
  for (long n = 2; n <= 5; ++n) {
    const auto an = builtin_ring("an", n);
    CHECK(principal_divisor(an, point({1, 1})) == WeilDivisor{1, 1});
    CHECK(principal_divisor(an, point({n, 0})) == WeilDivisor{n, 0});
  }
  CHECK(principal_divisor(builtin_ring("quadric"), point({1, 0, 0})) == WeilDivisor{1, 0, 0, 1});
  CHECK_THROWS_AS(principal_divisor(builtin_ring("an:2"), point({1, 0})), InputError);
}

TEST_CASE("class groups of the builtin families") {
  for (long d = 1; d <= 3; ++d) {
    const auto cg = class_group(builtin_ring("poly", d));
    CHECK(cg.free_rank() == 0);
    CHECK(cg.invariant_factors().empty());
    CHECK(cg.describe() == "0");
  }
  for (long n = 2; n <= 6; ++n) {
    const auto cg = class_group(builtin_ring("an", n));
    CHECK(cg.free_rank() == 0);
    CHECK(cg.invariant_factors() == std::vector<BigInt>{n});
    CHECK(cg.describe() == "Z/" + std::to_string(n));
  }
  const auto quadric = class_group(builtin_ring("quadric"));
  CHECK(quadric.free_rank() == 1);
  CHECK(quadric.invariant_factors().empty());
  CHECK(quadric.describe() == "Z");
  CHECK(quadric.torsion_cardinality() == 1);
}

TEST_CASE("veronese class group matches the minor-gcd oracle") {
  for (long n = 2; n <= 6; ++n) {
    const auto spec = builtin_ring("veronese", n);
    const IntMat divisor_map = basis_pairings(spec).transpose();
    std::vector<BigInt> expected;
    for (const auto& d : oracle::minor_gcd_invariants(divisor_map))
      if (d > 1) expected.push_back(d);
    CHECK(class_group(spec).invariant_factors() == expected);
    CHECK(expected == std::vector<BigInt>{n});
  }
}

TEST_CASE("projection kills principal divisors") {
  std::mt19937_64 rng(3);
  for (const auto& name : default_corpus()) {
    const auto spec = builtin_ring(name);
    const auto cg = class_group(spec);
    for (int t = 0; t < 25; ++t) CHECK(class_of(cg, principal_divisor(spec, random_lattice_point(spec, rng))).is_zero());
  }
}

TEST_CASE("class_of on facet divisors") {
  for (long n = 2; n <= 6; ++n) {
    const auto cg = class_group(builtin_ring("an", n));
    const auto c = class_of(cg, WeilDivisor{1, 0});
    CHECK(c.torsion_coords == std::vector<std::int64_t>{1});
    CHECK(order_of_class(cg, c) == BigInt(n));
    // (1,0) + (0,1) = div(xy)
    CHECK(cg.add(c, class_of(cg, WeilDivisor{0, 1})).is_zero());
  }
  const auto cg2 = class_group(builtin_ring("an:2"));
  CHECK(class_of(cg2, WeilDivisor{0, 1}) == class_of(cg2, WeilDivisor{1, 0}));
  CHECK_THROWS_AS(class_of(cg2, WeilDivisor{1, 0, 0}), InputError);
}

TEST_CASE("order_of_class") {
  const auto an4 = class_group(builtin_ring("an:4"));
  CHECK(order_of_class(an4, an4.zero()) == BigInt(1));
  CHECK(order_of_class(an4, class_of(an4, WeilDivisor{2, 0})) == BigInt(2));
  const auto quadric = class_group(builtin_ring("quadric"));
  CHECK_FALSE(order_of_class(quadric, class_of(quadric, WeilDivisor{1, 0, 0, 0})).has_value());
  CHECK(order_of_class(quadric, quadric.zero()) == BigInt(1));
}

TEST_CASE("torsion_elements") {
  const auto poly = class_group(builtin_ring("poly:2"));
  const auto trivial = torsion_elements(poly);
  REQUIRE(trivial.size() == 1);
  CHECK(trivial[0].is_zero());

  const auto an3 = torsion_elements(class_group(builtin_ring("an:3")));
  CHECK(an3.size() == 3);
  CHECK(std::is_sorted(an3.begin(), an3.end()));
  CHECK(torsion_elements(class_group(builtin_ring("veronese:4"))).size() == 4);
  CHECK(torsion_elements(class_group(builtin_ring("quadric"))).size() == 1);
  CHECK_THROWS_AS(torsion_elements(class_group(builtin_ring("an:5")), 4), CapExceeded);
}

TEST_CASE("class_of is a homomorphism and orders divide |tors|") {
  std::mt19937_64 rng(17);
  for (const auto& name : default_corpus()) {
    const auto spec = builtin_ring(name);
    const auto cg = class_group(spec);
    for (int t = 0; t < 30; ++t) {
      const auto d1 = random_divisor(spec.facet_count(), rng);
      const auto d2 = random_divisor(spec.facet_count(), rng);
      CHECK(class_of(cg, d1 + d2) == cg.add(class_of(cg, d1), class_of(cg, d2)));
      CHECK(class_of(cg, -d1) == cg.negate(class_of(cg, d1)));
      CHECK(class_of(cg, 3 * d1) == cg.scale(3, class_of(cg, d1)));
      const auto order = order_of_class(cg, class_of(cg, d1));
      if (order) {
        CHECK(cg.torsion_cardinality() % *order == 0);
        CHECK(cg.scale(order->convert_to<std::int64_t>(), class_of(cg, d1)).is_zero());
      }
    }
  }
}

TEST_CASE("divisorial_points") {
  SUBCASE("R(0) is the semigroup") {
    const auto spec = builtin_ring("an:3");
    const auto pts = divisorial_points(spec, WeilDivisor::zero(2), Box::cube(2, 0, 9));
    std::size_t expected = 0;
    for (long a = 0; a < 9; ++a)
      for (long b = 0; b < 9; ++b) expected += (a - b) % 3 == 0;
    CHECK(pts.size() == expected);
    for (const auto& p : pts) CHECK(contains(spec, p.cast<BigInt>()));
  }
  SUBCASE("twist by a facet lets in negative first coordinate") {
    const auto pts = as_set(divisorial_points(builtin_ring("an:2"), WeilDivisor{1, 0}, Box::cube(2, -1, 2)));
    CHECK(pts.count({-1, 1}) == 1);
    CHECK(pts.count({-1, -1}) == 0);
  }
  SUBCASE("strictly positive coefficients required by D = -1") {
    const auto pts = as_set(divisorial_points(builtin_ring("quadric"), WeilDivisor{-1, -1, -1, -1}, Box::cube(3, -2, 3)));
    CHECK(pts.count({0, 0, 0}) == 0);
    CHECK(pts.count({1, 1, 1}) == 1);
  }
  SUBCASE("empty box") { CHECK(divisorial_points(builtin_ring("poly:2"), WeilDivisor{0, 0}, Box::cube(2, 3, 3)).empty()); }
}

TEST_CASE("divisorial_points translate by principal divisors") {
  std::mt19937_64 rng(23);
  for (const auto& name : {"an:3", "veronese:3", "quadric"}) {
    const auto spec = builtin_ring(name);
    for (int t = 0; t < 5; ++t) {
      const auto d = random_divisor(spec.facet_count(), rng, 3);
      const IntVec v = random_lattice_point(spec, rng);
      const SmallVec shift = v.unaryExpr([](const BigInt& x) { return to_int64(x); });
      const Box box = Box::cube(spec.dim(), -4, 5);
      const Box moved{box.lo + shift, box.hi + shift};
      std::set<std::vector<std::int64_t>> translated;
      for (const auto& p : divisorial_points(spec, d, box)) {
        const SmallVec s = p + shift;
        translated.insert(std::vector<std::int64_t>(s.begin(), s.end()));
      }
      CHECK(translated == as_set(divisorial_points(spec, d - principal_divisor(spec, v), moved)));
    }
  }
}

TEST_CASE("tensor and Hom divisors at the level of sections") {
  // sums of sections of R(D1) and R(D2) are sections of R(D1 + D2), and
  // sections of Hom(R(D1), R(D2)) = R(D2 - D1) carry R(D1) into R(D2).
  std::mt19937_64 rng(29);
  for (const auto& name : {"an:2", "an:4", "veronese:3", "quadric"}) {
    const auto spec = builtin_ring(name);
    const auto cg = class_group(spec);
    const Box box = Box::cube(spec.dim(), -3, 4);
    for (int t = 0; t < 4; ++t) {
      const auto d1 = random_divisor(spec.facet_count(), rng, 2);
      const auto d2 = random_divisor(spec.facet_count(), rng, 2);
      const auto sum = reflexive_tensor_divisor(d1, d2);
      const auto hom = hom_divisor(d1, d2);
      CHECK(class_of(cg, sum) == cg.add(class_of(cg, d1), class_of(cg, d2)));
      CHECK(class_of(cg, hom) == cg.add(class_of(cg, d2), cg.negate(class_of(cg, d1))));

      const auto p1 = divisorial_points(spec, d1, box);
      const auto p2 = divisorial_points(spec, d2, box);
      const auto ph = divisorial_points(spec, hom, box);
      const Box wide = Box::cube(spec.dim(), -6, 8);
      const auto target_sum = as_set(divisorial_points(spec, sum, wide));
      const auto target_d2 = as_set(divisorial_points(spec, d2, wide));
      for (const auto& a : p1) {
        for (const auto& b : p2) {
          const SmallVec s = a + b;
          CHECK(target_sum.count(std::vector<std::int64_t>(s.begin(), s.end())) == 1);
        }
        for (const auto& h : ph) {
          const SmallVec s = a + h;
          CHECK(target_d2.count(std::vector<std::int64_t>(s.begin(), s.end())) == 1);
        }
      }
    }
  }
}

TEST_CASE("class element formatting") {
  const auto an4 = class_group(builtin_ring("an:4"));
  CHECK(to_string(an4.zero()) == "0");
  CHECK(to_string(class_of(an4, WeilDivisor{3, 0})) == "3");
  const auto quadric = class_group(builtin_ring("quadric"));
  CHECK(to_string(class_of(quadric, WeilDivisor{1, 0, 0, 0})) == "1");
  CHECK(to_string(WeilDivisor{1, -2}) == "(1,-2)");
}
