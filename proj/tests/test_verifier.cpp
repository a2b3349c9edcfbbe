#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torsig/ring_io.hpp"
#include "torsig/verifier.hpp"

#include <sstream>

using namespace torsig;

TEST_CASE("verdict classification") {
  for (long n = 2; n <= 6; ++n) {
    const auto v = verify_ring(builtin_ring("an", n), 2, 3);
    CHECK(v.inequality_holds);
    CHECK(v.equality);
    CHECK(v.torsion_cardinality == n);
    CHECK(v.exact_signature == Rational(1, n));
    CHECK(v.e_reached == 3);
    CHECK(v.witness_bound_holds());
    for (const auto& w : v.witnesses) CHECK(BigInt(w.n_e) == w.rank);
  }
  const auto quadric = verify_ring(builtin_ring("quadric"), 3, 2);
  CHECK(quadric.inequality_holds);
  CHECK_FALSE(quadric.equality);
  CHECK(quadric.free_rank == 1);
  CHECK(quadric.torsion_cardinality == 1);
  for (const auto& w : quadric.witnesses) {
    CHECK(BigInt(w.n_e) < w.rank);
    CHECK(w.n_e == w.a_e);
  }
  const auto poly = verify_ring(builtin_ring("poly:2"), 5, 2);
  CHECK(poly.equality);
  CHECK(poly.exact_signature == 1);
}

TEST_CASE("level planning") {
  VerifyOptions opts;
  opts.cap = 1000;
  const auto v = verify_ring(builtin_ring("quadric"), 2, 5, opts);
  CHECK(v.e_reached == 3);  // 8^3 = 512 <= 1000 < 4096
  CHECK(v.truncated_by_cap);
  CHECK(v.witnesses.size() == 3);

  VerifyOptions bounded;
  bounded.max_q = BigInt(9);
  const auto w = verify_ring(builtin_ring("an:2"), 3, 5, bounded);
  CHECK(w.e_reached == 2);
  CHECK_FALSE(w.truncated_by_cap);

  VerifyOptions tiny;
  tiny.cap = 1;
  CHECK_THROWS_AS(verify_ring(builtin_ring("an:2"), 2, 3, tiny), CapExceeded);
  CHECK_THROWS_AS(verify_ring(builtin_ring("an:2"), 4, 3), InputError);
}

TEST_CASE("per-class convergence") {
  const auto a1 = verify_per_class_convergence(builtin_ring("an:2"), 2, 1);
  REQUIRE(a1.classes.size() == 2);
  for (const auto& row : a1.classes) CHECK(row.ratios[0] == Rational(1, 2));
  CHECK(a1.max_deviation_at_last == 0);
  CHECK(a1.observed_e0 == 1);

  const auto a2 = verify_per_class_convergence(builtin_ring("an:3"), 2, 4);
  CHECK(a2.qs.back() == 16);
  CHECK(a2.max_deviation_at_last <= Rational(9, 16));
  CHECK(a2.observed_e0.has_value());

  const auto poly = verify_per_class_convergence(builtin_ring("poly:3"), 2, 3);
  REQUIRE(poly.classes.size() == 1);
  for (const auto& d : poly.classes[0].deviations) CHECK(d == 0);

  const auto j = per_class_to_json(a1);
  CHECK(j["classes"][1]["class"] == "1");
  CHECK(j["classes"][1]["ratios"][0] == "1/2");
}

TEST_CASE("corpus runs") {
  const auto corpus = builtin_corpus();
  CHECK(corpus.size() == 14);

  SUBCASE("all hold") {
    VerifyOptions opts;
    opts.max_q = BigInt(32);
    const auto result = run_corpus(corpus, {2, 3}, 5, opts, 3);
    CHECK(result.ok());
    CHECK(result.verdicts.size() == 28);
    for (const auto& v : result.verdicts) {
      CHECK(v.inequality_holds);
      CHECK(v.witness_bound_holds());
      CHECK(v.equality == (v.ring != "quadric"));
    }
    CHECK(std::is_sorted(result.verdicts.begin(), result.verdicts.end(), [](const auto& a, const auto& b) {
      return std::tie(a.ring, a.p) < std::tie(b.ring, b.p);
    }));
  }
  SUBCASE("empty p list") {
    const auto result = run_corpus(corpus, {}, 3);
    CHECK(result.verdicts.empty());
    CHECK(result.failures.empty());
    CHECK(corpus_to_json(result).dump() == R"({"verdicts":[],"failures":[]})");
  }
  SUBCASE("cap 0") {
    VerifyOptions opts;
    opts.cap = 0;
    const auto result = run_corpus(corpus, {2}, 2, opts);
    CHECK(result.verdicts.empty());
    CHECK(result.failures.size() == corpus.size());
    CHECK_FALSE(result.ok());
    CHECK_FALSE(result.has_violation());
    for (const auto& f : result.failures) CHECK(f.kind == "cap");
  }
  SUBCASE("non-prime p is an input failure") {
    const auto result = run_corpus({builtin_ring("an:2")}, {6}, 1);
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].kind == "input");
  }
}

TEST_CASE("reports are deterministic across worker counts") {
  const auto corpus = builtin_corpus();
  VerifyOptions opts;
  opts.max_q = BigInt(16);
  const auto serial = run_corpus(corpus, {2, 3}, 4, opts, 1);
  opts.workers = 3;
  const auto parallel = run_corpus(corpus, {2, 3}, 4, opts, 5);
  CHECK(corpus_to_json(serial).dump() == corpus_to_json(parallel).dump());
  std::ostringstream a, b;
  write_csv(a, serial.verdicts);
  write_csv(b, parallel.verdicts);
  CHECK(a.str() == b.str());
}

TEST_CASE("report schema") {
  const auto v = verify_ring(builtin_ring("an:4"), 2, 2);
  const auto j = verdict_to_json(v);
  CHECK(j["ring"] == "an:4");
  CHECK(j["class_group"]["invariant_factors"][0] == 4);
  CHECK(j["exact_signature"] == "1/4");
  CHECK(j["inverse_signature"] == "4");
  CHECK(j["equality"] == true);
  CHECK(j["witnesses"][1]["q"] == 4);
  CHECK(j["witnesses"][1]["a_e"] == 4);
  CHECK(j["witnesses"][1]["s_e"] == "1/4");

  std::ostringstream csv;
  write_csv(csv, {v, verify_ring(builtin_ring("quadric"), 2, 1)});
  std::istringstream lines(csv.str());
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header ==
        "ring,p,e_reached,free_rank,invariant_factors,torsion_cardinality,exact_signature,inverse_signature,"
        "inequality_holds,equality,last_a_e,last_n_e,last_rank");
  CHECK(row1 == "an:4,2,2,0,4,4,1/4,4,true,true,4,16,16");
  CHECK(row2 == "quadric,2,1,1,,1,2/3,3/2,true,false,6,6,8");
}

TEST_CASE("reproduction bundle") {
  const auto spec = builtin_ring("an:2");
  const auto bundle = reproduction_bundle(spec, 2, 1);
  CHECK(bundle["q"] == 2);
  REQUIRE(bundle["cosets"].size() == 4);
  CHECK(bundle["cosets"][1]["numerator"] == nlohmann::json::array({0, 2}));
  CHECK(bundle["cosets"][1]["divisor"] == nlohmann::json::array({0, 1}));
  CHECK(bundle["cosets"][1]["class"] == "1");
  const auto ring = ring_from_json(nlohmann::json::parse(bundle["ring"].dump()));
  CHECK(ring.lattice.basis == spec.lattice.basis);
}
