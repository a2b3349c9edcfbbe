// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.

#include "oracles.hpp"
#include "torsig/exact_linalg.hpp"
#include "torsig/verifier.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace torsig;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

// Every decomposition in the suite goes through here so criterion 6 can
// audit rank accounting across all of them.
struct RankAudit {
  std::uint64_t runs = 0;
  std::uint64_t bad = 0;

  FrobeniusDecomposition operator()(const RingSpec& spec, const ClassGroupData& cg, const WeilDivisor& base,
                                    const FrobeniusContext& ctx, const DecomposeOptions& opts = {}) {
    auto dec = decompose(spec, cg, base, ctx, opts);
    ++runs;
    if (BigInt(dec.total_multiplicity()) != dec.rank) ++bad;
    return dec;
  }
};

RankAudit audit;

std::vector<FrobeniusContext> levels_up_to(std::int64_t p, std::int64_t max_q) {
  std::vector<FrobeniusContext> out;
  for (int e = 1;; ++e) {
    const auto ctx = FrobeniusContext::make(p, e);
    if (ctx.q > max_q) break;
    out.push_back(ctx);
  }
  return out;
}

Outcome class_groups() {
  Outcome out;
  for (long n = 2; n <= 6; ++n) {
    const auto cg = class_group(builtin_ring("an", n));
    if (cg.free_rank() != 0 || cg.invariant_factors() != std::vector<BigInt>{n}) out.fail("an:" + std::to_string(n) + " gave " + cg.describe());
  }
  const auto q = class_group(builtin_ring("quadric"));
  if (q.free_rank() != 1 || !q.invariant_factors().empty()) out.fail("quadric gave " + q.describe());
  for (long d = 1; d <= 3; ++d) {
    const auto cg = class_group(builtin_ring("poly", d));
    if (cg.free_rank() != 0 || !cg.invariant_factors().empty()) out.fail("poly:" + std::to_string(d) + " gave " + cg.describe());
  }
  return out;
}

Outcome singh() {
  Outcome out;
  const auto closed = singh_determinantal_signature(2, 3).value;
  const auto volume = exact_signature_volume(builtin_ring("quadric")).value;
  if (closed != Rational(2, 3)) out.fail("closed form gave " + to_string(closed));
  if (closed != volume) out.fail("quadric volume " + to_string(volume) + " differs from " + to_string(closed));
  out.detail = "2/3 both ways";
  return out;
}

Outcome exact_volumes() {
  Outcome out;
  for (long n = 2; n <= 6; ++n) {
    const auto v = exact_signature_volume(builtin_ring("an", n)).value;
    if (v != Rational(1, n)) out.fail("an:" + std::to_string(n) + " gave " + to_string(v));
  }
  for (long d = 1; d <= 3; ++d) {
    const auto v = exact_signature_volume(builtin_ring("poly", d)).value;
    if (v != 1) out.fail("poly:" + std::to_string(d) + " gave " + to_string(v));
  }
  return out;
}

Outcome sequence_envelope() {
  Outcome out;
  int rows = 0;
  for (long n = 2; n <= 6; ++n) {
    const auto spec = builtin_ring("an", n);
    const auto cg = class_group(spec);
    const Rational exact(1, n);
    for (std::int64_t p : {2, 3, 5}) {
      for (const auto& ctx : levels_up_to(p, 256)) {
        const auto dec = audit(spec, cg, WeilDivisor{0, 0}, ctx);
        const BigInt& q = ctx.q;
        const Rational s(BigInt(free_rank(dec)), q * q);
        const Rational dev = s > exact ? Rational(s - exact) : Rational(exact - s);
        const Rational envelope(2 * q * n + n * n + 2 * q, q * q);
        ++rows;
        if (dev > envelope) out.fail("an:" + std::to_string(n) + " q=" + q.str() + " outside envelope");
        if (q % n == 0 && s != exact)
          out.fail("an:" + std::to_string(n) + " q=" + q.str() + " gave " + to_string(s) + " at n | q");
      }
    }
  }
  if (out.ok) out.detail = std::to_string(rows) + " levels";
  return out;
}

Outcome oracle_equivalence() {
  Outcome out;
  int runs = 0;
  for (const auto& name : default_corpus()) {
    const auto spec = builtin_ring(name);
    const auto cg = class_group(spec);
    for (std::int64_t p : {2, 3})
      for (const auto& ctx : levels_up_to(p, 128)) {
        const auto dec = audit(spec, cg, WeilDivisor::zero(spec.facet_count()), ctx);
        const auto oracle = box_count_oracle(spec, ctx);
        ++runs;
        if (free_rank(dec) != oracle)
          out.fail(name + " q=" + ctx.q.str() + ": " + std::to_string(free_rank(dec)) + " vs oracle " + std::to_string(oracle));
      }
  }
  if (out.ok) out.detail = std::to_string(runs) + " (ring, q) pairs";
  return out;
}

Outcome twist_identity() {
  Outcome out;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> coeff(-6, 6);
  DecomposeOptions opts;
  opts.detail = true;
  int pairs = 0;
  for (long n = 2; n <= 4; ++n) {
    const auto spec = builtin_ring("an", n);
    const auto cg = class_group(spec);
    for (int t = 0; t < 20; ++t) {
      const WeilDivisor d1{coeff(rng), coeff(rng)}, d2{coeff(rng), coeff(rng)};
      ++pairs;
      for (std::int64_t p : {2, 3})
        for (int e = 1; e <= 3; ++e) {
          const auto ctx = FrobeniusContext::make(p, e);
          const auto base = audit(spec, cg, d1, ctx, opts);
          const auto twisted = audit(spec, cg, d1 + to_int64(ctx.q) * d2, ctx, opts);
          for (std::size_t k = 0; k < base.detail->size(); ++k)
            if ((*twisted.detail)[k].divisor != (*base.detail)[k].divisor + d2 ||
                (*twisted.detail)[k].numerator != (*base.detail)[k].numerator) {
              out.fail("an:" + std::to_string(n) + " D1=" + to_string(d1) + " D2=" + to_string(d2) + " q=" + ctx.q.str());
              break;
            }
        }
    }
  }
  if (out.ok) out.detail = std::to_string(pairs) + " pairs x 6 levels";
  return out;
}

Outcome per_class_convergence() {
  Outcome out;
  Rational worst = 0;
  for (long n = 2; n <= 6; ++n) {
    const auto spec = builtin_ring("an", n);
    const auto cg = class_group(spec);
    const auto ctx = FrobeniusContext::make(2, 7);
    const auto dec = audit(spec, cg, WeilDivisor{0, 0}, ctx);
    for (const auto& c : torsion_elements(cg)) {
      const Rational ratio(BigInt(multiplicity_of(dec, c)), ctx.q * ctx.q);
      const Rational dev = ratio > Rational(1, n) ? Rational(ratio - Rational(1, n)) : Rational(Rational(1, n) - ratio);
      worst = std::max(worst, dev);
    }
  }
  if (worst > Rational(1, 20)) out.fail("max deviation " + to_string(worst));
  out.detail = "max deviation " + to_string(worst);
  return out;
}

Outcome corpus_theorem() {
  Outcome out;
  VerifyOptions opts;
  opts.max_q = BigInt(256);
  const auto result = run_corpus(builtin_corpus(), {2, 3, 5}, 8, opts);
  for (const auto& f : result.failures) out.fail(f.ring + " p=" + std::to_string(f.p) + " [" + f.kind + "] " + f.message);
  for (const auto& v : result.verdicts) {
    if (!v.inequality_holds) out.fail(v.ring + " violates the bound");
    if (!v.witness_bound_holds()) out.fail(v.ring + " has n_e > q^d");
    const bool expect_equality = v.ring != "quadric";
    if (v.equality != expect_equality) out.fail(v.ring + " misclassified");
    for (const auto& w : v.witnesses) {
      const bool finite = v.free_rank == 0;
      if ((BigInt(w.n_e) == w.rank) != finite) out.fail(v.ring + " n_e = q^d iff finite Cl fails at q=" + w.q.str());
    }
  }
  if (out.ok) out.detail = std::to_string(result.verdicts.size()) + " verdicts";
  return out;
}

Outcome linalg_properties() {
  Outcome out;
  std::mt19937_64 rng(500);
  std::uniform_int_distribution<Eigen::Index> dim(1, 4);
  for (int trial = 0; trial < 500 && out.ok; ++trial) {
    const auto r = dim(rng), c = dim(rng);
    const IntMat A = oracle::random_matrix(rng, r, c, 50);
    const auto snf = smith_normal_form(A);
    const std::string tag = "matrix #" + std::to_string(trial);
    if (IntMat(snf.U * A * snf.V) != snf.S) out.fail(tag + ": U A V != S");
    if (abs(determinant(snf.U)) != 1 || abs(determinant(snf.V)) != 1) out.fail(tag + ": certificate not unimodular");
    for (Eigen::Index i = 0; i < snf.S.rows(); ++i)
      for (Eigen::Index j = 0; j < snf.S.cols(); ++j)
        if (i != j && snf.S(i, j) != 0) out.fail(tag + ": S not diagonal");
    const auto d = snf.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      if (d[i] < 0) out.fail(tag + ": negative invariant");
      if (d[i] == 0 ? d[i + 1] != 0 : d[i + 1] % d[i] != 0) out.fail(tag + ": divisibility chain broken");
    }
    if (!d.empty() && d.back() < 0) out.fail(tag + ": negative invariant");
    const IntMat P = oracle::random_unimodular(rng, r);
    const IntMat Q = oracle::random_unimodular(rng, c);
    if (cokernel_invariants(IntMat(P * A * Q)) != cokernel_invariants(A)) out.fail(tag + ": invariants not unimodular-invariant");
  }
  if (out.ok) out.detail = "500 matrices";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "class groups of the builtin families", 1.0, class_groups},
      {2, "closed form 2/3 equals quadric volume", 1.0, singh},
      {3, "exact signatures 1/n and 1", 0.0, exact_volumes},
      {4, "A_{n-1} sequences within envelope, exact at n | q", 30.0, sequence_envelope},
      {5, "free rank equals box-count oracle, q <= 128", 0.0, oracle_equivalence},
      {6, "multiplicities sum to q^d in every decomposition", 0.0, nullptr},
      {7, "twist by q*D2 shifts every summand by D2", 0.0, twist_identity},
      {8, "per-class ratios within 0.05 of 1/n at q = 128", 30.0, per_class_convergence},
      {9, "torsion bound over the corpus, q <= 256", 120.0, corpus_theorem},
      {10, "Smith form property suite", 10.0, linalg_properties},
  };

  // criterion 6 audits the decompositions made by the others, so it reports last
  int failed = 0;
  auto report = [&](const Criterion& c, const Outcome& o, double secs) {
    const bool on_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = o.ok && on_time;
    failed += !pass;
    std::ostringstream t;
    t << std::fixed << std::setprecision(3) << secs << "s";
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << c.id << ": " << c.name << " ("
              << t.str() << (c.limit_s > 0 ? " / limit " + std::to_string(static_cast<int>(c.limit_s)) + "s" : "")
              << ")" << (o.detail.empty() ? "" : " -- " + o.detail) << (on_time ? "" : " -- too slow") << '\n';
  };

  for (const auto& c : criteria) {
    if (!c.run) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(c, o, secs);
  }
  Outcome ranks;
  if (audit.bad > 0) ranks.fail(std::to_string(audit.bad) + " of " + std::to_string(audit.runs) + " runs off");
  else ranks.detail = std::to_string(audit.runs) + " decompositions";
  report(criteria[5], ranks, 0.0);

  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << '\n';
  return failed == 0 ? 0 : 1;
}
