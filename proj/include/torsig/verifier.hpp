#pragma once

// Checks |tors Cl(R)| <= 1/s(R) on explicit rings, with the per-level
// quantities a_e, n_e and q^d recorded as witnesses.

#include "torsig/fsignature.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace torsig {

struct VerifyOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  unsigned workers = 1;          // per-decomposition threads
  std::optional<BigInt> max_q;   // stop once q exceeds this
};

struct WitnessRow {
  int e = 0;
  BigInt q;
  std::uint64_t a_e = 0;
  Rational s_e;
  std::uint64_t n_e = 0;
  BigInt rank;  // q^d
};

struct TheoremVerdict {
  std::string ring;
  std::int64_t p = 0;
  int e_requested = 0;
  int e_reached = 0;              // levels actually enumerated
  bool truncated_by_cap = false;  // later levels skipped because q^d > cap
  Eigen::Index free_rank = 0;
  std::vector<BigInt> invariant_factors;
  BigInt torsion_cardinality;
  Rational exact_signature;
  bool inequality_holds = false;  // |tors| <= 1/s, exact
  bool equality = false;          // |tors| · s = 1
  std::vector<WitnessRow> witnesses;

  /// n_e <= q^d in every witness row.
  bool witness_bound_holds() const;
};

/// Levels e = 1..e_max are enumerated while q^d stays within the cap (and q
/// within max_q). Throws CapExceeded if even e = 1 is over the cap.
TheoremVerdict verify_ring(const RingSpec& spec, std::int64_t p, int e_max, const VerifyOptions& opts = {});

struct ClassConvergence {
  ClassElement cls;
  std::vector<std::uint64_t> multiplicities;  // per level
  std::vector<Rational> ratios;               // multiplicity / q^d
  std::vector<Rational> deviations;           // |ratio - s(R)|
};

struct PerClassTable {
  std::string ring;
  std::int64_t p = 0;
  Rational exact_signature;
  std::vector<int> levels;
  std::vector<BigInt> qs;
  std::vector<ClassConvergence> classes;
  Rational max_deviation_at_last;
  /// Smallest tested e from which every torsion class occurs at every
  /// tested level; nullopt when some class is missing at the last level.
  std::optional<int> observed_e0;
};

PerClassTable verify_per_class_convergence(const RingSpec& spec, std::int64_t p, int e_max,
                                           const VerifyOptions& opts = {});

struct RingFailure {
  std::string ring;
  std::int64_t p = 0;
  std::string kind;  // "cap", "input", "violation", "internal"
  std::string message;
};

struct CorpusResult {
  std::vector<TheoremVerdict> verdicts;  // sorted by (ring, p)
  std::vector<RingFailure> failures;     // sorted by (ring, p)

  bool has_violation() const;
  bool ok() const { return failures.empty(); }
};

/// Verifies every (ring, p) pair; failures are collected and the run goes on.
/// Rings are processed on `ring_workers` threads.
CorpusResult run_corpus(const std::vector<RingSpec>& rings, const std::vector<std::int64_t>& primes, int e_max,
                        const VerifyOptions& opts = {}, unsigned ring_workers = 1);

/// Builtin corpus: an:2..6, poly:1..3, quadric, veronese:2..6.
std::vector<RingSpec> builtin_corpus();

// Report emission. Rationals are always exact "a/b" strings.
nlohmann::ordered_json verdict_to_json(const TheoremVerdict& v);
nlohmann::ordered_json corpus_to_json(const CorpusResult& result);
void write_csv(std::ostream& out, const std::vector<TheoremVerdict>& verdicts);
nlohmann::ordered_json per_class_to_json(const PerClassTable& table);

/// Everything needed to replay a failing verdict: ring, p, e and the coset
/// detail of F^e_* R.
nlohmann::ordered_json reproduction_bundle(const RingSpec& spec, std::int64_t p, int e,
                                           const VerifyOptions& opts = {});

}  // namespace torsig
