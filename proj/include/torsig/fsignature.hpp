#pragma once

#include "torsig/frobenius_decomp.hpp"

#include <optional>
#include <vector>

namespace torsig {

/// s_e = a_e / q^d for one Frobenius level.
struct FSignatureEstimate {
  FrobeniusContext ctx;
  std::uint64_t a_e = 0;
  Rational s_e;
};

enum class SignatureMethod { polytope_volume, singh_formula };

struct ExactFSignature {
  Rational value;
  SignatureMethod method;
};

const char* to_string(SignatureMethod m);

/// s_e for e = 1..e_max. Without a divisor a_e is the free rank of F^e_* R.
/// With a divisor D, a_e counts R(D) summands of F^e_* R, computed as the
/// free rank of F^e_* R(-q·D).
std::vector<FSignatureEstimate> signature_sequence(const RingSpec& spec, std::int64_t p, int e_max,
                                                   const std::optional<WeilDivisor>& divisor = std::nullopt,
                                                   const DecomposeOptions& opts = {});

/// vol{u : 0 <= facet_i(u) < 1} / covolume(L), exact. Requires d <= 4.
ExactFSignature exact_signature_volume(const RingSpec& spec);

/// (1/d!) sum_{i=0}^{s} (-1)^i C(d+1, i) (s-i)^d, the F-signature of the
/// determinantal ring of maximal minors with the given s and d.
ExactFSignature singh_determinantal_signature(std::int64_t s, std::int64_t d);

struct ConvergenceRow {
  int e = 0;
  BigInt q;
  Rational s_e;
  std::optional<Rational> deviation;  // |s_e - exact|
  std::optional<Rational> envelope;   // (2qn + n^2 + 2q) / q^2 for an_singularity(n)
  bool within_envelope = true;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::optional<Rational> max_deviation;
  bool all_within_envelope = true;
};

/// `an_parameter` enables the A_{n-1} envelope |s_e - 1/n| <= (2qn + n^2 + 2q)/q^2.
ConvergenceReport convergence_report(const std::vector<FSignatureEstimate>& seq,
                                     const std::optional<ExactFSignature>& exact,
                                     std::optional<std::int64_t> an_parameter = std::nullopt);

}  // namespace torsig
