#include "torsig/fsignature.hpp"

#include "torsig/polytope.hpp"

namespace torsig {

const char* to_string(SignatureMethod m) {
  switch (m) {
    case SignatureMethod::polytope_volume: return "polytope_volume";
    case SignatureMethod::singh_formula: return "singh_formula";
  }
  return "unknown";
}

std::vector<FSignatureEstimate> signature_sequence(const RingSpec& spec, std::int64_t p, int e_max,
                                                   const std::optional<WeilDivisor>& divisor,
                                                   const DecomposeOptions& opts) {
  const auto cg = class_group(spec);
  std::vector<FSignatureEstimate> out;
  for (int e = 1; e <= e_max; ++e) {
    const auto ctx = FrobeniusContext::make(p, e);
    WeilDivisor base = WeilDivisor::zero(spec.facet_count());
    if (divisor) base = -to_int64(ctx.q) * *divisor;
    const auto dec = decompose(spec, cg, base, ctx, opts);
    FSignatureEstimate est;
    est.ctx = ctx;
    est.a_e = free_rank(dec);
    est.s_e = Rational(BigInt(est.a_e), dec.rank);
    out.push_back(std::move(est));
  }
  return out;
}

ExactFSignature exact_signature_volume(const RingSpec& spec) {
  if (spec.dim() > 4)
    throw InputError("exact volume supports dimension <= 4, ring '" + spec.name + "' has " +
                     std::to_string(spec.dim()));
  const Rational volume = polytope_volume(unit_facet_polytope(spec), spec.dim());
  return {volume / Rational(spec.lattice.covolume()), SignatureMethod::polytope_volume};
}

ExactFSignature singh_determinantal_signature(std::int64_t s, std::int64_t d) {
  if (s < 1 || d < 1) throw InputError("singh formula needs s >= 1 and d >= 1");
  BigInt sum = 0;
  BigInt binom = 1;  // C(d+1, i)
  for (std::int64_t i = 0; i <= s; ++i) {
    const BigInt term = binom * boost::multiprecision::pow(BigInt(s - i), static_cast<unsigned>(d));
    if (i % 2 == 0) sum += term; else sum -= term;
    binom = binom * (d + 1 - i) / (i + 1);
  }
  BigInt factorial = 1;
  for (std::int64_t i = 2; i <= d; ++i) factorial *= i;
  return {Rational(sum, factorial), SignatureMethod::singh_formula};
}

ConvergenceReport convergence_report(const std::vector<FSignatureEstimate>& seq,
                                     const std::optional<ExactFSignature>& exact,
                                     std::optional<std::int64_t> an_parameter) {
  ConvergenceReport report;
  for (const auto& est : seq) {
    ConvergenceRow row;
    row.e = est.ctx.e;
    row.q = est.ctx.q;
    row.s_e = est.s_e;
    if (exact) {
      Rational dev = est.s_e - exact->value;
      row.deviation = dev < 0 ? Rational(-dev) : dev;
      if (!report.max_deviation || *row.deviation > *report.max_deviation) report.max_deviation = row.deviation;
    }
    if (an_parameter) {
      const BigInt n = *an_parameter;
      const BigInt& q = est.ctx.q;
      row.envelope = Rational(2 * q * n + n * n + 2 * q, q * q);
      Rational gap = est.s_e - Rational(1, n);
      if (gap < 0) gap = -gap;
      row.within_envelope = gap <= *row.envelope;
      report.all_within_envelope = report.all_within_envelope && row.within_envelope;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace torsig
