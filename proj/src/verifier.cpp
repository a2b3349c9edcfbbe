#include "torsig/verifier.hpp"

#include "torsig/ring_io.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace torsig {

bool TheoremVerdict::witness_bound_holds() const {
  return std::all_of(witnesses.begin(), witnesses.end(),
                     [](const WitnessRow& w) { return BigInt(w.n_e) <= w.rank; });
}

namespace {

// Levels to enumerate for (spec, p): stop at max_q or at the cap.
struct LevelPlan {
  int last = 0;
  bool truncated = false;
};

LevelPlan plan_levels(const RingSpec& spec, std::int64_t p, int e_max, const VerifyOptions& opts) {
  LevelPlan plan;
  for (int e = 1; e <= e_max; ++e) {
    const BigInt q = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e));
    if (opts.max_q && q > *opts.max_q) break;
    const BigInt rank = boost::multiprecision::pow(q, static_cast<unsigned>(spec.dim()));
    if (rank > opts.cap) {
      if (e == 1)
        throw CapExceeded("ring '" + spec.name + "', p = " + std::to_string(p) + ": q^d = " + rank.str() +
                          " already exceeds the enumeration cap " + std::to_string(opts.cap) +
                          " at e = 1 (raise it with --cap)");
      plan.truncated = true;
      break;
    }
    plan.last = e;
  }
  return plan;
}

DecomposeOptions decompose_options(const VerifyOptions& opts) {
  DecomposeOptions d;
  d.cap = opts.cap;
  d.workers = opts.workers;
  return d;
}

Rational abs_value(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace

TheoremVerdict verify_ring(const RingSpec& spec, std::int64_t p, int e_max, const VerifyOptions& opts) {
  require_valid(spec);
  if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
  const auto plan = plan_levels(spec, p, e_max, opts);
  const auto cg = class_group(spec);

  TheoremVerdict v;
  v.ring = spec.name;
  v.p = p;
  v.e_requested = e_max;
  v.e_reached = plan.last;
  v.truncated_by_cap = plan.truncated;
  v.free_rank = cg.free_rank();
  v.invariant_factors = cg.invariant_factors();
  v.torsion_cardinality = cg.torsion_cardinality();
  v.exact_signature = exact_signature_volume(spec).value;
  if (v.exact_signature <= 0) throw std::logic_error("ring '" + spec.name + "' has non-positive F-signature");
  // |tors| <= 1/s  <=>  |tors| · s <= 1, all exact
  const Rational product = Rational(v.torsion_cardinality) * v.exact_signature;
  v.inequality_holds = product <= 1;
  v.equality = product == 1;

  const auto torsion = torsion_elements(cg, opts.cap);
  for (int e = 1; e <= plan.last; ++e) {
    const auto ctx = FrobeniusContext::make(p, e);
    const auto dec = decompose(spec, cg, WeilDivisor::zero(spec.facet_count()), ctx, decompose_options(opts));
    WitnessRow row;
    row.e = e;
    row.q = ctx.q;
    row.a_e = free_rank(dec);
    row.rank = dec.rank;
    row.s_e = Rational(BigInt(row.a_e), dec.rank);
    for (const auto& c : torsion) row.n_e += multiplicity_of(dec, c);
    v.witnesses.push_back(std::move(row));
  }
  return v;
}

PerClassTable verify_per_class_convergence(const RingSpec& spec, std::int64_t p, int e_max,
                                           const VerifyOptions& opts) {
  require_valid(spec);
  const auto plan = plan_levels(spec, p, e_max, opts);
  const auto cg = class_group(spec);
  const auto torsion = torsion_elements(cg, opts.cap);

  PerClassTable table;
  table.ring = spec.name;
  table.p = p;
  table.exact_signature = exact_signature_volume(spec).value;
  for (const auto& c : torsion) table.classes.push_back({c, {}, {}, {}});

  for (int e = 1; e <= plan.last; ++e) {
    const auto ctx = FrobeniusContext::make(p, e);
    const auto dec = decompose(spec, cg, WeilDivisor::zero(spec.facet_count()), ctx, decompose_options(opts));
    table.levels.push_back(e);
    table.qs.push_back(ctx.q);
    for (auto& row : table.classes) {
      const auto mult = multiplicity_of(dec, row.cls);
      const Rational ratio(BigInt(mult), dec.rank);
      row.multiplicities.push_back(mult);
      row.ratios.push_back(ratio);
      row.deviations.push_back(abs_value(ratio - table.exact_signature));
    }
  }
  table.max_deviation_at_last = 0;
  if (!table.levels.empty())
    for (const auto& row : table.classes)
      table.max_deviation_at_last = std::max(table.max_deviation_at_last, row.deviations.back());

  // e_0: start of the trailing run of levels where every class is present.
  for (auto idx = static_cast<std::ptrdiff_t>(table.levels.size()) - 1; idx >= 0; --idx) {
    const bool all_present = std::all_of(table.classes.begin(), table.classes.end(), [&](const auto& row) {
      return row.multiplicities[static_cast<std::size_t>(idx)] >= 1;
    });
    if (!all_present) break;
    table.observed_e0 = table.levels[static_cast<std::size_t>(idx)];
  }
  return table;
}

bool CorpusResult::has_violation() const {
  return std::any_of(failures.begin(), failures.end(), [](const RingFailure& f) { return f.kind == "violation"; });
}

CorpusResult run_corpus(const std::vector<RingSpec>& rings, const std::vector<std::int64_t>& primes, int e_max,
                        const VerifyOptions& opts, unsigned ring_workers) {
  struct Job {
    const RingSpec* spec;
    std::int64_t p;
    std::optional<TheoremVerdict> verdict;
    std::optional<RingFailure> failure;
  };
  std::vector<Job> jobs;
  for (const auto& spec : rings)
    for (auto p : primes) jobs.push_back({&spec, p, std::nullopt, std::nullopt});

  auto run = [&](Job& job) {
    auto fail = [&](const char* kind, const std::string& msg) {
      job.failure = RingFailure{job.spec->name, job.p, kind, msg};
    };
    try {
      job.verdict = verify_ring(*job.spec, job.p, e_max, opts);
      if (!job.verdict->inequality_holds || !job.verdict->witness_bound_holds())
        fail("violation", "torsion bound violated: |tors| = " + job.verdict->torsion_cardinality.str() +
                              ", s = " + to_string(job.verdict->exact_signature));
    } catch (const CapExceeded& e) {
      fail("cap", e.what());
    } catch (const InputError& e) {
      fail("input", e.what());
    } catch (const std::exception& e) {
      fail("internal", e.what());
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) run(jobs[i]);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(ring_workers, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return std::tie(a.spec->name, a.p) < std::tie(b.spec->name, b.p);
  });
  CorpusResult result;
  for (auto& job : jobs) {
    if (job.verdict) result.verdicts.push_back(std::move(*job.verdict));
    if (job.failure) result.failures.push_back(std::move(*job.failure));
  }
  return result;
}

std::vector<RingSpec> builtin_corpus() {
  std::vector<RingSpec> out;
  for (const auto& name : default_corpus()) out.push_back(builtin_ring(name));
  return out;
}

namespace {

nlohmann::ordered_json integer_json(const BigInt& x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    return x.str();
  return x.convert_to<std::int64_t>();
}

nlohmann::ordered_json vector_json(const SmallVec& v) {
  auto out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string join_factors(const std::vector<BigInt>& factors) {
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? ";" : "") + factors[i].str();
  return out;
}

}  // namespace

nlohmann::ordered_json verdict_to_json(const TheoremVerdict& v) {
  nlohmann::ordered_json j;
  j["ring"] = v.ring;
  j["p"] = v.p;
  j["e_requested"] = v.e_requested;
  j["e_reached"] = v.e_reached;
  j["truncated_by_cap"] = v.truncated_by_cap;
  auto factors = nlohmann::ordered_json::array();
  for (const auto& d : v.invariant_factors) factors.push_back(integer_json(d));
  j["class_group"] = {{"free_rank", v.free_rank}, {"invariant_factors", factors}};
  j["torsion_cardinality"] = integer_json(v.torsion_cardinality);
  j["exact_signature"] = to_string(v.exact_signature);
  j["inverse_signature"] = to_string(Rational(1) / v.exact_signature);
  j["inequality_holds"] = v.inequality_holds;
  j["equality"] = v.equality;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& w : v.witnesses)
    rows.push_back({{"e", w.e},
                    {"q", integer_json(w.q)},
                    {"a_e", w.a_e},
                    {"s_e", to_string(w.s_e)},
                    {"n_e", w.n_e},
                    {"rank", integer_json(w.rank)}});
  j["witnesses"] = std::move(rows);
  return j;
}

nlohmann::ordered_json corpus_to_json(const CorpusResult& result) {
  nlohmann::ordered_json j;
  auto verdicts = nlohmann::ordered_json::array();
  for (const auto& v : result.verdicts) verdicts.push_back(verdict_to_json(v));
  auto failures = nlohmann::ordered_json::array();
  for (const auto& f : result.failures)
    failures.push_back({{"ring", f.ring}, {"p", f.p}, {"kind", f.kind}, {"message", f.message}});
  j["verdicts"] = std::move(verdicts);
  j["failures"] = std::move(failures);
  return j;
}

void write_csv(std::ostream& out, const std::vector<TheoremVerdict>& verdicts) {
  out << "ring,p,e_reached,free_rank,invariant_factors,torsion_cardinality,exact_signature,"
         "inverse_signature,inequality_holds,equality,last_a_e,last_n_e,last_rank\n";
  for (const auto& v : verdicts) {
    out << v.ring << ',' << v.p << ',' << v.e_reached << ',' << v.free_rank << ',' << join_factors(v.invariant_factors)
        << ',' << v.torsion_cardinality << ',' << to_string(v.exact_signature) << ','
        << to_string(Rational(1) / v.exact_signature) << ',' << (v.inequality_holds ? "true" : "false") << ','
        << (v.equality ? "true" : "false") << ',';
    if (v.witnesses.empty())
      out << ",,\n";
    else
      out << v.witnesses.back().a_e << ',' << v.witnesses.back().n_e << ',' << v.witnesses.back().rank << '\n';
  }
}

nlohmann::ordered_json per_class_to_json(const PerClassTable& table) {
  nlohmann::ordered_json j;
  j["ring"] = table.ring;
  j["p"] = table.p;
  j["exact_signature"] = to_string(table.exact_signature);
  j["levels"] = table.levels;
  auto qs = nlohmann::ordered_json::array();
  for (const auto& q : table.qs) qs.push_back(integer_json(q));
  j["q"] = std::move(qs);
  auto classes = nlohmann::ordered_json::array();
  for (const auto& row : table.classes) {
    auto ratios = nlohmann::ordered_json::array();
    auto devs = nlohmann::ordered_json::array();
    for (const auto& r : row.ratios) ratios.push_back(to_string(r));
    for (const auto& r : row.deviations) devs.push_back(to_string(r));
    classes.push_back({{"class", to_string(row.cls)},
                       {"multiplicities", row.multiplicities},
                       {"ratios", ratios},
                       {"deviations", devs}});
  }
  j["classes"] = std::move(classes);
  j["max_deviation_at_last"] = to_string(table.max_deviation_at_last);
  j["observed_e0"] = table.observed_e0 ? nlohmann::ordered_json(*table.observed_e0) : nlohmann::ordered_json();
  return j;
}

nlohmann::ordered_json reproduction_bundle(const RingSpec& spec, std::int64_t p, int e, const VerifyOptions& opts) {
  const auto cg = class_group(spec);
  const auto ctx = FrobeniusContext::make(p, e);
  auto dopts = decompose_options(opts);
  dopts.detail = true;
  const auto dec = decompose(spec, cg, WeilDivisor::zero(spec.facet_count()), ctx, dopts);

  nlohmann::ordered_json j;
  j["ring"] = ring_to_json(spec);
  j["p"] = p;
  j["e"] = e;
  j["q"] = integer_json(ctx.q);
  auto cosets = nlohmann::ordered_json::array();
  for (const auto& c : *dec.detail)
    cosets.push_back({{"numerator", vector_json(c.numerator)},
                      {"divisor", vector_json(c.divisor.coeffs)},
                      {"class", to_string(class_of(cg, c.divisor))}});
  j["cosets"] = std::move(cosets);
  return j;
}

}  // namespace torsig
