#include "torsig/ring_io.hpp"
#include "torsig/verifier.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace torsig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

constexpr const char* kCapEnv = "TORSIG_ENUM_CAP";

struct RingSource {
  std::string builtin;
  std::string file;

  void attach(CLI::App* cmd) {
    auto* b = cmd->add_option("--builtin", builtin, "builtin ring, e.g. an:4, veronese:3, poly:2, quadric");
    auto* f = cmd->add_option("--ring", file, "ring definition file (JSON)");
    b->excludes(f);
  }

  bool given() const { return !builtin.empty() || !file.empty(); }

  RingSpec load() const {
    if (!given()) throw InputError("no ring given: use --builtin NAME or --ring FILE");
    RingSpec spec = builtin.empty() ? load_ring_file(file) : builtin_ring(builtin);
    require_valid(spec);
    return spec;
  }
};

std::uint64_t cap_from_env() {
  const char* raw = std::getenv(kCapEnv);
  if (!raw || !*raw) return kDefaultEnumerationCap;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string(kCapEnv) + " must be a non-negative integer, got '" + raw + "'");
  }
}

std::string decimal(const Rational& r) {
  std::ostringstream out;
  out << std::setprecision(6) << r.convert_to<double>();
  return out.str();
}

std::string join(const std::vector<BigInt>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i].str();
  return out;
}

WeilDivisor parse_divisor(const std::string& text, Eigen::Index m) {
  std::vector<std::int64_t> coeffs;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const Rational r = parse_rational(item);
    if (!is_integer(r)) throw InputError("divisor coefficient '" + item + "' is not an integer");
    coeffs.push_back(to_int64(numerator(r)));
  }
  if (static_cast<Eigen::Index>(coeffs.size()) != m)
    throw InputError("divisor has " + std::to_string(coeffs.size()) + " coefficients, ring has " +
                     std::to_string(m) + " facets");
  SmallVec v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = coeffs[static_cast<std::size_t>(i)];
  return WeilDivisor(v);
}

std::string summand_table(const FrobeniusDecomposition& dec) {
  std::string out = "{";
  bool first = true;
  for (const auto& [cls, mult] : dec.summands) {
    out += (first ? "" : ", ") + to_string(cls) + ":" + std::to_string(mult);
    first = false;
  }
  return out + "}";
}

int cmd_classgroup(const RingSource& src, const std::string& format) {
  const auto spec = src.load();
  const auto cg = class_group(spec);
  if (format == "json") {
    nlohmann::ordered_json j;
    j["ring"] = spec.name;
    j["group"] = cg.describe();
    j["free_rank"] = cg.free_rank();
    auto factors = nlohmann::ordered_json::array();
    for (const auto& d : cg.invariant_factors()) factors.push_back(d.str());
    j["invariant_factors"] = factors;
    j["torsion_cardinality"] = cg.torsion_cardinality().str();
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "ring: " << spec.name << '\n'
            << "class group: " << cg.describe() << '\n'
            << "free rank: " << cg.free_rank() << '\n'
            << "invariant factors: " << (cg.invariant_factors().empty() ? "none" : join(cg.invariant_factors(), " "))
            << '\n'
            << "torsion: " << cg.torsion_cardinality() << '\n';
  return kExitOk;
}

int cmd_fsig(const RingSource& src, std::int64_t p, int e_max, bool exact, const std::string& format,
             const DecomposeOptions& opts) {
  const auto spec = src.load();
  const auto seq = signature_sequence(spec, p, e_max, std::nullopt, opts);
  std::optional<ExactFSignature> value;
  if (exact) value = exact_signature_volume(spec);
  const auto report = convergence_report(seq, value, an_singularity_parameter(spec));

  if (format == "json") {
    nlohmann::ordered_json j;
    j["ring"] = spec.name;
    j["p"] = p;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < seq.size(); ++k) {
      nlohmann::ordered_json row;
      row["e"] = seq[k].ctx.e;
      row["q"] = seq[k].ctx.q.str();
      row["a_e"] = seq[k].a_e;
      row["s_e"] = to_string(seq[k].s_e);
      if (report.rows[k].deviation) row["deviation"] = to_string(*report.rows[k].deviation);
      if (report.rows[k].envelope) row["envelope"] = to_string(*report.rows[k].envelope);
      rows.push_back(row);
    }
    j["sequence"] = rows;
    if (value) j["exact"] = {{"value", to_string(value->value)}, {"method", to_string(value->method)}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "ring: " << spec.name << "  p = " << p << '\n';
    std::cout << std::left << std::setw(4) << "e" << std::setw(10) << "q" << std::setw(14) << "a_e"
              << std::setw(24) << "s_e" << "approx\n";
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const auto& est = seq[k];
      const BigInt rank = boost::multiprecision::pow(est.ctx.q, static_cast<unsigned>(spec.dim()));
      std::cout << std::setw(4) << est.ctx.e << std::setw(10) << est.ctx.q.str() << std::setw(14) << est.a_e
                << std::setw(24) << (std::to_string(est.a_e) + "/" + rank.str()) << decimal(est.s_e);
      if (report.rows[k].deviation) std::cout << "  dev " << to_string(*report.rows[k].deviation);
      if (report.rows[k].envelope && !report.rows[k].within_envelope) std::cout << "  OUTSIDE ENVELOPE";
      std::cout << '\n';
    }
    if (value) std::cout << "exact: " << to_string(value->value) << " (" << to_string(value->method) << ")\n";
  }
  return report.all_within_envelope ? kExitOk : kExitViolation;
}

int cmd_decompose(const RingSource& src, std::int64_t p, int e, const std::string& divisor, bool detail,
                  const std::string& format, DecomposeOptions opts) {
  const auto spec = src.load();
  const auto cg = class_group(spec);
  const auto base = divisor.empty() ? WeilDivisor::zero(spec.facet_count()) : parse_divisor(divisor, spec.facet_count());
  opts.detail = detail;
  const auto ctx = FrobeniusContext::make(p, e);
  const auto dec = decompose(spec, cg, base, ctx, opts);

  if (format == "json") {
    nlohmann::ordered_json j;
    j["ring"] = spec.name;
    j["p"] = p;
    j["e"] = e;
    j["q"] = ctx.q.str();
    j["divisor"] = to_string(base);
    j["class"] = to_string(dec.base_class);
    auto summands = nlohmann::ordered_json::array();
    for (const auto& [cls, mult] : dec.summands) summands.push_back({{"class", to_string(cls)}, {"multiplicity", mult}});
    j["summands"] = summands;
    j["total"] = dec.total_multiplicity();
    j["rank"] = dec.rank.str();
    if (dec.detail) {
      auto cosets = nlohmann::ordered_json::array();
      for (const auto& c : *dec.detail)
        cosets.push_back({{"numerator", std::vector<std::int64_t>(c.numerator.begin(), c.numerator.end())},
                          {"divisor", to_string(c.divisor)},
                          {"class", to_string(class_of(cg, c.divisor))}});
      j["cosets"] = cosets;
    }
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "ring: " << spec.name << "  q = " << ctx.q << "  D = " << to_string(base) << " (class "
            << to_string(dec.base_class) << ")\n";
  std::cout << summand_table(dec) << '\n';
  std::cout << "total: " << dec.total_multiplicity() << " = q^" << spec.dim() << '\n';
  if (!dec.base_class.is_zero())
    std::cout << "note: D is not principal, so the class-0 count is not the free rank of F_*R\n";
  if (dec.detail) {
    for (const auto& c : *dec.detail) {
      std::cout << "  (";
      for (Eigen::Index i = 0; i < c.numerator.size(); ++i) std::cout << (i ? "," : "") << c.numerator(i);
      std::cout << ")/" << ctx.q << " -> " << to_string(c.divisor) << "  class " << to_string(class_of(cg, c.divisor))
                << '\n';
    }
  }
  return kExitOk;
}

void print_text(std::ostream& out, const CorpusResult& result) {
  for (const auto& v : result.verdicts) {
    out << std::left << std::setw(12) << v.ring << " p=" << std::setw(3) << v.p << " e<=" << v.e_reached
        << (v.truncated_by_cap ? "*" : "") << "  |tors| = " << v.torsion_cardinality
        << "  s = " << to_string(v.exact_signature) << "  1/s = " << to_string(Rational(1) / v.exact_signature)
        << "  " << (!v.inequality_holds ? "VIOLATED" : v.equality ? "equality" : "strict") << '\n';
  }
  for (const auto& f : result.failures) out << "FAIL " << f.ring << " p=" << f.p << " [" << f.kind << "] " << f.message << '\n';
}

int cmd_verify(bool corpus, const RingSource& src, const std::vector<std::int64_t>& primes, int e_max,
               const std::string& out_path, std::string format, const VerifyOptions& opts, unsigned ring_workers) {
  std::vector<RingSpec> rings;
  if (corpus) {
    if (src.given()) throw InputError("--corpus cannot be combined with --builtin or --ring");
    rings = builtin_corpus();
  } else {
    rings.push_back(src.load());
  }
  if (format.empty()) {
    format = "text";
    if (out_path.ends_with(".json")) format = "json";
    if (out_path.ends_with(".csv")) format = "csv";
  }

  const auto result = run_corpus(rings, primes, e_max, opts, ring_workers);

  std::ostringstream body;
  if (format == "json")
    body << corpus_to_json(result).dump(2) << '\n';
  else if (format == "csv")
    write_csv(body, result.verdicts);
  else
    print_text(body, result);

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw InputError("cannot write '" + out_path + "'");
    file << body.str();
    print_text(std::cerr, result);
  }

  if (result.has_violation()) {
    // replay data for each violating (ring, p)
    const std::string bundle_path = (out_path.empty() ? std::string("torsig") : out_path) + ".repro.json";
    auto bundles = nlohmann::ordered_json::array();
    for (const auto& f : result.failures) {
      if (f.kind != "violation") continue;
      for (const auto& spec : rings)
        if (spec.name == f.ring) {
          const auto it = std::find_if(result.verdicts.begin(), result.verdicts.end(),
                                       [&](const auto& v) { return v.ring == f.ring && v.p == f.p; });
          const int e = it != result.verdicts.end() ? std::max(1, it->e_reached) : 1;
          bundles.push_back(reproduction_bundle(spec, f.p, e, opts));
        }
    }
    std::ofstream(bundle_path) << bundles.dump(2) << '\n';
    std::cerr << "theorem violation: reproduction bundle written to " << bundle_path << '\n';
    return kExitViolation;
  }
  const bool input = std::any_of(result.failures.begin(), result.failures.end(), [](const auto& f) { return f.kind != "cap"; });
  if (input) return kExitInput;
  if (!result.failures.empty()) return kExitCap;
  return kExitOk;
}

int cmd_perclass(const RingSource& src, std::int64_t p, int e_max, const VerifyOptions& opts) {
  const auto table = verify_per_class_convergence(src.load(), p, e_max, opts);
  std::cout << per_class_to_json(table).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torsig: divisor class groups and F-signatures of toric rings"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> cap;
  unsigned workers = 1;
  app.add_option("--cap", cap, std::string("max q^d per decomposition (default from ") + kCapEnv + ", else 2^24)")
      ->check(CLI::Range(std::uint64_t{0}, std::numeric_limits<std::uint64_t>::max()));
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  std::string format;
  const auto formats = CLI::IsMember({"text", "json", "csv"});

  RingSource src;
  std::int64_t p = 2;
  int e = 1;

  auto* classgroup = app.add_subcommand("classgroup", "class group of a ring");
  src.attach(classgroup);
  classgroup->add_option("--format", format)->check(formats);

  auto* fsig = app.add_subcommand("fsig", "F-signature sequence s_e = a_e / q^d");
  src.attach(fsig);
  bool exact = false;
  int fsig_e = 3;
  fsig->add_option("-p", p, "prime")->check(CLI::PositiveNumber);
  fsig->add_option("-e", fsig_e, "largest level")->check(CLI::PositiveNumber);
  fsig->add_flag("--exact", exact, "also print the exact signature");
  fsig->add_option("--format", format)->check(formats);

  auto* decomp = app.add_subcommand("decompose", "class multiplicities of F^e_* R(D)");
  src.attach(decomp);
  std::string divisor;
  bool detail = false;
  decomp->add_option("-p", p, "prime")->check(CLI::PositiveNumber);
  decomp->add_option("-e", e, "level")->check(CLI::PositiveNumber);
  decomp->add_option("--divisor", divisor, "comma separated facet coefficients");
  decomp->add_flag("--detail", detail, "print every coset");
  decomp->add_option("--format", format)->check(formats);

  auto* verify = app.add_subcommand("verify", "check |tors Cl(R)| <= 1/s(R)");
  src.attach(verify);
  bool corpus = false;
  std::vector<std::int64_t> primes{2, 3, 5};
  int verify_e = 4;
  std::string out_path;
  std::optional<std::int64_t> max_q;
  unsigned ring_workers = 1;
  verify->add_flag("--corpus", corpus, "all builtin rings");
  verify->add_option("-p", primes, "primes, comma separated")->delimiter(',');
  verify->add_option("-e", verify_e, "largest level")->check(CLI::PositiveNumber);
  verify->add_option("--out", out_path, "report file");
  verify->add_option("--format", format)->check(formats);
  verify->add_option("--max-q", max_q, "skip levels with q above this")->check(CLI::PositiveNumber);
  verify->add_option("--ring-workers", ring_workers, "rings verified in parallel")->check(CLI::PositiveNumber);

  auto* perclass = app.add_subcommand("perclass", "per-class multiplicity ratios against s(R)");
  src.attach(perclass);
  int perclass_e = 4;
  perclass->add_option("-p", p, "prime")->check(CLI::PositiveNumber);
  perclass->add_option("-e", perclass_e, "largest level")->check(CLI::PositiveNumber);

  auto* ring = app.add_subcommand("ring", "print the ring definition as JSON");
  src.attach(ring);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    DecomposeOptions dopts;
    dopts.cap = cap ? *cap : cap_from_env();
    dopts.workers = workers;
    VerifyOptions vopts;
    vopts.cap = dopts.cap;
    vopts.workers = workers;
    if (max_q) vopts.max_q = BigInt(*max_q);

    if (*classgroup) return cmd_classgroup(src, format);
    if (*fsig) return cmd_fsig(src, p, fsig_e, exact, format, dopts);
    if (*decomp) return cmd_decompose(src, p, e, divisor, detail, format, dopts);
    if (*verify) return cmd_verify(corpus, src, primes, verify_e, out_path, format, vopts, ring_workers);
    if (*perclass) return cmd_perclass(src, p, perclass_e, vopts);
    if (*ring) {
      std::cout << ring_to_json(src.load()).dump(2) << '\n';
      return kExitOk;
    }
  } catch (const CapExceeded& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitCap;
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kExitViolation;
  }
  return kExitInput;
}
