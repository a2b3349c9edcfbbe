#include "torsig/frobenius_decomp.hpp"

#include "torsig/exact_linalg.hpp"
#include "torsig/polytope.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

namespace torsig {

FrobeniusContext FrobeniusContext::make(std::int64_t p, int e) {
  if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
  if (e < 1) throw InputError("e must be >= 1, got " + std::to_string(e));
  FrobeniusContext ctx;
  ctx.p = p;
  ctx.e = e;
  ctx.q = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e));
  return ctx;
}

std::uint64_t FrobeniusDecomposition::total_multiplicity() const {
  std::uint64_t total = 0;
  for (const auto& [cls, mult] : summands) total += mult;
  return total;
}

namespace {

// Summand divisors are counted by a mixed-radix key over the per-facet
// range [lo_i, hi_i] of D_w(i); classes are resolved once per distinct key.
struct KeySpace {
  SmallVec lo;
  SmallVec stride;
  std::uint64_t size = 1;

  std::uint64_t key(const SmallVec& divisor) const {
    std::uint64_t k = 0;
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      k += static_cast<std::uint64_t>(divisor(i) - lo(i)) * static_cast<std::uint64_t>(stride(i));
    return k;
  }

  SmallVec decode(std::uint64_t k) const {
    SmallVec out(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      out(i) = lo(i) + static_cast<std::int64_t>(k / static_cast<std::uint64_t>(stride(i)));
      k %= static_cast<std::uint64_t>(stride(i));
    }
    return out;
  }
};

constexpr std::uint64_t kDenseKeyLimit = std::uint64_t{1} << 16;

struct Counter {
  std::vector<std::uint64_t> dense;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse;
  bool use_dense;

  explicit Counter(std::uint64_t keys) : use_dense(keys <= kDenseKeyLimit) {
    if (use_dense) dense.assign(keys, 0);
  }
  void add(std::uint64_t k, std::uint64_t n = 1) {
    if (use_dense)
      dense[k] += n;
    else
      sparse[k] += n;
  }
  void merge(const Counter& other) {
    if (use_dense)
      for (std::size_t k = 0; k < dense.size(); ++k) dense[k] += other.dense[k];
    else
      for (const auto& [k, n] : other.sparse) sparse[k] += n;
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    if (use_dense) {
      for (std::size_t k = 0; k < dense.size(); ++k)
        if (dense[k]) fn(static_cast<std::uint64_t>(k), dense[k]);
    } else {
      for (const auto& [k, n] : sparse) fn(k, n);
    }
  }
};

struct Enumeration {
  std::int64_t q;
  Eigen::Index d;
  Eigen::Index m;
  SmallMat pairings;  // d x m, facet values on the Hermite basis rows
  SmallMat hermite;   // d x d
  SmallVec base;      // m
  KeySpace keys;
};

// Enumerates coset indices [begin, end) in odometer order (last digit fastest).
void enumerate_range(const Enumeration& en, std::uint64_t begin, std::uint64_t end, Counter& counter,
                     std::vector<CosetSummand>* detail) {
  if (begin >= end) return;
  const auto d = en.d;
  const auto q = en.q;
  std::vector<std::int64_t> digits(static_cast<std::size_t>(d));
  {
    std::uint64_t t = begin;
    for (Eigen::Index j = d - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(t % static_cast<std::uint64_t>(q));
      t /= static_cast<std::uint64_t>(q);
    }
  }
  SmallVec value = en.base;
  SmallVec numerator = SmallVec::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    value += digits[static_cast<std::size_t>(j)] * en.pairings.row(j).transpose();
    numerator += digits[static_cast<std::size_t>(j)] * en.hermite.row(j).transpose();
  }
  SmallVec divisor(en.m);
  for (std::uint64_t t = begin; t < end; ++t) {
    for (Eigen::Index i = 0; i < en.m; ++i) divisor(i) = floor_div(value(i), q);
    counter.add(en.keys.key(divisor));
    if (detail) (*detail)[t] = CosetSummand{numerator, WeilDivisor(divisor)};

    Eigen::Index j = d - 1;
    while (j >= 0) {
      auto& digit = digits[static_cast<std::size_t>(j)];
      if (digit + 1 < q) {
        ++digit;
        value += en.pairings.row(j).transpose();
        if (detail) numerator += en.hermite.row(j).transpose();
        break;
      }
      value -= (q - 1) * en.pairings.row(j).transpose();
      if (detail) numerator -= (q - 1) * en.hermite.row(j).transpose();
      digit = 0;
      --j;
    }
  }
}

}  // namespace

FrobeniusDecomposition decompose(const RingSpec& spec, const ClassGroupData& cg,
                                 const WeilDivisor& base, const FrobeniusContext& ctx,
                                 const DecomposeOptions& opts) {
  if (base.size() != spec.facet_count())
    throw InputError("divisor has " + std::to_string(base.size()) + " coefficients, ring '" + spec.name +
                     "' has " + std::to_string(spec.facet_count()) + " facets");
  const Eigen::Index d = spec.dim();
  const Eigen::Index m = spec.facet_count();
  const BigInt rank = boost::multiprecision::pow(ctx.q, static_cast<unsigned>(d));
  if (rank > opts.cap)
    throw CapExceeded("ring '" + spec.name + "': q^d = " + rank.str() + " cosets exceed the enumeration cap " +
                      std::to_string(opts.cap) + " (raise it with --cap)");

  Enumeration en;
  en.q = to_int64(ctx.q);
  en.d = d;
  en.m = m;
  const IntMat hermite = canonical_basis(spec.lattice);
  const IntMat pairings = basis_pairings(spec, hermite);
  en.pairings.resize(d, m);
  en.hermite.resize(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) en.pairings(j, i) = to_int64(pairings(j, i));
    for (Eigen::Index k = 0; k < d; ++k) en.hermite(j, k) = to_int64(hermite(j, k));
  }
  en.base = base.coeffs;

  // Bound every intermediate value before entering the machine-word loop.
  en.keys.lo.resize(m);
  en.keys.stride.resize(m);
  SmallVec hi(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    BigInt low = base.coeffs(i), high = base.coeffs(i);
    BigInt magnitude = boost::multiprecision::abs(BigInt(base.coeffs(i)));
    for (Eigen::Index j = 0; j < d; ++j) {
      const BigInt step = BigInt(en.q - 1) * pairings(j, i);
      if (step < 0) low += step; else high += step;
      magnitude += boost::multiprecision::abs(step);
    }
    if (magnitude > (BigInt(1) << 60)) throw std::overflow_error("decompose: facet values exceed 60 bits");
    en.keys.lo(i) = to_int64(floor_div(low, BigInt(en.q)));
    hi(i) = to_int64(floor_div(high, BigInt(en.q)));
  }
  BigInt key_count = 1;
  for (Eigen::Index i = m - 1; i >= 0; --i) {
    en.keys.stride(i) = to_int64(key_count);
    key_count *= hi(i) - en.keys.lo(i) + 1;
  }
  if (key_count > (BigInt(1) << 62)) throw std::overflow_error("decompose: summand divisor range too wide");
  en.keys.size = key_count.convert_to<std::uint64_t>();

  const std::uint64_t total = rank.convert_to<std::uint64_t>();
  std::optional<std::vector<CosetSummand>> detail;
  if (opts.detail) detail.emplace(total);

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(total)));
  std::vector<Counter> counters(workers, Counter(en.keys.size));
  if (workers == 1) {
    enumerate_range(en, 0, total, counters[0], detail ? &*detail : nullptr);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers;
      const std::uint64_t end = total * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] {
        enumerate_range(en, begin, end, counters[w], detail ? &*detail : nullptr);
      });
    }
    for (auto& t : threads) t.join();
  }
  for (unsigned w = 1; w < workers; ++w) counters[0].merge(counters[w]);

  FrobeniusDecomposition dec;
  dec.ctx = ctx;
  dec.base_divisor = base;
  dec.base_class = class_of(cg, base);
  dec.rank = rank;
  counters[0].for_each([&](std::uint64_t key, std::uint64_t n) {
    dec.summands[class_of(cg, WeilDivisor(en.keys.decode(key)))] += n;
  });
  dec.detail = std::move(detail);
  return dec;
}

FrobeniusDecomposition decompose(const RingSpec& spec, const WeilDivisor& base,
                                 const FrobeniusContext& ctx, const DecomposeOptions& opts) {
  return decompose(spec, class_group(spec), base, ctx, opts);
}

std::uint64_t multiplicity_of(const FrobeniusDecomposition& dec, const ClassElement& c) {
  const auto it = dec.summands.find(c);
  return it == dec.summands.end() ? 0 : it->second;
}

std::uint64_t free_rank(const FrobeniusDecomposition& dec) {
  for (const auto& [cls, mult] : dec.summands)
    if (cls.is_zero()) return mult;
  return 0;
}

std::uint64_t simultaneous_torsion_count(const FrobeniusDecomposition& dec, const ClassGroupData& cg,
                                         std::uint64_t cap) {
  std::uint64_t n = 0;
  for (const auto& c : torsion_elements(cg, cap)) n += multiplicity_of(dec, c);
  return n;
}

std::uint64_t box_count_oracle(const RingSpec& spec, const FrobeniusContext& ctx, std::uint64_t cap) {
  const Eigen::Index d = spec.dim();
  const auto vertices = enumerate_vertices(unit_facet_polytope(spec), d);
  if (vertices.empty()) throw std::logic_error("box_count_oracle: empty facet polytope");

  // Integer box containing q·P.
  SmallVec lo(d), hi(d);
  BigInt points = 1;
  for (Eigen::Index j = 0; j < d; ++j) {
    Rational vmin = vertices.front()(j), vmax = vertices.front()(j);
    for (const auto& v : vertices) {
      vmin = std::min(vmin, v(j));
      vmax = std::max(vmax, v(j));
    }
    lo(j) = to_int64(floor(vmin * Rational(ctx.q)));
    hi(j) = to_int64(-floor(-vmax * Rational(ctx.q))) + 1;
    points *= hi(j) - lo(j);
  }
  if (points > cap)
    throw CapExceeded("ring '" + spec.name + "': box oracle would visit " + points.str() +
                      " points, above the enumeration cap " + std::to_string(cap));

  const LatticeMembership member(spec.lattice);
  const ScaledFacets facets(spec);
  const std::int64_t q = to_int64(ctx.q);
  std::uint64_t count = 0;
  SmallVec u = lo;
  while (true) {
    bool inside = true;
    for (Eigen::Index i = 0; i < facets.numerators.rows() && inside; ++i) {
      const std::int64_t v = facets.numerators.row(i).dot(u);
      inside = v >= 0 && v < q * facets.denominators(i);
    }
    if (inside && member.contains(u)) ++count;

    Eigen::Index k = d;
    while (k > 0) {
      --k;
      if (++u(k) < hi(k)) break;
      u(k) = lo(k);
      if (k == 0) return count;
    }
  }
}

}  // namespace torsig
