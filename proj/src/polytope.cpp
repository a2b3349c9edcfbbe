#include "torsig/polytope.hpp"

#include "torsig/exact_linalg.hpp"
#include "torsig/toric_model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace torsig {

bool lex_less(const RatVec& a, const RatVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(Eigen::Index n, Eigen::Index k, Fn&& fn) {
  if (k > n) return;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(idx);
    Eigen::Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

bool satisfies(const HalfSpace& h, const RatVec& x) { return h.normal.dot(x) <= h.offset; }
bool tight(const HalfSpace& h, const RatVec& x) { return h.normal.dot(x) == h.offset; }

RatVec centroid(const std::vector<RatVec>& pts) {
  RatVec c = RatVec::Zero(pts.front().size());
  for (const auto& p : pts) c += p;
  return c / Rational(static_cast<long>(pts.size()));
}

class Triangulator {
 public:
  Triangulator(const std::vector<HalfSpace>& constraints, std::vector<RatVec> vertices)
      : constraints_(constraints), vertices_(std::move(vertices)) {}

  // Appends the simplices of a fan triangulation of the face spanned by
  // `face` (vertex ids, dimension k). Each simplex is a list of k+1 points.
  void triangulate(const std::vector<std::size_t>& face, Eigen::Index k,
                   std::vector<std::vector<RatVec>>& out) const {
    if (k == 0) {
      out.push_back({vertices_[face.front()]});
      return;
    }
    std::vector<RatVec> pts;
    for (auto v : face) pts.push_back(vertices_[v]);
    const RatVec apex = centroid(pts);

    std::set<std::vector<std::size_t>> subfaces;
    for (const auto& h : constraints_) {
      std::vector<std::size_t> sub;
      std::vector<RatVec> sub_pts;
      for (auto v : face)
        if (tight(h, vertices_[v])) {
          sub.push_back(v);
          sub_pts.push_back(vertices_[v]);
        }
      if (static_cast<Eigen::Index>(sub.size()) < k) continue;
      if (affine_dimension(sub_pts) != k - 1) continue;
      subfaces.insert(std::move(sub));
    }
    for (const auto& sub : subfaces) {
      std::vector<std::vector<RatVec>> lower;
      triangulate(sub, k - 1, lower);
      for (auto& simplex : lower) {
        simplex.insert(simplex.begin(), apex);
        out.push_back(std::move(simplex));
      }
    }
  }

 private:
  const std::vector<HalfSpace>& constraints_;
  std::vector<RatVec> vertices_;
};

}  // namespace

std::vector<RatVec> enumerate_vertices(const std::vector<HalfSpace>& constraints,
                                       Eigen::Index dim) {
  std::vector<RatVec> found;
  auto less = [](const RatVec& a, const RatVec& b) { return lex_less(a, b); };
  std::set<RatVec, decltype(less)> unique(less);
  for_each_subset(static_cast<Eigen::Index>(constraints.size()), dim,
                  [&](const std::vector<Eigen::Index>& rows) {
                    RatMat A(dim, dim);
                    RatVec b(dim);
                    for (Eigen::Index r = 0; r < dim; ++r) {
                      const auto& h = constraints[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
                      A.row(r) = h.normal.transpose();
                      b(r) = h.offset;
                    }
                    auto x = solve_exact(A, b);
                    if (!x) return;
                    for (const auto& h : constraints)
                      if (!satisfies(h, *x)) return;
                    unique.insert(*x);
                  });
  found.assign(unique.begin(), unique.end());
  return found;
}

Eigen::Index affine_dimension(const std::vector<RatVec>& points) {
  if (points.empty()) return -1;
  const Eigen::Index d = points.front().size();
  RatMat diffs(static_cast<Eigen::Index>(points.size()) - 1, d);
  for (std::size_t i = 1; i < points.size(); ++i)
    diffs.row(static_cast<Eigen::Index>(i) - 1) = (points[i] - points[0]).transpose();
  return exact_rank(diffs);
}

bool is_bounded(const std::vector<HalfSpace>& constraints, Eigen::Index dim) {
  // Clip with a box strictly larger than every vertex. The region is
  // bounded iff no vertex of the clipped polytope lies on the box.
  const auto vertices = enumerate_vertices(constraints, dim);
  Rational radius = 1;
  for (const auto& v : vertices)
    for (Eigen::Index j = 0; j < dim; ++j) radius = std::max(radius, v(j) < 0 ? Rational(-v(j)) : v(j));
  radius = 2 * radius + 1;
  auto clipped = constraints;
  for (Eigen::Index j = 0; j < dim; ++j) {
    RatVec e = RatVec::Zero(dim);
    e(j) = 1;
    clipped.push_back({e, radius});
    clipped.push_back({RatVec(-e), radius});
  }
  for (const auto& v : enumerate_vertices(clipped, dim))
    for (Eigen::Index j = 0; j < dim; ++j)
      if (v(j) == radius || v(j) == -radius) return false;
  return true;
}

Rational polytope_volume(const std::vector<HalfSpace>& constraints, Eigen::Index dim) {
  if (!is_bounded(constraints, dim)) throw std::logic_error("polytope_volume: region is unbounded");

  auto vertices = enumerate_vertices(constraints, dim);
  if (affine_dimension(vertices) < dim) return Rational(0);

  std::vector<std::size_t> all(vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Triangulator tri(constraints, vertices);
  std::vector<std::vector<RatVec>> simplices;
  tri.triangulate(all, dim, simplices);

  Rational total = 0;
  for (const auto& s : simplices) {
    RatMat edges(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      edges.row(r) = (s[static_cast<std::size_t>(r) + 1] - s[0]).transpose();
    Rational det = determinant(edges);
    total += det < 0 ? Rational(-det) : det;
  }
  BigInt factorial = 1;
  for (Eigen::Index i = 2; i <= dim; ++i) factorial *= i;
  return total / Rational(factorial);
}

std::vector<HalfSpace> unit_facet_polytope(const RingSpec& spec) {
  std::vector<HalfSpace> out;
  for (const auto& f : spec.facets) {
    out.push_back({RatVec(-f.covector), Rational(0)});
    out.push_back({f.covector, Rational(1)});
  }
  return out;
}

}  // namespace torsig
