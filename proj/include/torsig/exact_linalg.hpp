#pragma once

// Exact integer and rational linear algebra over Eigen dense types.
//
// Everything here is templated on the scalar so the same routines run on
// BigInt (the production path) and on machine integers in tests. Scalars
// must provide truncating division and remainder with the usual C++ sign
// convention.

#include "torsig/scalar.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace torsig {

namespace detail {

template <class Scalar>
Scalar abs_value(const Scalar& x) {
  return x < 0 ? Scalar(-x) : x;
}

template <class Scalar>
Scalar gcd_value(Scalar a, Scalar b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Scalar r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

template <class Scalar>
Scalar floor_quotient(const Scalar& a, const Scalar& b) {
  Scalar q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

}  // namespace detail

/// U * A * V = S with U, V unimodular and S diagonal in Smith form.
template <class Scalar>
struct SmithDecomposition {
  Mat<Scalar> U;
  Mat<Scalar> S;
  Mat<Scalar> V;

  /// Diagonal entries d_1 | d_2 | ... (zeros trailing).
  std::vector<Scalar> diagonal() const {
    std::vector<Scalar> d;
    const auto k = std::min(S.rows(), S.cols());
    d.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) d.push_back(S(i, i));
    return d;
  }
};

/// U * A = H with U unimodular and H in row Hermite normal form.
template <class Scalar>
struct HermiteDecomposition {
  Mat<Scalar> H;
  Mat<Scalar> U;
};

/// Z^rows / (column span of A) ~ Z^free_rank + sum Z/d_i.
struct CokernelInvariants {
  Eigen::Index free_rank = 0;
  std::vector<BigInt> invariant_factors;  // all > 1, in divisibility order

  friend bool operator==(const CokernelInvariants&, const CokernelInvariants&) = default;
};

/// Smith normal form with transformation certificates.
///
/// Pivot rule: the smallest nonzero absolute value in the active block,
/// scanning row by row and then column by column, so the result depends
/// only on the input. Empty inputs give empty S and identity U, V.
template <class Derived>
SmithDecomposition<typename Derived::Scalar> smith_normal_form(
    const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using detail::abs_value;

  const Eigen::Index m = input.rows();
  const Eigen::Index n = input.cols();
  Mat<Scalar> A = input;
  Mat<Scalar> U = Mat<Scalar>::Identity(m, m);
  Mat<Scalar> V = Mat<Scalar>::Identity(n, n);

  const Eigen::Index k = std::min(m, n);
  for (Eigen::Index t = 0; t < k; ++t) {
    bool finished = false;
    while (true) {
      // pivot search
      Eigen::Index pr = -1, pc = -1;
      Scalar best = 0;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j)
          if (A(i, j) != 0 && (pr < 0 || abs_value(A(i, j)) < best)) {
            best = abs_value(A(i, j));
            pr = i;
            pc = j;
          }
      if (pr < 0) {
        finished = true;
        break;
      }
      if (pr != t) {
        A.row(t).swap(A.row(pr));
        U.row(t).swap(U.row(pr));
      }
      if (pc != t) {
        A.col(t).swap(A.col(pc));
        V.col(t).swap(V.col(pc));
      }

      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (A(i, t) == 0) continue;
        const Scalar q = A(i, t) / A(t, t);
        A.row(i) -= q * A.row(t);
        U.row(i) -= q * U.row(t);
        if (A(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (A(t, j) == 0) continue;
        const Scalar q = A(t, j) / A(t, t);
        A.col(j) -= q * A.col(t);
        V.col(j) -= q * V.col(t);
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility of the remaining block by the pivot
      bool divides = true;
      for (Eigen::Index i = t + 1; i < m && divides; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (A(i, j) % A(t, t) != 0) {
            A.row(t) += A.row(i);
            U.row(t) += U.row(i);
            divides = false;
            break;
          }
      if (!divides) continue;

      if (A(t, t) < 0) {
        A.row(t) = -A.row(t);
        U.row(t) = -U.row(t);
      }
      break;
    }
    if (finished) break;
  }
  return {std::move(U), std::move(A), std::move(V)};
}

/// Row-style Hermite normal form: pivots positive, entries above each pivot
/// reduced into [0, pivot), zero rows last.
template <class Derived>
HermiteDecomposition<typename Derived::Scalar> hermite_normal_form(
    const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using detail::abs_value;

  const Eigen::Index m = input.rows();
  const Eigen::Index n = input.cols();
  Mat<Scalar> H = input;
  Mat<Scalar> U = Mat<Scalar>::Identity(m, m);

  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < n && r < m; ++c) {
    bool has_pivot = false;
    while (true) {
      Eigen::Index pr = -1;
      Scalar best = 0;
      for (Eigen::Index i = r; i < m; ++i)
        if (H(i, c) != 0 && (pr < 0 || abs_value(H(i, c)) < best)) {
          best = abs_value(H(i, c));
          pr = i;
        }
      if (pr < 0) break;
      has_pivot = true;
      if (pr != r) {
        H.row(r).swap(H.row(pr));
        U.row(r).swap(U.row(pr));
      }
      bool clean = true;
      for (Eigen::Index i = r + 1; i < m; ++i) {
        if (H(i, c) == 0) continue;
        const Scalar q = H(i, c) / H(r, c);
        H.row(i) -= q * H.row(r);
        U.row(i) -= q * U.row(r);
        if (H(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (!has_pivot) continue;
    if (H(r, c) < 0) {
      H.row(r) = -H.row(r);
      U.row(r) = -U.row(r);
    }
    for (Eigen::Index i = 0; i < r; ++i) {
      const Scalar q = detail::floor_quotient(H(i, c), H(r, c));
      if (q == 0) continue;
      H.row(i) -= q * H.row(r);
      U.row(i) -= q * U.row(r);
    }
    ++r;
  }
  return {std::move(H), std::move(U)};
}

template <class Derived>
CokernelInvariants cokernel_invariants(const Eigen::MatrixBase<Derived>& A) {
  const auto snf = smith_normal_form(A);
  CokernelInvariants out;
  Eigen::Index rank = 0;
  for (const auto& d : snf.diagonal()) {
    if (d == 0) continue;
    ++rank;
    if (d > 1) out.invariant_factors.push_back(BigInt(d));
  }
  out.free_rank = A.rows() - rank;
  return out;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
template <class Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  if (n != input.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (n == 0) return Scalar(1);
  Mat<Scalar> M = input;
  Scalar sign = 1;
  Scalar prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      Eigen::Index swap_row = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (M(i, k) != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return Scalar(0);
      M.row(k).swap(M.row(swap_row));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

/// Rank over the rationals (exact Gaussian elimination).
template <class Derived>
Eigen::Index exact_rank(const Eigen::MatrixBase<Derived>& input) {
  RatMat M = input.template cast<Rational>();
  const Eigen::Index m = M.rows(), n = M.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < n && r < m; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = r; i < m; ++i)
      if (M(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    M.row(r).swap(M.row(p));
    for (Eigen::Index i = r + 1; i < m; ++i) {
      if (M(i, c) == 0) continue;
      const Rational f = M(i, c) / M(r, c);
      M.row(i) -= f * M.row(r);
    }
    ++r;
  }
  return r;
}

/// Solves A x = b for square nonsingular A; nullopt when A is singular.
inline std::optional<RatVec> solve_exact(RatMat A, RatVec b) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) throw std::invalid_argument("solve_exact: shape mismatch");
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = c; i < n; ++i)
      if (A(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) return std::nullopt;
    if (p != c) {
      A.row(c).swap(A.row(p));
      std::swap(b(c), b(p));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || A(i, c) == 0) continue;
      const Rational f = A(i, c) / A(c, c);
      A.row(i) -= f * A.row(c);
      b(i) -= f * b(c);
    }
  }
  RatVec x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = b(i) / A(i, i);
  return x;
}

}  // namespace torsig
