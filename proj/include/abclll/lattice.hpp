#pragma once

// Exact integer lattice tools: LLL reduction, Hermite normal form, relation
// (kernel) lattices of three integers, and continued-fraction convergents.
// Every decision is taken in integer arithmetic.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "abclll/bigint.hpp"
#include "abclll/errors.hpp"

namespace abclll {

using IntVector = std::vector<Int>;

inline Int dot(const IntVector& x, const IntVector& y) {
  Int acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

inline Int norm2(const IntVector& x) { return dot(x, x); }

inline bool is_zero(const IntVector& x) {
  return std::all_of(x.begin(), x.end(), [](const Int& v) { return sgn(v) == 0; });
}

// Flips the sign so that the first nonzero entry is positive.
inline void sign_normalize(IntVector& x) {
  for (const Int& v : x) {
    if (sgn(v) == 0) continue;
    if (sgn(v) < 0)
      for (Int& w : x) w = -w;
    return;
  }
}

class LatticeBasis {
 public:
  LatticeBasis() = default;
  explicit LatticeBasis(std::vector<IntVector> rows) : rows_(std::move(rows)) {
    for (const auto& r : rows_) {
      if (r.empty() || r.size() != rows_.front().size())
        throw std::invalid_argument("lattice rows must share a positive dimension");
    }
  }

  const std::vector<IntVector>& rows() const { return rows_; }
  std::vector<IntVector>& rows() { return rows_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return rows_.empty() ? 0 : rows_.front().size(); }
  const IntVector& operator[](std::size_t i) const { return rows_[i]; }

  friend bool operator==(const LatticeBasis&, const LatticeBasis&) = default;

 private:
  std::vector<IntVector> rows_;
};

// Determinant of the Gram matrix (squared covolume), fraction-free Bareiss.
inline Int gram_determinant(const std::vector<IntVector>& rows) {
  const std::size_t m = rows.size();
  if (m == 0) return 1;
  std::vector<IntVector> g(m, IntVector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) g[i][j] = g[j][i] = dot(rows[i], rows[j]);

  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (sgn(g[k][k]) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < m && sgn(g[swap_row][k]) == 0) ++swap_row;
      if (swap_row == m) return 0;
      std::swap(g[k], g[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      for (std::size_t j = k + 1; j < m; ++j) {
        g[i][j] = (g[i][j] * g[k][k] - g[i][k] * g[k][j]) / prev;
      }
    }
    prev = g[k][k];
  }
  return sign * g[m - 1][m - 1];
}

inline Int gram_determinant(const LatticeBasis& basis) { return gram_determinant(basis.rows()); }

/// LLL-reduces `basis` with Lovász parameter `delta` in (1/4, 1].
///
/// Integral variant: Gram-Schmidt data is carried as the integers
/// d_i = det Gram(b_1..b_i) and lambda_{i,j} = d_j * mu_{i,j}, so no
/// rational or floating value is ever formed. Throws DependentRows when the
/// rows are linearly dependent.
inline LatticeBasis lll_reduce(const LatticeBasis& basis, const Rational& delta = Rational(99, 100)) {
  if (delta <= Rational(1, 4) || delta > 1)
    throw std::invalid_argument("LLL delta must lie in (1/4, 1]");
  const Int& dp = delta.get_num();
  const Int& dq = delta.get_den();

  std::vector<IntVector> b = basis.rows();
  const std::size_t n = b.size();
  if (n == 0) return basis;

  // 1-based bookkeeping mirrors the textbook recurrences; b itself is 0-based.
  std::vector<Int> d(n + 1);
  std::vector<std::vector<Int>> lam(n + 1, std::vector<Int>(n + 1));
  auto row = [&b](std::size_t i) -> IntVector& { return b[i - 1]; };

  d[0] = 1;
  d[1] = norm2(row(1));
  if (sgn(d[1]) == 0) throw DependentRows();

  auto reduce = [&](std::size_t k, std::size_t l) {
    Int twice = 2 * lam[k][l];
    if (abs(twice) <= d[l]) return;
    Int q = round_div(lam[k][l], d[l]);
    IntVector& bk = row(k);
    const IntVector& bl = row(l);
    for (std::size_t c = 0; c < bk.size(); ++c) bk[c] -= q * bl[c];
    lam[k][l] -= q * d[l];
    for (std::size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };

  std::size_t kmax = 1;
  auto swap_rows = [&](std::size_t k) {
    std::swap(row(k), row(k - 1));
    for (std::size_t j = 1; j + 2 <= k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    const Int l = lam[k][k - 1];
    const Int bb = (d[k - 2] * d[k] + l * l) / d[k - 1];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      const Int t = lam[i][k];
      lam[i][k] = (d[k] * lam[i][k - 1] - l * t) / d[k - 1];
      lam[i][k - 1] = (bb * t + l * lam[i][k]) / d[k];
    }
    d[k - 1] = bb;
  };

  std::size_t k = 2;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        Int u = dot(row(k), row(j));
        for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
        if (j < k) {
          lam[k][j] = u;
        } else {
          if (sgn(u) == 0) throw DependentRows();
          d[k] = u;
        }
      }
    }
    reduce(k, k - 1);
    if (dq * d[k] * d[k - 2] < dp * d[k - 1] * d[k - 1] - dq * lam[k][k - 1] * lam[k][k - 1]) {
      swap_rows(k);
      k = std::max<std::size_t>(2, k - 1);
      continue;
    }
    for (std::size_t l = k - 1; l-- > 1;) reduce(k, l);
    ++k;
  }
  return LatticeBasis(std::move(b));
}

/// Row-style Hermite normal form: upper echelon, positive pivots, entries
/// above each pivot reduced into [0, pivot). Equal lattices have equal HNFs.
inline LatticeBasis hnf(const LatticeBasis& basis) {
  std::vector<IntVector> m = basis.rows();
  const std::size_t rows = m.size();
  const std::size_t cols = basis.dim();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    // Euclid on column c among rows r.. until a single nonzero entry remains.
    while (true) {
      std::size_t pivot = rows;
      for (std::size_t i = r; i < rows; ++i) {
        if (sgn(m[i][c]) != 0 && (pivot == rows || abs(m[i][c]) < abs(m[pivot][c]))) pivot = i;
      }
      if (pivot == rows) break;
      std::swap(m[r], m[pivot]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (sgn(m[i][c]) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
        for (std::size_t j = c; j < cols; ++j) m[i][j] -= q * m[r][j];
        if (sgn(m[i][c]) != 0) done = false;
      }
      if (done) break;
    }
    if (sgn(m[r][c]) == 0) continue;
    if (sgn(m[r][c]) < 0)
      for (Int& v : m[r]) v = -v;
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(m[i][c], m[r][c]);
      if (sgn(q) == 0) continue;
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= q * m[r][j];
    }
    ++r;
  }
  if (r < rows) throw DependentRows();
  return LatticeBasis(std::move(m));
}

/// Integer triple (alpha, beta, gamma), read as the relation
/// alpha*A0 + beta*B0 + gamma*C0 = 0 once bound to a base triple.
struct RelationVector {
  Int alpha;
  Int beta;
  Int gamma;

  IntVector to_vector() const { return {alpha, beta, gamma}; }
  static RelationVector from_vector(const IntVector& v) {
    if (v.size() != 3) throw std::invalid_argument("relation vectors have three entries");
    return {v[0], v[1], v[2]};
  }
  bool is_zero() const { return sgn(alpha) == 0 && sgn(beta) == 0 && sgn(gamma) == 0; }
  Int apply(const Int& a0, const Int& b0, const Int& c0) const {
    return alpha * a0 + beta * b0 + gamma * c0;
  }

  friend bool operator==(const RelationVector&, const RelationVector&) = default;
};

inline bool lex_less(const IntVector& x, const IntVector& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

/// Reduced basis (v1, v2) of the full kernel {x in Z^3 : x.(a0,b0,c0) = 0}.
///
/// An exact kernel basis comes from extended gcds on the primitive part
/// (a,b,c): with d = gcd(a,b) and a'x + b'y = 1 the vectors (b',-a',0) and
/// (-cx,-cy,d) have cross product -(a,b,c), so they span the whole kernel.
/// That basis is LLL-reduced and then Lagrange-reduced, which makes v1 a
/// shortest relation. Both vectors are sign-normalized; equal norms are
/// ordered lexicographically.
inline std::pair<RelationVector, RelationVector> relation_basis(const Int& a0, const Int& b0, const Int& c0,
                                                               const Rational& delta = Rational(99, 100)) {
  if (sgn(a0) <= 0 || sgn(b0) <= 0 || sgn(c0) <= 0)
    throw std::invalid_argument("relation_basis requires positive integers");
  const Int g = gcd(gcd(a0, b0), c0);
  const Int a = a0 / g, b = b0 / g, c = c0 / g;
  Int d, x, y;
  mpz_gcdext(d.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  const Int ap = a / d, bp = b / d;

  LatticeBasis kernel({{bp, Int(-ap), Int(0)}, {Int(-c * x), Int(-c * y), d}});
  std::vector<IntVector> rows = lll_reduce(kernel, delta).rows();
  IntVector& v1 = rows[0];
  IntVector& v2 = rows[1];

  while (true) {
    if (norm2(v2) < norm2(v1)) std::swap(v1, v2);
    const Int q = round_div(dot(v1, v2), norm2(v1));
    if (sgn(q) == 0) break;
    for (std::size_t i = 0; i < 3; ++i) v2[i] -= q * v1[i];
  }
  sign_normalize(v1);
  sign_normalize(v2);
  if (norm2(v1) == norm2(v2) && lex_less(v2, v1)) std::swap(v1, v2);
  return {RelationVector::from_vector(v1), RelationVector::from_vector(v2)};
}

struct Convergent {
  Int p;
  Int q;

  friend bool operator==(const Convergent&, const Convergent&) = default;
};

/// Continued-fraction convergents of num/den (floor partial quotients),
/// at most max_depth of them.
inline std::vector<Convergent> convergents(Int num, Int den, std::size_t max_depth) {
  if (sgn(den) == 0) throw ZeroDenominator();
  if (sgn(den) < 0) {
    num = -num;
    den = -den;
  }
  std::vector<Convergent> out;
  Int p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
  while (out.size() < max_depth) {
    const Int a = floor_div(num, den);
    const Int rem = num - a * den;
    Int p = a * p_prev + p_prev2;
    Int q = a * q_prev + q_prev2;
    p_prev2 = std::move(p_prev);
    q_prev2 = std::move(q_prev);
    p_prev = p;
    q_prev = q;
    out.push_back({std::move(p), std::move(q)});
    if (sgn(rem) == 0) break;
    num = std::move(den);
    den = rem;
  }
  return out;
}

inline constexpr std::size_t kDefaultCfDepth = 16;
inline constexpr long kDefaultBox = 8;

/// Small combinations c1*v1 + c2*v2 worth turning into triples: v1 and v2,
/// the convergent combinations that shrink each coordinate, and the full box
/// |c1|,|c2| <= box. Sign-normalized, zero-free, first occurrence kept.
///
/// With v1, v2 independent a combination is identified by its coefficient
/// pair, so duplicates are detected on normalized (c1, c2).
inline std::vector<RelationVector> combine_candidates(const RelationVector& v1, const RelationVector& v2,
                                                      std::size_t cf_depth = kDefaultCfDepth,
                                                      long box = kDefaultBox) {
  std::vector<RelationVector> out;
  std::vector<std::pair<Int, Int>> special;
  const std::size_t side = 2 * static_cast<std::size_t>(std::max(box, 0L)) + 1;
  std::vector<bool> taken(side * side, false);

  // Combination with the sign fixed so the first nonzero entry is positive;
  // the coefficient pair is negated alongside. Empty optional for zero.
  auto combine = [&](Int& c1, Int& c2) -> std::optional<RelationVector> {
    RelationVector r{c1 * v1.alpha + c2 * v2.alpha, c1 * v1.beta + c2 * v2.beta, c1 * v1.gamma + c2 * v2.gamma};
    const int lead = sgn(r.alpha) != 0 ? sgn(r.alpha) : (sgn(r.beta) != 0 ? sgn(r.beta) : sgn(r.gamma));
    if (lead == 0) return std::nullopt;
    if (lead < 0) {
      r = {-r.alpha, -r.beta, -r.gamma};
      c1 = -c1;
      c2 = -c2;
    }
    return r;
  };
  auto add_special = [&](Int c1, Int c2) {
    auto r = combine(c1, c2);
    if (!r) return;
    for (const auto& [s1, s2] : special)
      if (s1 == c1 && s2 == c2) return;
    if (abs(c1) <= box && abs(c2) <= box)
      taken[static_cast<std::size_t>(c1.get_si() + box) * side + static_cast<std::size_t>(c2.get_si() + box)] = true;
    special.emplace_back(std::move(c1), std::move(c2));
    out.push_back(std::move(*r));
  };

  add_special(1, 0);
  add_special(0, 1);
  const IntVector x = v1.to_vector();
  const IntVector y = v2.to_vector();
  for (std::size_t i = 0; i < 3; ++i) {
    if (sgn(y[i]) == 0) continue;
    for (const Convergent& cv : convergents(-x[i], y[i], cf_depth)) add_special(cv.q, cv.p);
  }
  // (c1, c2) and (-c1, -c2) give the same normalized vector; walk a half-plane.
  for (long a = 0; a <= box; ++a) {
    for (long b = -box; b <= box; ++b) {
      if (a == 0 && b <= 0) continue;
      Int c1 = a, c2 = b;
      auto r = combine(c1, c2);
      if (!r) continue;
      if (taken[static_cast<std::size_t>(c1.get_si() + box) * side + static_cast<std::size_t>(c2.get_si() + box)])
        continue;
      out.push_back(std::move(*r));
    }
  }
  return out;
}

}  // namespace abclll
