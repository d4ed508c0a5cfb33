#pragma once

// Integer number theory over factored integers: primality, factorization,
// smooth-number enumeration, radicals and gcds.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abclll/bigint.hpp"
#include "abclll/errors.hpp"

namespace abclll {

struct PrimePower {
  Int prime;
  unsigned long exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer stored as its prime factorization, primes strictly
/// ascending. The empty factorization is 1.
class Factorization {
 public:
  Factorization() : value_(1) {}

  /// Sorts, merges repeated primes and drops zero exponents. The caller
  /// vouches that every listed base is prime.
  static Factorization from_factors(std::vector<PrimePower> factors) {
    std::sort(factors.begin(), factors.end(),
              [](const PrimePower& x, const PrimePower& y) { return x.prime < y.prime; });
    Factorization out;
    for (auto& pp : factors) {
      if (pp.exponent == 0) continue;
      if (sgn(pp.prime) <= 0 || pp.prime == 1) throw std::invalid_argument("factor bases must exceed 1");
      if (!out.factors_.empty() && out.factors_.back().prime == pp.prime) {
        out.factors_.back().exponent += pp.exponent;
      } else {
        out.factors_.push_back(std::move(pp));
      }
    }
    out.recompute();
    return out;
  }

  static Factorization prime_power(const Int& p, unsigned long e) { return from_factors({{p, e}}); }

  const std::vector<PrimePower>& factors() const { return factors_; }
  const Int& value() const { return value_; }
  bool is_one() const { return factors_.empty(); }

  friend bool operator==(const Factorization& x, const Factorization& y) { return x.factors_ == y.factors_; }

 private:
  void recompute() {
    value_ = 1;
    for (const auto& pp : factors_) value_ *= pow(pp.prime, pp.exponent);
  }

  std::vector<PrimePower> factors_;
  Int value_;
};

/// Thrown when a cofactor resists the configured effort. Carries what was
/// split off and the unfactored remainder.
class IncompleteFactorization : public std::runtime_error {
 public:
  IncompleteFactorization(Factorization factored, Int cofactor)
      : std::runtime_error("factorization incomplete, cofactor " + cofactor.get_str()),
        factored_(std::move(factored)),
        cofactor_(std::move(cofactor)) {}

  const Factorization& factored() const { return factored_; }
  const Int& cofactor() const { return cofactor_; }

 private:
  Factorization factored_;
  Int cofactor_;
};

struct FactorEffort {
  std::uint64_t trial_bound = 100000;
  std::uint64_t rho_iterations = std::uint64_t{1} << 26;
};

namespace detail {

inline constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 20;

inline std::vector<std::uint32_t> primes_below(std::uint64_t limit) {
  std::vector<bool> composite(limit, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i < limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j < limit; j += i) composite[j] = true;
  }
  return primes;
}

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = primes_below(kSieveLimit);
  return primes;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Strong probable-prime test of odd n > 2 to base a.
inline bool strong_probable_prime(std::uint64_t n, std::uint64_t a) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline bool strong_probable_prime(const Int& n, const Int& a) {
  Int d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Int x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Int n1 = n - 1;
  if (x == 1 || x == n1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n1) return true;
  }
  return false;
}

// Halves x modulo odd n.
inline void half_mod(Int& x, const Int& n) {
  if (mpz_odd_p(x.get_mpz_t())) x += n;
  mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 1);
}

inline Int mod(const Int& x, const Int& n) {
  Int r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  return r;
}

// Strong Lucas probable-prime test with Selfridge parameters; n odd, not a square.
inline bool strong_lucas_probable_prime(const Int& n) {
  long dd = 5;
  while (true) {
    const Int big_d(dd);
    const int j = mpz_jacobi(big_d.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0 && abs(big_d) != n) return false;
    dd = dd > 0 ? -(dd + 2) : -dd + 2;
  }
  const Int big_d(dd);
  const Int q = Int((1 - dd) / 4);
  Int d = n + 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  Int u = 1, v = 1, qk = mod(q, n);
  for (long bit = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
    u = mod(u * v, n);
    v = mod(v * v - 2 * qk, n);
    qk = mod(qk * qk, n);
    if (mpz_tstbit(d.get_mpz_t(), bit)) {
      Int u2 = u + v;
      Int v2 = big_d * u + v;
      u2 = mod(u2, n);
      v2 = mod(v2, n);
      half_mod(u2, n);
      half_mod(v2, n);
      u = std::move(u2);
      v = std::move(v2);
      qk = mod(qk * q, n);
    }
  }
  if (sgn(u) == 0 || sgn(v) == 0) return true;
  for (unsigned long r = 1; r < s; ++r) {
    v = mod(v * v - 2 * qk, n);
    if (sgn(v) == 0) return true;
    qk = mod(qk * qk, n);
  }
  return false;
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (!strong_probable_prime(n, a)) return false;
  }
  return true;
}

}  // namespace detail

/// Bound below which Miller-Rabin on the first 13 prime bases is proven exact.
inline const Int& deterministic_mr_bound() {
  static const Int bound("3317044064679887385961981");
  return bound;
}

/// Exact for n < 3.3e24 (fixed Miller-Rabin bases), Baillie-PSW above.
inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return detail::is_prime_u64(to_u64(n));
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul, 41ul}) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  if (n < deterministic_mr_bound()) {
    for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul, 41ul}) {
      if (!detail::strong_probable_prime(n, Int(a))) return false;
    }
    return true;
  }
  if (!detail::strong_probable_prime(n, Int(2))) return false;
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;
  return detail::strong_lucas_probable_prime(n);
}

namespace detail {

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// One Pollard-Brent attempt with f(x) = x^2 + c; returns a divisor of n
// (possibly n itself on failure). Decrements `budget` per evaluation of f.
inline std::uint64_t brent_u64(std::uint64_t n, std::uint64_t c, std::uint64_t x0, std::uint64_t& budget) {
  auto f = [n, c](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
  constexpr std::uint64_t kBatch = 128;
  std::uint64_t y = x0, x = x0, ys = x0, q = 1, g = 1, r = 1;
  while (g == 1) {
    if (budget == 0) return n;
    x = y;
    for (std::uint64_t i = 0; i < r && budget > 0; ++i, --budget) y = f(y);
    for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      for (std::uint64_t i = 0; i < std::min(kBatch, r - k) && budget > 0; ++i, --budget) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = gcd_u64(q, n);
      if (budget == 0 && g == 1) return n;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd_u64(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

inline Int brent_mpz(const Int& n, unsigned long c, unsigned long x0, std::uint64_t& budget) {
  auto f = [&n, c](const Int& v) { return mod(v * v + c, n); };
  constexpr std::uint64_t kBatch = 128;
  Int y = x0, x = x0, ys = x0, q = 1, g = 1;
  std::uint64_t r = 1;
  while (g == 1) {
    if (budget == 0) return n;
    x = y;
    for (std::uint64_t i = 0; i < r && budget > 0; ++i, --budget) y = f(y);
    for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      for (std::uint64_t i = 0; i < std::min(kBatch, r - k) && budget > 0; ++i, --budget) {
        y = f(y);
        q = mod(q * (x - y), n);
      }
      g = gcd(q, n);
      if (budget == 0 && g == 1) return n;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd(x - ys, n);
    } while (g == 1);
  }
  return g;
}

// Nontrivial divisor of composite n, or 0/n when the budget runs out.
inline Int split(const Int& n, std::uint64_t budget) {
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Int root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    return root;
  }
  for (unsigned long c = 1; budget > 0; ++c) {
    if (fits_u64(n)) {
      const std::uint64_t m = to_u64(n);
      const std::uint64_t g = brent_u64(m, c, 2, budget);
      if (g != 1 && g != m) return from_u64(g);
    } else {
      const Int g = brent_mpz(n, c, 2, budget);
      if (g != 1 && g != n) return g;
    }
  }
  return 0;
}

}  // namespace detail

namespace detail {

using SmallFactors = std::vector<std::pair<std::uint64_t, unsigned long>>;

// Factors n >= 1 into `out` (ascending). Returns false and leaves the
// unsplit remainder in `stuck` when some cofactor outlasts the rho budget.
inline bool factorize_u64(std::uint64_t n, const FactorEffort& effort, SmallFactors& out, std::uint64_t& stuck) {
  out.clear();
  stuck = 1;
  const std::uint64_t bound = std::min(effort.trial_bound, kSieveLimit);
  for (std::uint32_t p : small_primes()) {
    if (p > bound || std::uint64_t{p} * p > n) break;
    if (n % p) continue;
    unsigned long e = 0;
    do {
      n /= p;
      ++e;
    } while (n % p == 0);
    out.emplace_back(p, e);
  }
  std::uint64_t pending[64];
  int top = 0;
  if (n > 1) pending[top++] = n;
  const std::size_t trial_count = out.size();
  while (top > 0) {
    const std::uint64_t m = pending[--top];
    if (is_prime_u64(m)) {
      out.emplace_back(m, 1);
      continue;
    }
    std::uint64_t g = 0;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(m)));
    for (std::uint64_t r = root > 0 ? root - 1 : 0; r <= root + 1; ++r) {
      if (r > 1 && r * r == m) g = r;
    }
    for (std::uint64_t c = 1, budget = effort.rho_iterations; g == 0 && budget > 0; ++c) {
      const std::uint64_t d = brent_u64(m, c, 2, budget);
      if (d != 1 && d != m) g = d;
    }
    if (g == 0) {
      stuck *= m;
      continue;
    }
    pending[top++] = m / g;
    pending[top++] = g;
  }
  std::sort(out.begin() + static_cast<long>(trial_count), out.end());
  // Merge repeats produced by splitting.
  SmallFactors merged;
  for (const auto& f : out) {
    if (!merged.empty() && merged.back().first == f.first) merged.back().second += f.second;
    else merged.push_back(f);
  }
  out.swap(merged);
  return stuck == 1;
}

}  // namespace detail

/// Complete factorization: trial division up to effort.trial_bound, then
/// Pollard-Brent rho with effort.rho_iterations steps per cofactor.
/// Throws IncompleteFactorization if some cofactor resists.
inline Factorization factorize(const Int& n, const FactorEffort& effort = {}) {
  if (n < 1) throw std::invalid_argument("factorize requires n >= 1");
  std::vector<PrimePower> found;
  if (fits_u64(n)) {
    detail::SmallFactors small;
    std::uint64_t stuck = 1;
    const bool complete = detail::factorize_u64(to_u64(n), effort, small, stuck);
    for (const auto& [p, e] : small) found.push_back({from_u64(p), e});
    Factorization done = Factorization::from_factors(std::move(found));
    if (!complete) throw IncompleteFactorization(std::move(done), from_u64(stuck));
    return done;
  }

  const std::uint64_t bound = std::min(effort.trial_bound, detail::kSieveLimit);
  Int rest = n;
  for (std::uint32_t p : detail::small_primes()) {
    if (p > bound) break;
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    unsigned long e = 0;
    do {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
    found.push_back({Int(p), e});
    if (fits_u64(rest)) break;
  }

  Int stuck = 1;
  std::vector<Int> pending;
  if (rest > 1) pending.push_back(rest);
  while (!pending.empty()) {
    Int m = std::move(pending.back());
    pending.pop_back();
    if (fits_u64(m)) {
      detail::SmallFactors small;
      std::uint64_t small_stuck = 1;
      detail::factorize_u64(to_u64(m), effort, small, small_stuck);
      for (const auto& [p, e] : small) found.push_back({from_u64(p), e});
      stuck *= from_u64(small_stuck);
      continue;
    }
    if (is_prime(m)) {
      found.push_back({std::move(m), 1});
      continue;
    }
    Int g = detail::split(m, effort.rho_iterations);
    if (sgn(g) == 0) {
      stuck *= m;
      continue;
    }
    pending.push_back(m / g);
    pending.push_back(std::move(g));
  }
  Factorization done = Factorization::from_factors(std::move(found));
  if (stuck > 1) throw IncompleteFactorization(std::move(done), std::move(stuck));
  return done;
}

inline Factorization multiply(const Factorization& a, const Factorization& b) {
  std::vector<PrimePower> merged = a.factors();
  merged.insert(merged.end(), b.factors().begin(), b.factors().end());
  return Factorization::from_factors(std::move(merged));
}

/// a / b, where b must divide a.
inline Factorization divide_exact(const Factorization& a, const Factorization& b) {
  std::vector<PrimePower> out = a.factors();
  for (const auto& pp : b.factors()) {
    auto it = std::find_if(out.begin(), out.end(), [&](const PrimePower& x) { return x.prime == pp.prime; });
    if (it == out.end() || it->exponent < pp.exponent) throw std::invalid_argument("divide_exact: not a divisor");
    it->exponent -= pp.exponent;
  }
  return Factorization::from_factors(std::move(out));
}

/// Componentwise minimum of exponents.
inline Factorization gcd_factored(const Factorization& a, const Factorization& b) {
  std::vector<PrimePower> out;
  auto i = a.factors().begin();
  auto j = b.factors().begin();
  while (i != a.factors().end() && j != b.factors().end()) {
    if (i->prime < j->prime) {
      ++i;
    } else if (j->prime < i->prime) {
      ++j;
    } else {
      out.push_back({i->prime, std::min(i->exponent, j->exponent)});
      ++i;
      ++j;
    }
  }
  return Factorization::from_factors(std::move(out));
}

/// Product of the distinct primes dividing a*b*c.
inline Factorization radical(const Factorization& a, const Factorization& b, const Factorization& c) {
  std::vector<PrimePower> all;
  for (const Factorization* f : {&a, &b, &c})
    for (const auto& pp : f->factors()) all.push_back({pp.prime, 1});
  std::sort(all.begin(), all.end(), [](const PrimePower& x, const PrimePower& y) { return x.prime < y.prime; });
  all.erase(std::unique(all.begin(), all.end(), [](const PrimePower& x, const PrimePower& y) { return x.prime == y.prime; }),
            all.end());
  return Factorization::from_factors(std::move(all));
}

inline long double log_of(const Int& n) {
  if (fits_u64(n)) return std::log(static_cast<long double>(to_u64(n)));
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(static_cast<long double>(mant)) + exp2 * std::log(2.0L);
}

/// Natural log of the value, summed as sum(e * log p).
inline long double log_value(const Factorization& f) {
  long double acc = 0;
  for (const auto& pp : f.factors()) acc += static_cast<long double>(pp.exponent) * log_of(pp.prime);
  return acc;
}

inline constexpr std::size_t kDefaultMemberCap = 1'000'000;

/// Numbers below value_bound whose prime factors are all below prime_bound.
struct SmoothSet {
  Int value_bound;
  std::uint64_t prime_bound = 2;
  std::vector<Factorization> members;

  std::vector<Int> values() const {
    std::vector<Int> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(m.value());
    return out;
  }
};

namespace detail {

inline std::vector<std::uint32_t> primes_under(std::uint64_t n) {
  if (n <= kSieveLimit) {
    const auto& all = small_primes();
    return {all.begin(), std::lower_bound(all.begin(), all.end(), n)};
  }
  return primes_below(n);
}

inline void check_bounds(const Int& m, std::uint64_t n) {
  if (m < 2 || n < 2) throw std::invalid_argument("smooth bounds require M >= 2 and N >= 2");
}

inline void sort_members(std::vector<Factorization>& members) {
  std::sort(members.begin(), members.end(),
            [](const Factorization& x, const Factorization& y) { return x.value() < y.value(); });
}

// Depth-first walk over primes[idx..]; max_primes caps the number of distinct primes.
inline void smooth_walk(const std::vector<std::uint32_t>& primes, std::size_t idx, const Int& value, const Int& bound,
                        std::size_t max_primes, std::vector<PrimePower>& stack, std::vector<Factorization>& out,
                        std::size_t cap) {
  if (stack.size() == max_primes) return;
  for (std::size_t j = idx; j < primes.size(); ++j) {
    Int v = value * primes[j];
    if (v >= bound) break;
    for (unsigned long e = 1; v < bound; ++e, v *= primes[j]) {
      stack.push_back({Int(primes[j]), e});
      out.push_back(Factorization::from_factors(stack));
      if (out.size() > cap) throw BoundsTooLarge(cap);
      smooth_walk(primes, j + 1, v, bound, max_primes, stack, out, cap);
      stack.pop_back();
    }
  }
}

inline SmoothSet walk_set(const Int& m, std::uint64_t n, std::size_t max_primes, bool include_one,
                          std::size_t cap) {
  check_bounds(m, n);
  SmoothSet set{m, n, {}};
  if (include_one) set.members.emplace_back();
  std::vector<PrimePower> stack;
  smooth_walk(primes_under(n), 0, Int(1), m, max_primes, stack, set.members, cap);
  sort_members(set.members);
  return set;
}

}  // namespace detail

/// All values < M with every prime factor < N, 1 included, ascending.
inline SmoothSet smooth_numbers(const Int& m, std::uint64_t n, std::size_t cap = kDefaultMemberCap) {
  return detail::walk_set(m, n, static_cast<std::size_t>(-1), true, cap);
}

/// Prime powers p^k < M with p < N, optionally preceded by 1.
inline SmoothSet prime_powers(const Int& m, std::uint64_t n, bool include_one, std::size_t cap = kDefaultMemberCap) {
  return detail::walk_set(m, n, 1, include_one, cap);
}

/// Values p^a * q^b < M (at most two distinct primes, all < N), optionally with 1.
inline SmoothSet prime_power_products(const Int& m, std::uint64_t n, bool include_one,
                                      std::size_t cap = kDefaultMemberCap) {
  return detail::walk_set(m, n, 2, include_one, cap);
}

}  // namespace abclll
