#pragma once

// ABC triples in factored form: construction from relations, the power and
// Szpiro metrics, classification, and the factored-expression text format.

#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abclll/bigint.hpp"
#include "abclll/errors.hpp"
#include "abclll/lattice.hpp"
#include "abclll/numt.hpp"

namespace abclll {

inline constexpr double kGoodAbcThreshold = 1.4;
inline constexpr double kGoodSzpiroThreshold = 4.0;

/// Three positive, pairwise distinct numbers whose relation lattice is searched.
struct BaseTriple {
  Factorization a0;
  Factorization b0;
  Factorization c0;

  static BaseTriple make(Factorization a0, Factorization b0, Factorization c0) {
    if (a0.value() == b0.value() || a0.value() == c0.value() || b0.value() == c0.value())
      throw std::invalid_argument("base values must be pairwise distinct");
    return {std::move(a0), std::move(b0), std::move(c0)};
  }

  const Factorization& operator[](std::size_t i) const { return i == 0 ? a0 : (i == 1 ? b0 : c0); }
};

struct TripleMetrics {
  double power = 0;
  double szpiro = 0;
  double size_log10 = 0;
};

/// P = log max / log rad and rho = log(abc) / log rad, from sum(e * log p).
/// Works for any positive a, b, c; `c` is taken as the largest.
inline TripleMetrics compute_metrics(const Factorization& a, const Factorization& b, const Factorization& c) {
  const long double log_rad = log_value(radical(a, b, c));
  if (log_rad == 0) throw RadicalIsOne();
  const long double log_c = log_value(c);
  const long double log_abc = log_value(a) + log_value(b) + log_c;
  return {static_cast<double>(log_c / log_rad), static_cast<double>(log_abc / log_rad),
          static_cast<double>(log_c / std::log(10.0L))};
}

/// Coprime positive a + b = c with a <= b, plus its metrics.
struct AbcTriple {
  Factorization a;
  Factorization b;
  Factorization c;
  double p_metric = 0;
  double rho_metric = 0;
  double size_log10 = 0;

  friend bool operator==(const AbcTriple& x, const AbcTriple& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }
};

inline bool pairwise_coprime(const Factorization& a, const Factorization& b, const Factorization& c) {
  return gcd_factored(a, b).is_one() && gcd_factored(a, c).is_one() && gcd_factored(b, c).is_one();
}

/// Validates a + b = c and coprimality, orders a <= b, and scores.
inline AbcTriple make_triple(Factorization a, Factorization b, Factorization c) {
  if (a.value() + b.value() != c.value()) throw InvalidTriple("a + b != c");
  if (!pairwise_coprime(a, b, c)) throw InvalidTriple("triple is not coprime");
  if (b.value() < a.value()) std::swap(a, b);
  const TripleMetrics m = compute_metrics(a, b, c);
  return {std::move(a), std::move(b), std::move(c), m.power, m.szpiro, m.size_log10};
}

inline double power(const AbcTriple& t) { return compute_metrics(t.a, t.b, t.c).power; }
inline double szpiro(const AbcTriple& t) { return compute_metrics(t.a, t.b, t.c).szpiro; }

struct Classification {
  bool good_abc = false;
  bool good_szpiro = false;
};

inline Classification classify(const AbcTriple& t, double p_threshold = kGoodAbcThreshold,
                               double rho_threshold = kGoodSzpiroThreshold) {
  return {t.p_metric > p_threshold, t.rho_metric > rho_threshold};
}

/// Turns alpha*A0 + beta*B0 + gamma*C0 = 0 into a coprime triple: the two
/// like-signed terms become A and B, the third becomes C, and the common
/// gcd is divided out. Coefficients are factored with `effort`.
inline AbcTriple build_triple(const RelationVector& rel, const BaseTriple& base, const FactorEffort& effort = {}) {
  const IntVector coef = rel.to_vector();
  for (const Int& x : coef)
    if (sgn(x) == 0) throw DegenerateRelation();
  if (sgn(rel.apply(base.a0.value(), base.b0.value(), base.c0.value())) != 0)
    throw std::invalid_argument("relation does not annihilate the base triple");

  std::vector<Factorization> terms;
  terms.reserve(3);
  for (std::size_t i = 0; i < 3; ++i) terms.push_back(multiply(factorize(abs(coef[i]), effort), base[i]));

  // Exactly one coefficient has the minority sign; it lands on the C side.
  std::size_t odd = 0;
  if (sgn(coef[0]) == sgn(coef[1])) odd = 2;
  else if (sgn(coef[0]) == sgn(coef[2])) odd = 1;

  const Factorization g = gcd_factored(gcd_factored(terms[0], terms[1]), terms[2]);
  std::vector<Factorization> side;
  for (std::size_t i = 0; i < 3; ++i)
    if (i != odd) side.push_back(divide_exact(terms[i], g));
  return make_triple(std::move(side[0]), std::move(side[1]), divide_exact(terms[odd], g));
}

/// Parses `term ("*" term)*` with `term = integer ("^" integer)?`.
/// Composite bases are factorized; stated primes are checked, not trusted.
inline Factorization parse_factored(std::string_view text, const FactorEffort& effort = {}) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto number = [&]() -> Int {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ParseError("expected integer at offset " + std::to_string(start) + " in '" +
                                       std::string(text) + "'");
    return Int(std::string(text.substr(start, pos - start)), 10);
  };

  std::vector<PrimePower> factors;
  while (true) {
    const Int base = number();
    Int exp = 1;
    skip_ws();
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      exp = number();
      skip_ws();
    }
    if (sgn(base) == 0) throw ParseError("base must be at least 1 in '" + std::string(text) + "'");
    if (sgn(exp) == 0 || !exp.fits_ulong_p()) throw ParseError("exponent out of range in '" + std::string(text) + "'");
    const unsigned long e = exp.get_ui();
    if (base != 1) {
      if (is_prime(base)) {
        factors.push_back({base, e});
      } else {
        const Factorization split = factorize(base, effort);
        for (const auto& pp : split.factors()) factors.push_back({pp.prime, pp.exponent * e});
      }
    }
    if (pos == text.size()) break;
    if (text[pos] != '*') throw ParseError("unexpected '" + std::string(1, text[pos]) + "' in '" + std::string(text) + "'");
    ++pos;
  }
  return Factorization::from_factors(std::move(factors));
}

/// Canonical "p1^e1*p2^e2*..." with "^1" omitted; "1" for the unit.
inline std::string format_factored(const Factorization& f) {
  if (f.is_one()) return "1";
  std::string out;
  for (const auto& pp : f.factors()) {
    if (!out.empty()) out += '*';
    out += pp.prime.get_str();
    if (pp.exponent != 1) out += '^' + std::to_string(pp.exponent);
  }
  return out;
}

/// Power of the triple expected from the box-principle relation bound when
/// the three bases p^a, q^b, r^c all have size about n: there are about
/// sqrt(3n)^3 combinations i*A0 + j*B0 + k*C0 with 0 <= i,j,k <= sqrt(3n),
/// so two coincide and their difference is a relation with coefficients
/// about sqrt(3n). The estimate is
///   log(n sqrt(3n)) / (3 log sqrt(3n) + log p + log q + log r),
/// which stays below 1 and tends to 1 as n grows.
inline double estimate_worst_case_power(double n, double p, double q, double r) {
  if (!(n > 1) || !(p >= 2) || !(q >= 2) || !(r >= 2) || !std::isfinite(n))
    throw std::invalid_argument("estimate requires size > 1 and primes >= 2");
  const long double ln = std::log(static_cast<long double>(n));
  const long double log_root = 0.5L * (std::log(3.0L) + ln);
  return static_cast<double>((ln + log_root) /
                             (3 * log_root + std::log(static_cast<long double>(p)) +
                              std::log(static_cast<long double>(q)) + std::log(static_cast<long double>(r))));
}

}  // namespace abclll
