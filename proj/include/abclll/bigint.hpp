#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace abclll {

using Int = mpz_class;
using Rational = mpq_class;

inline bool fits_u64(const Int& n) {
  return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const Int& n) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

inline Int from_u64(std::uint64_t v) {
  Int out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

inline Int pow(const Int& base, unsigned long exp) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

inline Int gcd(const Int& a, const Int& b) {
  Int out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

// Nearest integer to num/den (den > 0), halves rounded toward +infinity.
inline Int round_div(const Int& num, const Int& den) {
  Int twice = 2 * num + den;
  Int out;
  mpz_fdiv_q(out.get_mpz_t(), twice.get_mpz_t(), Int(2 * den).get_mpz_t());
  return out;
}

inline Int floor_div(const Int& num, const Int& den) {
  Int out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

inline std::string to_string(const Int& n) { return n.get_str(); }

}  // namespace abclll
