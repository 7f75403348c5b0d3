#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace thetablock {

using Integer = mpz_class;
using Rational = mpq_class;

/// Truncation bound meaning "known exactly to all orders".
inline constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
  if (a >= kExact || b >= kExact) return kExact;
  const std::int64_t s = a + b;
  return s >= kExact ? kExact : s;
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(Integer(std::to_string(num)), Integer(std::to_string(den)));
  r.canonicalize();
  return r;
}

/// Decimal "p" or "p/q".
inline std::string to_string(const Rational& x) { return x.get_str(); }
inline std::string to_string(const Integer& x) { return x.get_str(); }

inline std::int64_t to_int64(const Integer& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits: " + x.get_str());
  return x.get_si();
}

inline Integer from_int128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  } while (u != 0);
  if (neg) digits.insert(digits.begin(), '-');
  return Integer(digits);
}

/// Floor division for signed 64-bit integers.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

}  // namespace thetablock
