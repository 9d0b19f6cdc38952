#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace hmpc {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational. Always kept reduced with a positive denominator
/// (cpp_rational canonicalizes on every operation); no rounding anywhere.
using Rat = boost::multiprecision::cpp_rational;

inline Rat add_encrypt(const Rat& x, const Rat& k) { return x + k; }
inline Rat add_decrypt(const Rat& c, const Rat& k) { return c - k; }

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// base^e for integer e, exact. Negative exponents give the reciprocal.
inline Rat pow_rat(const Rat& base, long long e) {
  if (base == 0 && e <= 0) throw std::domain_error("pow_rat: 0 to non-positive power");
  Rat acc = 1;
  Rat b = base;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  if (e < 0) acc = Rat(1) / acc;
  return acc;
}

inline std::string rat_str(const Rat& r) { return r.str(); }

/// Serialized size in bits of a rational payload: magnitude bits of the
/// numerator and denominator plus one sign bit. Used for transcript cost
/// accounting of rational-valued messages.
inline int rat_payload_bits(const Rat& r) {
  auto bits = [](const BigInt& v) {
    BigInt a = v < 0 ? BigInt(-v) : v;
    return a == 0 ? 1 : static_cast<int>(boost::multiprecision::msb(a)) + 1;
  };
  return bits(rat_num(r)) + bits(rat_den(r)) + 1;
}

}  // namespace hmpc
