#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmpc/bit.hpp"

namespace hmpc::anf {

/// Multilinear polynomial over GF(2) in canonical algebraic normal form.
/// A monomial is a bitmask over up to 64 variables; mask 0 is the constant 1.
/// The ANF is canonical, so two polynomials are equal as Boolean functions
/// iff their monomial sets are equal. That makes a symbolic protocol run an
/// exhaustive correctness proof: it covers every assignment at once.
struct Poly {
  std::vector<std::uint64_t> mono;  // sorted, duplicate-free

  Poly() = default;
  explicit Poly(int c) {
    if (c & 1) mono.push_back(0);
  }
  static Poly var(unsigned i);

  friend Poly operator^(const Poly& a, const Poly& b);
  friend Poly operator&(const Poly& a, const Poly& b);
  friend Poly operator~(const Poly& a) { return a ^ Poly(1); }
  Poly& operator^=(const Poly& o) {
    *this = *this ^ o;
    return *this;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.mono == b.mono; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  bool is_zero() const { return mono.empty(); }
  bool is_one() const { return mono.size() == 1 && mono[0] == 0; }

  /// OR of all monomial masks: the set of variables this poly depends on
  /// syntactically (canonical ANF means also semantically).
  std::uint64_t support() const;

  /// True iff variable i occurs exactly as the linear monomial {i} and in
  /// no other monomial of this polynomial.
  bool linear_only_in(unsigned i) const;

  Bit eval(std::uint64_t assignment) const;

  std::string str() const;
};

}  // namespace hmpc::anf
