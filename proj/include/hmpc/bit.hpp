#pragma once

#include <cstdint>
#include <string>

namespace hmpc {

/// A single bit under the XOR/AND algebra. XOR is the group operation
/// (associative, commutative, self-inverse); AND distributes over it.
struct Bit {
  std::uint8_t v = 0;

  constexpr Bit() = default;
  constexpr explicit Bit(int x) : v(static_cast<std::uint8_t>(x & 1)) {}

  friend constexpr Bit operator^(Bit a, Bit b) { return Bit(a.v ^ b.v); }
  friend constexpr Bit operator&(Bit a, Bit b) { return Bit(a.v & b.v); }
  friend constexpr Bit operator~(Bit a) { return Bit(a.v ^ 1); }
  Bit& operator^=(Bit o) {
    v ^= o.v;
    return *this;
  }
  friend constexpr bool operator==(Bit a, Bit b) { return a.v == b.v; }
  friend constexpr bool operator!=(Bit a, Bit b) { return a.v != b.v; }
};

/// One-time-pad ciphertext of a bit. The key label identifies which key
/// was used; it is bookkeeping only and is never transmitted.
struct Ciphertext {
  Bit value;
  std::string key_label;
};

inline Ciphertext xor_encrypt(Bit m, Bit k, std::string key_label = "K") {
  return Ciphertext{m ^ k, std::move(key_label)};
}

inline Bit xor_decrypt(const Ciphertext& c, Bit k) { return c.value ^ k; }

}  // namespace hmpc
