#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmpc/bit.hpp"
#include "hmpc/rat.hpp"

namespace hmpc {

/// Pairwise pre-shared randomness. Deterministic: the same (seed, counter)
/// always yields the same value, so a tape can be replayed bit-identically.
/// Distinct pairs derive distinct seeds and therefore independent streams.
class RandomTape {
 public:
  RandomTape() = default;
  explicit RandomTape(std::array<std::uint8_t, 32> seed) : seed_(seed) {}

  /// Derive a tape from a master seed and a context string (e.g. the
  /// normalized party-pair name). Different contexts give independent tapes.
  static RandomTape derive(std::span<const std::uint8_t> master, std::string_view context);

  std::uint64_t counter() const { return counter_; }
  void reset(std::uint64_t counter = 0) { counter_ = counter; }

  Bit draw_bit();

  /// Uniform integer in [0, range), as an integer-valued Rat.
  /// Throws std::invalid_argument("empty key range") if range < 1.
  Rat draw_int(const BigInt& range);

 private:
  std::array<std::uint8_t, 32> seed_{};
  std::uint64_t counter_ = 0;

  std::array<std::uint8_t, 32> block(std::uint64_t ctr) const;
};

inline Bit draw_key_bit(RandomTape& t) { return t.draw_bit(); }
inline Rat draw_key_int(RandomTape& t, const BigInt& range) { return t.draw_int(range); }

/// Hex string -> bytes ("a1b2.."); odd length pads the last nibble.
std::vector<std::uint8_t> seed_from_hex(std::string_view hex);

}  // namespace hmpc
