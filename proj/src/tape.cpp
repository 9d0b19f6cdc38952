#include "hmpc/tape.hpp"

#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>

namespace hmpc {

namespace {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

}  // namespace

RandomTape RandomTape::derive(std::span<const std::uint8_t> master, std::string_view context) {
  std::vector<std::uint8_t> buf(master.begin(), master.end());
  buf.push_back(0x1f);  // domain separator
  buf.insert(buf.end(), context.begin(), context.end());
  return RandomTape(sha256(buf));
}

std::array<std::uint8_t, 32> RandomTape::block(std::uint64_t ctr) const {
  std::array<std::uint8_t, 40> buf{};
  std::memcpy(buf.data(), seed_.data(), 32);
  for (int i = 0; i < 8; ++i) buf[32 + i] = static_cast<std::uint8_t>(ctr >> (8 * i));
  return sha256(buf);
}

Bit RandomTape::draw_bit() {
  auto b = block(counter_++);
  return Bit(b[0] & 1);
}

Rat RandomTape::draw_int(const BigInt& range) {
  if (range < 1) throw std::invalid_argument("empty key range");
  if (range == 1) {
    ++counter_;  // still consumes a draw, keeping replay aligned
    return Rat(0);
  }
  // Number of bits needed to cover [0, range).
  unsigned nbits = static_cast<unsigned>(boost::multiprecision::msb(range - 1)) + 1;
  // Rejection sampling over fresh blocks; deterministic given (seed, counter).
  for (;;) {
    auto b = block(counter_++);
    BigInt v = 0;
    unsigned need = nbits;
    for (unsigned i = 0; i < 32 && need > 0; ++i) {
      unsigned take = need >= 8 ? 8 : need;
      v <<= take;
      v |= b[i] >> (8 - take);
      need -= take;
    }
    if (v < range) return Rat(v);
  }
}

std::vector<std::uint8_t> seed_from_hex(std::string_view hex) {
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit in seed");
  };
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nib(hex[i]);
    int lo = i + 1 < hex.size() ? nib(hex[i + 1]) : 0;
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

}  // namespace hmpc
