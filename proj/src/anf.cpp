#include "hmpc/anf.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hmpc::anf {

Poly Poly::var(unsigned i) {
  if (i >= 64) throw std::length_error("symbolic variable index exceeds 64");
  Poly p;
  p.mono.push_back(1ull << i);
  return p;
}

// XOR = symmetric difference of monomial sets.
Poly operator^(const Poly& a, const Poly& b) {
  Poly r;
  r.mono.reserve(a.mono.size() + b.mono.size());
  std::size_t i = 0, j = 0;
  while (i < a.mono.size() && j < b.mono.size()) {
    if (a.mono[i] < b.mono[j]) {
      r.mono.push_back(a.mono[i++]);
    } else if (b.mono[j] < a.mono[i]) {
      r.mono.push_back(b.mono[j++]);
    } else {
      ++i, ++j;  // equal monomials cancel
    }
  }
  r.mono.insert(r.mono.end(), a.mono.begin() + i, a.mono.end());
  r.mono.insert(r.mono.end(), b.mono.begin() + j, b.mono.end());
  return r;
}

// AND = all-pairs product; x^2 = x folds into the OR of masks, equal
// products cancel mod 2.
Poly operator&(const Poly& a, const Poly& b) {
  std::vector<std::uint64_t> prod;
  prod.reserve(a.mono.size() * b.mono.size());
  for (auto ma : a.mono)
    for (auto mb : b.mono) prod.push_back(ma | mb);
  std::sort(prod.begin(), prod.end());
  Poly r;
  for (std::size_t i = 0; i < prod.size();) {
    std::size_t j = i;
    while (j < prod.size() && prod[j] == prod[i]) ++j;
    if ((j - i) & 1) r.mono.push_back(prod[i]);
    i = j;
  }
  return r;
}

std::uint64_t Poly::support() const {
  std::uint64_t s = 0;
  for (auto m : mono) s |= m;
  return s;
}

bool Poly::linear_only_in(unsigned i) const {
  std::uint64_t bit = 1ull << i;
  bool linear = false;
  for (auto m : mono) {
    if (m == bit) {
      linear = true;
    } else if (m & bit) {
      return false;
    }
  }
  return linear;
}

Bit Poly::eval(std::uint64_t assignment) const {
  int acc = 0;
  for (auto m : mono) acc ^= ((m & assignment) == m) ? 1 : 0;
  return Bit(acc);
}

std::string Poly::str() const {
  if (mono.empty()) return "0";
  std::string s;
  for (std::size_t t = 0; t < mono.size(); ++t) {
    if (t) s += " + ";
    if (mono[t] == 0) {
      s += "1";
      continue;
    }
    bool first = true;
    for (unsigned i = 0; i < 64; ++i)
      if (mono[t] >> i & 1) {
        if (!first) s += "*";
        s += "x" + std::to_string(i);
        first = false;
      }
  }
  return s;
}

}  // namespace hmpc::anf
