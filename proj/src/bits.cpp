#include "pi4/bits.hpp"

#include <cassert>

#include "pi4/error.hpp"

namespace pi4 {

std::optional<Bits> Bits::from_string(std::string_view s) {
  std::vector<uint8_t> raw;
  raw.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') return std::nullopt;
    raw.push_back(static_cast<uint8_t>(c - '0'));
  }
  return Bits(std::move(raw));
}

std::optional<Bits> Bits::parse_literal(std::string_view s) {
  if (s.size() < 3 || s[0] != '0') return std::nullopt;
  if (s[1] == 'b') return from_string(s.substr(2));
  if (s[1] != 'x') return std::nullopt;
  std::vector<uint8_t> raw;
  raw.reserve(4 * (s.size() - 2));
  for (char c : s.substr(2)) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
    else if (c >= 'A' && c <= 'F') v = 10 + (c - 'A');
    else return std::nullopt;
    for (int i = 3; i >= 0; --i) raw.push_back(static_cast<uint8_t>((v >> i) & 1));
  }
  return Bits(std::move(raw));
}

Bits Bits::from_uint(uint64_t v, size_t width) {
  std::vector<uint8_t> raw(width, 0);
  for (size_t i = 0; i < width && i < 64; ++i) {
    raw[width - 1 - i] = static_cast<uint8_t>((v >> i) & 1);
  }
  return Bits(std::move(raw));
}

Bits Bits::slice(size_t l, size_t r) const {
  if (!(l < r && r <= b_.size())) {
    fail(ErrorKind::SliceOutOfBounds,
         "slice [" + std::to_string(l) + ":" + std::to_string(r) +
             ") of a " + std::to_string(b_.size()) + "-bit string");
  }
  return Bits(std::vector<uint8_t>(b_.begin() + static_cast<long>(l),
                                   b_.begin() + static_cast<long>(r)));
}

Bits Bits::drop(size_t n) const {
  if (n > b_.size()) {
    fail(ErrorKind::Underflow, "drop " + std::to_string(n) + " of " +
                                   std::to_string(b_.size()) + " bits");
  }
  return Bits(std::vector<uint8_t>(b_.begin() + static_cast<long>(n), b_.end()));
}

Bits Bits::concat(const Bits& rhs) const {
  std::vector<uint8_t> raw = b_;
  raw.insert(raw.end(), rhs.b_.begin(), rhs.b_.end());
  return Bits(std::move(raw));
}

uint64_t Bits::to_uint() const {
  assert(b_.size() <= 64);
  uint64_t v = 0;
  for (uint8_t bit : b_) v = (v << 1) | bit;
  return v;
}

std::string Bits::to_string() const {
  std::string s;
  s.reserve(b_.size());
  for (uint8_t bit : b_) s.push_back(bit ? '1' : '0');
  return s;
}

size_t Bits::hash() const {
  // FNV-1a over bits plus the length, so "0" and "00" differ.
  size_t h = 1469598103934665603ull;
  auto mix = [&h](size_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(b_.size());
  for (uint8_t bit : b_) mix(bit);
  return h;
}

} // namespace pi4
