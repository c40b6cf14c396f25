#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pi4 {

// Concrete bit string, most-significant-first: index 0 is the leftmost bit
// in listing order, so 0b1010 is [1,0,1,0] and slice(1,4) of 1010 is 010.
class Bits {
public:
  Bits() = default;
  explicit Bits(std::vector<uint8_t> raw) : b_(std::move(raw)) {}

  static Bits zeros(size_t n) { return Bits(std::vector<uint8_t>(n, 0)); }
  // "1010" -> Bits; any char other than 0/1 is rejected.
  static std::optional<Bits> from_string(std::string_view s);
  // Surface literals: 0b digits (width = digit count) or 0x digits
  // (width = 4 * digit count).
  static std::optional<Bits> parse_literal(std::string_view s);
  static Bits from_uint(uint64_t v, size_t width);

  size_t size() const { return b_.size(); }
  bool empty() const { return b_.empty(); }
  int at(size_t i) const { return b_[i]; }
  void push_back(int bit) { b_.push_back(static_cast<uint8_t>(bit)); }

  // Half-open slice [l, r); requires l < r <= size().
  Bits slice(size_t l, size_t r) const;
  // Suffix starting at n; requires n <= size().
  Bits drop(size_t n) const;
  Bits concat(const Bits& rhs) const;

  // Unsigned value of the bit string read MSB-first; requires size() <= 64.
  uint64_t to_uint() const;
  std::string to_string() const;

  bool operator==(const Bits&) const = default;
  size_t hash() const;

private:
  std::vector<uint8_t> b_;
};

} // namespace pi4
