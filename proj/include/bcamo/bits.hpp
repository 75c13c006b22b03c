#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bcamo {

/// Fixed-width bit vector. Bit 0 is printed leftmost.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  /// Parses a string of '0'/'1' characters; index 0 is the leftmost character.
  static BitVector from_string(std::string_view text);
  /// Bit i of the result is bit i of `value`.
  static BitVector from_uint(std::uint64_t value, std::size_t size);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const { return get(i); }
  void set(std::size_t i, bool value);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t count() const;
  std::string to_string() const;
  /// Requires size() <= 64.
  std::uint64_t to_uint() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend bool operator<(const BitVector& a, const BitVector& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.words_ < b.words_;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Input or output values of a netlist, indexed by primary-input (or output) order.
using Pattern = BitVector;
/// Key bits of a keyed netlist; index 0 is key input 0.
using Key = BitVector;

}  // namespace bcamo
