#include "bcamo/bits.hpp"

#include <bit>
#include <stdexcept>

namespace bcamo {

BitVector::BitVector(std::size_t size, bool value)
    : words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0), size_(size) {
  if (value && size % 64 != 0) {
    words_.back() &= (std::uint64_t{1} << (size % 64)) - 1;
  }
}

BitVector BitVector::from_string(std::string_view text) {
  BitVector bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits.set(i, true);
    } else if (text[i] != '0') {
      throw std::invalid_argument("bit string contains '" + std::string(1, text[i]) + "'");
    }
  }
  return bits;
}

BitVector BitVector::from_uint(std::uint64_t value, std::size_t size) {
  BitVector bits(size);
  for (std::size_t i = 0; i < size && i < 64; ++i) bits.set(i, (value >> i) & 1u);
  return bits;
}

void BitVector::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

std::uint64_t BitVector::to_uint() const {
  if (size_ > 64) throw std::length_error("bit vector wider than 64 bits");
  return words_.empty() ? 0 : words_[0];
}

}  // namespace bcamo
