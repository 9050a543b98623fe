#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace robudom {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) noexcept {
  return (bits + kWordBits - 1) / kWordBits;
}

// Fixed-size bit vector with word-level access, used for coverage sets and
// as the row type of dense adjacency.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size) : size_(size), words_(words_for(size), 0) {}

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) noexcept {
    words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits));
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (const Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool all() const noexcept { return count() == size_; }

  // Bits past size() must stay zero in `row`.
  void or_words(std::span<const Word> row) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= row[k];
  }

  std::span<const Word> words() const noexcept { return words_; }

  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      Word w = words_[k];
      while (w != 0) {
        f(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  template <class F>
  void for_each_unset(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      Word w = ~words_[k];
      if (k + 1 == words_.size() && size_ % kWordBits != 0) {
        w &= (Word{1} << (size_ % kWordBits)) - 1;
      }
      while (w != 0) {
        f(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

}  // namespace robudom
