#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace brt {

/// Set of upgraded segments, stored as a bitset over 0-based segment
/// positions (position i is segment e_{i+1}).
///
/// Ordering compares the sets as unsigned integers whose bit i is segment
/// e_{i+1}; the minimum under this order is the canonical tie-break among
/// equally good solutions (it avoids late segments first).
class UpgradeSet {
 public:
  UpgradeSet() = default;
  explicit UpgradeSet(std::size_t segment_count)
      : size_(segment_count), words_((segment_count + 63) / 64, 0) {}

  static UpgradeSet from_positions(std::size_t segment_count, const std::vector<std::size_t>& positions) {
    UpgradeSet s(segment_count);
    for (auto p : positions) s.insert(p);
    return s;
  }

  /// Lowest `segment_count` bits of `mask`.
  static UpgradeSet from_mask(std::size_t segment_count, std::uint64_t mask) {
    UpgradeSet s(segment_count);
    for (std::size_t i = 0; i < segment_count && i < 64; ++i) {
      if ((mask >> i) & 1U) s.insert(i);
    }
    return s;
  }

  static UpgradeSet full(std::size_t segment_count) {
    UpgradeSet s(segment_count);
    for (std::size_t i = 0; i < segment_count; ++i) s.insert(i);
    return s;
  }

  std::size_t size() const { return size_; }

  bool contains(std::size_t pos) const {
    check(pos);
    return (words_[pos / 64] >> (pos % 64)) & 1U;
  }
  void insert(std::size_t pos) {
    check(pos);
    words_[pos / 64] |= std::uint64_t{1} << (pos % 64);
  }
  void erase(std::size_t pos) {
    check(pos);
    words_[pos / 64] &= ~(std::uint64_t{1} << (pos % 64));
  }
  void assign(std::size_t pos, bool value) { value ? insert(pos) : erase(pos); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::vector<std::size_t> positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i) {
      if (contains(i)) out.push_back(i);
    }
    return out;
  }

  bool is_subset_of(const UpgradeSet& other) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      const std::uint64_t theirs = w < other.words_.size() ? other.words_[w] : 0;
      if (words_[w] & ~theirs) return false;
    }
    return true;
  }

  /// Lower 64 bits; only meaningful for lines with at most 64 segments.
  std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

  /// Lowercase hex of the whole bitset, no prefix, no leading zeros ("0" when empty).
  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t w = words_.size(); w-- > 0;) {
      for (int nib = 15; nib >= 0; --nib) {
        const auto d = static_cast<unsigned>((words_[w] >> (nib * 4)) & 0xFU);
        if (out.empty() && d == 0) continue;
        out.push_back(kDigits[d]);
      }
    }
    return out.empty() ? "0" : out;
  }

  /// Inverse of to_hex; an optional "0x" prefix is accepted.
  static UpgradeSet from_hex(std::size_t segment_count, std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.empty()) throw std::invalid_argument("empty witness mask");
    UpgradeSet s(segment_count);
    std::size_t bit = 0;
    for (std::size_t k = hex.size(); k-- > 0; bit += 4) {
      const char c = hex[k];
      unsigned d = 0;
      if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') d = static_cast<unsigned>(c - 'A' + 10);
      else throw std::invalid_argument("bad hex digit in witness mask: '" + std::string(hex) + "'");
      for (unsigned b = 0; b < 4; ++b) {
        if (!((d >> b) & 1U)) continue;
        if (bit + b >= segment_count) throw std::invalid_argument("witness mask has bits beyond the line");
        s.insert(bit + b);
      }
    }
    return s;
  }

  friend bool operator==(const UpgradeSet& a, const UpgradeSet& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  /// Integer order of the bitmasks (most significant = last segment).
  friend std::strong_ordering operator<=>(const UpgradeSet& a, const UpgradeSet& b) {
    const std::size_t n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t w = n; w-- > 0;) {
      const std::uint64_t x = w < a.words_.size() ? a.words_[w] : 0;
      const std::uint64_t y = w < b.words_.size() ? b.words_[w] : 0;
      if (x != y) return x <=> y;
    }
    return std::strong_ordering::equal;
  }

 private:
  void check(std::size_t pos) const {
    if (pos >= size_) throw std::out_of_range("segment position out of range");
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace brt
