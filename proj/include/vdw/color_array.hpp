#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vdw {

enum class Color : std::uint8_t { kRed, kBlue };

/// Blue/red coloring of [N], bit-packed: bit n-1 is set iff position n is blue.
class ColorArray {
 public:
  ColorArray() = default;
  explicit ColorArray(std::int64_t n) : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {}

  std::int64_t size() const { return n_; }

  bool is_blue(std::int64_t pos) const {
    const auto b = static_cast<std::uint64_t>(pos - 1);
    return (words_[b >> 6] >> (b & 63)) & 1;
  }
  bool is_red(std::int64_t pos) const { return !is_blue(pos); }
  Color at(std::int64_t pos) const { return is_blue(pos) ? Color::kBlue : Color::kRed; }

  void set_blue(std::int64_t pos, bool blue = true) {
    const auto b = static_cast<std::uint64_t>(pos - 1);
    const std::uint64_t mask = std::uint64_t{1} << (b & 63);
    if (blue) words_[b >> 6] |= mask; else words_[b >> 6] &= ~mask;
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  std::int64_t count_blue() const;

  /// One 'B' or 'R' per position.
  std::string to_string() const;
  static ColorArray from_string(const std::string& colors);

  friend bool operator==(const ColorArray&, const ColorArray&) = default;

 private:
  std::int64_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace vdw
