#include "vdw/color_array.hpp"

#include <bit>

#include "vdw/errors.hpp"

namespace vdw {

std::int64_t ColorArray::count_blue() const {
  std::int64_t total = 0;
  for (auto w : words_) total += std::popcount(w);
  return total;
}

std::string ColorArray::to_string() const {
  std::string out(static_cast<std::size_t>(n_), 'R');
  for (std::int64_t pos = 1; pos <= n_; ++pos)
    if (is_blue(pos)) out[static_cast<std::size_t>(pos - 1)] = 'B';
  return out;
}

ColorArray ColorArray::from_string(const std::string& colors) {
  ColorArray out(static_cast<std::int64_t>(colors.size()));
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (colors[i] == 'B') {
      out.set_blue(static_cast<std::int64_t>(i) + 1);
    } else if (colors[i] != 'R') {
      throw CertificateError("bad color character at position " + std::to_string(i + 1));
    }
  }
  return out;
}

}  // namespace vdw
