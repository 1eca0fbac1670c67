#include "cellscale/format.hpp"

#include <array>
#include <charconv>

namespace cellscale {

std::string fmt_real(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

}  // namespace cellscale
