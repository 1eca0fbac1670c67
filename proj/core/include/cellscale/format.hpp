#pragma once

#include <string>

namespace cellscale {

/// Shortest round-trip decimal form of a double; used for every CSV cell so
/// outputs are byte-stable across runs.
std::string fmt_real(double v);

}  // namespace cellscale
