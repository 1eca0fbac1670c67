#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cellscale/exponents.hpp"
#include "cellscale/link_rate.hpp"
#include "cellscale/sweep.hpp"

namespace cellscale {

struct OutputSettings {
  std::string dir = "out";
  bool dumps = false;  // per-node (ISH) and per-route (IMH) CSVs in `simulate`
};

/// Everything a run needs. Sections of the JSON document map one-to-one:
/// exponents, constants, rate_law, sweep, output. See docs/config.md.
struct Config {
  ScalingExponents exponents;
  RateLawConstants rate_law;
  SweepSettings sweep;
  std::uint64_t seed_base = 1;
  std::size_t seed_count = 10;
  std::vector<double> regime_grid{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0};
  std::size_t simulate_n = 4096;
  OutputSettings output;

  /// Regenerates sweep.seeds from seed_base / seed_count.
  void apply_seeds();
};

/// Validated defaults (the separating configuration psi = 2, beta = 1/2).
Config default_config();

/// Missing keys keep their defaults; unknown keys and out-of-range values
/// throw ValidationError, unreadable files IoError.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);
std::string config_to_json(const Config& cfg);

}  // namespace cellscale
