#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <vector>

#include "cellscale/exponents.hpp"
#include "cellscale/sweep.hpp"

namespace cellscale {

/// n,seed,protocol,feasible_rate,regime,overspread_fraction,infeasible_route_fraction
void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows);
/// protocol,slope,ci_low,ci_high,theory,pass
void write_summary_csv(std::ostream& os, const std::vector<ProtocolSummary>& summaries);

struct RegimeMapPoint {
  CurvePoint theory;
  std::optional<double> ish_measured;
  std::optional<double> imh_measured;
};

/// Theory curves along `grid` (psi + gamma values) and, when `measure` is set,
/// one full sweep per grid point for the measured slopes.
std::vector<RegimeMapPoint> run_regime_map(const ScalingExponents& e, const std::vector<double>& grid,
                                           const SweepSettings& settings, const RateLawConstants& c, bool measure);

/// psi_plus_gamma,ish_theory,imh_theory,regime,ish_measured,imh_measured
void write_regime_map_csv(std::ostream& os, const std::vector<RegimeMapPoint>& points);
/// Standalone SVG: both exponent curves against psi + gamma, measured slopes as markers.
void write_regime_map_svg(std::ostream& os, const std::vector<RegimeMapPoint>& points, const ScalingExponents& e);

/// Paths written by emit_outputs.
struct OutputPaths {
  std::filesystem::path rows;
  std::filesystem::path summary;
};

/// Writes rows.csv and summary.csv under `dir` (created if needed). Throws
/// IoError naming the path on failure.
OutputPaths emit_outputs(const SweepResult& result, const std::filesystem::path& dir);

/// Opens `path` for writing (creating parent directories); IoError on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace cellscale
