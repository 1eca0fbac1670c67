#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cellscale/exponents.hpp"
#include "cellscale/geometry.hpp"
#include "cellscale/imh.hpp"
#include "cellscale/ish.hpp"
#include "cellscale/link_rate.hpp"

namespace cellscale {

enum class Protocol { Ish, Imh };
std::string_view to_string(Protocol p);
Protocol protocol_from_string(std::string_view name);

struct SweepSettings {
  std::vector<std::size_t> n_values{256, 512, 1024, 2048, 4096, 8192, 16384};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Protocol> protocols{Protocol::Ish, Protocol::Imh};
  double c_occupancy = 1.5;
  double infeasible_threshold = kDefaultInfeasibleThreshold;
  Metric metric = Metric::Torus;
  ShareMode share_mode = ShareMode::ClosedForm;
  double fit_fraction = 0.5;  // share of the largest n values used for fitting
  double tolerance = 0.15;
  std::size_t threads = 0;    // 0: hardware concurrency
};

/// Seeds base, base+1, ..., base+count-1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

struct SweepRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::Ish;
  double feasible_rate = 0.0;
  RegimeLabel regime = RegimeLabel::BothDofLimited;
  double overspread_fraction = 0.0;
  double infeasible_route_fraction = 0.0;
  bool valid = true;
  // Diagnostics kept out of the rows CSV.
  double predicted_non_overspread = 0.0;  // ISH closed-form circle fraction
  std::size_t modal_bottleneck_hop = 0;   // IMH
  double first_hop_overspread = 0.0;      // IMH
  double later_hop_overspread = 0.0;      // IMH
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t points = 0;
};

struct TheoryComparison {
  double theory = 0.0;
  double margin = 0.0;  // |slope - theory|
  bool pass = false;
};

struct ProtocolSummary {
  Protocol protocol = Protocol::Ish;
  FitResult fit;
  TheoryComparison comparison;
};

struct SweepResult {
  ScalingExponents exponents;
  SweepSettings settings;
  std::vector<std::size_t> n_used;
  std::vector<std::string> warnings;
  std::vector<SweepRow> rows;  // sorted by (n, seed, protocol)
  std::vector<ProtocolSummary> summaries;

  bool all_pass() const;
  const ProtocolSummary* summary(Protocol p) const;
};

/// One point per n: geometric mean of the valid feasible rates across seeds.
struct AggregatePoint {
  std::size_t n = 0;
  double rate = 0.0;
  std::size_t samples = 0;
};
std::vector<AggregatePoint> aggregate(const std::vector<SweepRow>& rows, Protocol protocol);

/// OLS of log(rate) on log(n) over the largest max(ceil(N f), min(N, 4)) points,
/// with a 95% Student-t interval on the slope. Needs >= 4 distinct n values.
FitResult fit_exponent(const std::vector<AggregatePoint>& points, double fit_fraction = 0.5);

TheoryComparison compare_to_theory(double slope, const ScalingExponents& e, Protocol protocol,
                                   double tolerance = 0.15);

/// Runs every (n, seed) realization (in parallel, merged by index) and fits
/// each protocol. n values whose network cannot be built are dropped with a
/// warning; fewer than 4 remaining values is an error.
SweepResult run_sweep(const ScalingExponents& e, const SweepSettings& settings, const RateLawConstants& c = {});

/// Realization-level evaluation shared by the sweep and the CLI.
struct Realization {
  NetworkInstance instance;
  std::vector<SweepRow> rows;
};
Realization evaluate_realization(const ScalingExponents& e, std::size_t n, std::uint64_t seed,
                                 const SweepSettings& settings, const RateLawConstants& c);

}  // namespace cellscale
