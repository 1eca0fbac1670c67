#include "cellscale/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <exception>
#include <map>
#include <optional>
#include <thread>

#include "cellscale/errors.hpp"

namespace cellscale {

std::string_view to_string(Protocol p) { return p == Protocol::Ish ? "ish" : "imh"; }

Protocol protocol_from_string(std::string_view name) {
  if (name == "ish") return Protocol::Ish;
  if (name == "imh") return Protocol::Imh;
  throw ValidationError("unknown protocol '" + std::string(name) + "' (expected ish or imh)");
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = base + i;
  return seeds;
}

bool SweepResult::all_pass() const {
  return std::all_of(summaries.begin(), summaries.end(), [](const auto& s) { return s.comparison.pass; });
}

const ProtocolSummary* SweepResult::summary(Protocol p) const {
  for (const auto& s : summaries) {
    if (s.protocol == p) return &s;
  }
  return nullptr;
}

std::vector<AggregatePoint> aggregate(const std::vector<SweepRow>& rows, Protocol protocol) {
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    if (r.protocol != protocol || !r.valid) continue;
    auto& slot = acc[r.n];
    slot.first += std::log(r.feasible_rate);
    ++slot.second;
  }
  std::vector<AggregatePoint> out;
  for (const auto& [n, s] : acc) out.push_back({n, std::exp(s.first / static_cast<double>(s.second)), s.second});
  return out;
}

FitResult fit_exponent(const std::vector<AggregatePoint>& points, double fit_fraction) {
  const std::size_t N = points.size();
  if (N < 4) throw ValidationError("slope fit needs at least 4 aggregated points");
  if (!(fit_fraction > 0.0 && fit_fraction <= 1.0)) throw ValidationError("fit fraction must be in (0, 1]");
  const auto k = std::max(static_cast<std::size_t>(std::ceil(static_cast<double>(N) * fit_fraction - 1e-9)),
                          std::min<std::size_t>(N, 4));
  std::vector<double> x, y;
  for (std::size_t i = N - k; i < N; ++i) {
    if (!(points[i].rate > 0.0) || !std::isfinite(points[i].rate)) {
      throw ValidationError("slope fit needs positive finite rates");
    }
    x.push_back(std::log(static_cast<double>(points[i].n)));
    y.push_back(std::log(points[i].rate));
  }
  const double kd = static_cast<double>(k);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= kd;
  my /= kd;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("slope fit input has zero variance in n");

  FitResult fit;
  fit.points = k;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  const double se = std::sqrt(ssr / (kd - 2.0) / sxx);
  const boost::math::students_t dist(kd - 2.0);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.ci_low = fit.slope - t * se;
  fit.ci_high = fit.slope + t * se;
  return fit;
}

TheoryComparison compare_to_theory(double slope, const ScalingExponents& e, Protocol protocol, double tolerance) {
  TheoryComparison out;
  out.theory = protocol == Protocol::Ish ? theorem_exponent_ish(e) : theorem_exponent_imh(e);
  out.margin = std::abs(slope - out.theory);
  out.pass = std::isfinite(slope) && out.margin <= tolerance + 1e-12;
  return out;
}

Realization evaluate_realization(const ScalingExponents& e, std::size_t n, std::uint64_t seed,
                                 const SweepSettings& settings, const RateLawConstants& c) {
  Realization out{generate_network(e, n, seed, settings.metric), {}};
  const RegimeLabel regime = classify_regime(e);
  for (const Protocol p : settings.protocols) {
    SweepRow row;
    row.n = n;
    row.seed = seed;
    row.protocol = p;
    row.regime = regime;
    if (p == Protocol::Ish) {
      const IshResult res = ish_evaluate(out.instance, ish_allocate(out.instance, settings.share_mode), c);
      row.feasible_rate = res.feasible_rate;
      row.overspread_fraction = res.overspread_fraction;
      row.predicted_non_overspread = res.predicted_non_overspread;
    } else {
      const ImhResult res = imh_run(out.instance, settings.c_occupancy, c, settings.infeasible_threshold);
      row.feasible_rate = res.feasible_rate;
      row.overspread_fraction = res.overspread_fraction;
      row.infeasible_route_fraction = res.infeasible_fraction;
      row.valid = res.valid;
      row.modal_bottleneck_hop = res.modal_bottleneck_hop;
      row.first_hop_overspread = res.first_hop_overspread_fraction;
      row.later_hop_overspread = res.later_hop_overspread_fraction;
    }
    row.valid = row.valid && row.feasible_rate > 0.0 && std::isfinite(row.feasible_rate);
    out.rows.push_back(row);
  }
  return out;
}

SweepResult run_sweep(const ScalingExponents& e, const SweepSettings& settings, const RateLawConstants& c) {
  validate(e);
  validate(c);
  if (settings.n_values.size() < 4) throw ValidationError("sweep needs at least 4 n values");
  if (!std::is_sorted(settings.n_values.begin(), settings.n_values.end()) ||
      std::adjacent_find(settings.n_values.begin(), settings.n_values.end()) != settings.n_values.end()) {
    throw ValidationError("sweep n values must be strictly increasing");
  }
  if (settings.seeds.size() < 5) throw ValidationError("sweep needs at least 5 seeds");

  SweepResult result;
  result.exponents = e;
  result.settings = settings;

  const std::size_t n_count = settings.n_values.size();
  const std::size_t s_count = settings.seeds.size();
  const std::size_t items = n_count * s_count;
  std::vector<std::vector<SweepRow>> slots(items);
  std::vector<std::optional<std::string>> errors(items);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items; i = next++) {
      const std::size_t n = settings.n_values[i / s_count];
      const std::uint64_t seed = settings.seeds[i % s_count];
      try {
        slots[i] = evaluate_realization(e, n, seed, settings, c).rows;
      } catch (const SizingError& err) {
        errors[i] = err.what();
      } catch (const ValidationError& err) {
        errors[i] = err.what();
      }
    }
  };
  std::size_t threads = settings.threads == 0 ? std::thread::hardware_concurrency() : settings.threads;
  threads = std::clamp<std::size_t>(threads, 1, items);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t ni = 0; ni < n_count; ++ni) {
    const std::size_t n = settings.n_values[ni];
    std::optional<std::string> why;
    for (std::size_t si = 0; si < s_count && !why; ++si) why = errors[ni * s_count + si];
    if (why) {
      result.warnings.push_back("n=" + std::to_string(n) + " dropped: " + *why);
      continue;
    }
    result.n_used.push_back(n);
    for (std::size_t si = 0; si < s_count; ++si) {
      auto& rows = slots[ni * s_count + si];
      result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    }
  }
  if (result.n_used.size() < 4) {
    throw SizingError("fewer than 4 n values remain after dropping infeasible sizes");
  }

  for (const Protocol p : settings.protocols) {
    ProtocolSummary s;
    s.protocol = p;
    try {
      s.fit = fit_exponent(aggregate(result.rows, p), settings.fit_fraction);
      s.comparison = compare_to_theory(s.fit.slope, e, p, settings.tolerance);
    } catch (const ValidationError& err) {
      result.warnings.push_back(std::string(to_string(p)) + " fit failed: " + err.what());
      s.fit.slope = std::nan("");
      s.comparison = compare_to_theory(s.fit.slope, e, p, settings.tolerance);
    }
    result.summaries.push_back(s);
  }
  return result;
}

}  // namespace cellscale
