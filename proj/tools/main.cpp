// cellscale: analytic exponents, regime maps, single realizations and full
// slope sweeps for the ISH / IMH downlink models.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "cellscale/config.hpp"
#include "cellscale/errors.hpp"
#include "cellscale/format.hpp"
#include "cellscale/imh.hpp"
#include "cellscale/ish.hpp"
#include "cellscale/output.hpp"
#include "cellscale/sweep.hpp"

namespace fs = std::filesystem;
using namespace cellscale;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_base;
  std::optional<std::size_t> seeds;
  std::optional<std::string> out_dir;
  std::optional<std::string> protocol;
  std::optional<double> tolerance;
  std::optional<std::size_t> threads;
};

Config resolve(const CommonOptions& o) {
  Config cfg = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (o.seed_base) cfg.seed_base = *o.seed_base;
  if (o.seeds) cfg.seed_count = *o.seeds;
  cfg.apply_seeds();
  if (o.out_dir) cfg.output.dir = *o.out_dir;
  if (o.tolerance) cfg.sweep.tolerance = *o.tolerance;
  if (o.threads) cfg.sweep.threads = *o.threads;
  if (o.protocol == "ish") {
    cfg.sweep.protocols = {Protocol::Ish};
  } else if (o.protocol == "imh") {
    cfg.sweep.protocols = {Protocol::Imh};
  } else if (o.protocol == "both") {
    cfg.sweep.protocols = {Protocol::Ish, Protocol::Imh};
  }
  return cfg;
}

void print_summary(const SweepResult& res) {
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& s : res.summaries) {
    std::printf("%-4s slope %+.4f  95%% CI [%+.4f, %+.4f]  theory %+.4f  margin %.4f  %s\n",
                std::string(to_string(s.protocol)).c_str(), s.fit.slope, s.fit.ci_low, s.fit.ci_high,
                s.comparison.theory, s.comparison.margin, s.comparison.pass ? "PASS" : "FAIL");
  }
}

int cmd_exponents(const Config& cfg) {
  const auto& e = cfg.exponents;
  std::printf("psi=%g nu=%g beta=%g gamma=%g alpha=%g\n", e.psi, e.nu, e.beta, e.gamma, e.alpha);
  std::printf("ISH threshold (alpha/2)(beta-nu) = %g\n", ish_threshold(e));
  std::printf("IMH threshold (alpha/2)(1-nu)    = %g\n", imh_threshold(e));
  std::printf("ISH exponent = %g\nIMH exponent = %g\nregime = %s%s\n\n", theorem_exponent_ish(e),
              theorem_exponent_imh(e), std::string(to_string(classify_regime(e))).c_str(),
              is_trivially_linear(e) ? " (trivially linear)" : "");
  std::vector<RegimeMapPoint> curve;
  for (const auto& pt : exponent_curve(e, cfg.regime_grid)) curve.push_back({pt, std::nullopt, std::nullopt});
  write_regime_map_csv(std::cout, curve);
  return 0;
}

int cmd_regime_map(const Config& cfg, bool theory_only) {
  const auto points = run_regime_map(cfg.exponents, cfg.regime_grid, cfg.sweep, cfg.rate_law, !theory_only);
  const fs::path dir = cfg.output.dir;
  {
    auto out = open_output(dir / "regime_map.csv");
    write_regime_map_csv(out, points);
  }
  {
    auto out = open_output(dir / "regime_map.svg");
    write_regime_map_svg(out, points, cfg.exponents);
  }
  write_regime_map_csv(std::cout, points);
  bool pass = true;
  for (const auto& p : points) {
    ScalingExponents at = cfg.exponents;
    at.psi = p.theory.dof_exponent - at.gamma;
    if (p.ish_measured) pass &= compare_to_theory(*p.ish_measured, at, Protocol::Ish, cfg.sweep.tolerance).pass;
    if (p.imh_measured) pass &= compare_to_theory(*p.imh_measured, at, Protocol::Imh, cfg.sweep.tolerance).pass;
  }
  std::cerr << "wrote " << (dir / "regime_map.csv").string() << " and " << (dir / "regime_map.svg").string() << '\n';
  return pass ? 0 : 1;
}

int cmd_simulate(const Config& cfg, std::size_t n, bool dumps) {
  const std::uint64_t seed = cfg.seed_base;
  const Realization real = evaluate_realization(cfg.exponents, n, seed, cfg.sweep, cfg.rate_law);
  const auto& inst = real.instance;
  std::printf("n=%zu m=%zu l=%zu W=%g A=%g r_cell=%g seed=%llu\n", inst.n, inst.m, inst.l, inst.bandwidth, inst.area,
              inst.r_cell, static_cast<unsigned long long>(seed));
  for (const auto& r : real.rows) {
    std::printf("%-4s feasible_rate=%s overspread_fraction=%s infeasible_route_fraction=%s\n",
                std::string(to_string(r.protocol)).c_str(), fmt_real(r.feasible_rate).c_str(),
                fmt_real(r.overspread_fraction).c_str(), fmt_real(r.infeasible_route_fraction).c_str());
    if (r.protocol == Protocol::Imh) std::printf("     modal_bottleneck_hop=%zu\n", r.modal_bottleneck_hop);
  }
  if (!dumps) return 0;

  const fs::path dir = cfg.output.dir;
  const bool has_ish = std::find(cfg.sweep.protocols.begin(), cfg.sweep.protocols.end(), Protocol::Ish) !=
                       cfg.sweep.protocols.end();
  const bool has_imh = std::find(cfg.sweep.protocols.begin(), cfg.sweep.protocols.end(), Protocol::Imh) !=
                       cfg.sweep.protocols.end();
  std::optional<RoutingGrid> grid;
  if (has_imh) grid = build_routing_grid(inst, cfg.sweep.c_occupancy);
  {
    auto out = open_output(dir / "instance.json");
    out << to_json(inst, grid ? &*grid : nullptr) << '\n';
  }
  if (has_ish) {
    const auto res = ish_evaluate(inst, ish_allocate(inst, cfg.sweep.share_mode), cfg.rate_law);
    auto out = open_output(dir / "ish_nodes.csv");
    write_ish_nodes_csv(out, res.nodes);
  }
  if (has_imh) {
    const auto schedule = make_schedule(*grid);
    const auto routes = imh_build_routes(inst, *grid);
    const auto res = imh_evaluate(inst, routes, schedule, cfg.rate_law, cfg.sweep.infeasible_threshold);
    auto out = open_output(dir / "imh_routes.csv");
    write_imh_routes_csv(out, res.routes);
  }
  std::cerr << "wrote dumps to " << dir.string() << '\n';
  return 0;
}

int cmd_sweep(const Config& cfg) {
  const SweepResult res = run_sweep(cfg.exponents, cfg.sweep, cfg.rate_law);
  const auto paths = emit_outputs(res, cfg.output.dir);
  print_summary(res);
  std::cerr << "wrote " << paths.rows.string() << " and " << paths.summary.string() << '\n';
  return res.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaling-law simulator for wideband cellular downlinks (ISH / IMH)"};
  app.require_subcommand(1);
  CommonOptions opts;
  app.add_option("--config", opts.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed-base", opts.seed_base, "First seed of the seed range");
  app.add_option("--seeds", opts.seeds, "Number of seeds");
  app.add_option("--out", opts.out_dir, "Output directory");
  app.add_option("--protocol", opts.protocol, "Protocols to run")->check(CLI::IsMember({"ish", "imh", "both"}));
  app.add_option("--tolerance", opts.tolerance, "Slope tolerance for the theory gates")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", opts.threads, "Worker threads (0 = all cores)");

  auto* exponents = app.add_subcommand("exponents", "Analytic exponents, thresholds and regime");
  bool theory_only = false;
  auto* regime = app.add_subcommand("regime-map", "Exponent curves vs psi+gamma with measured slopes (CSV + SVG)");
  regime->add_flag("--theory-only", theory_only, "Skip the Monte Carlo sweeps");
  std::optional<std::size_t> sim_n;
  bool dumps = false;
  auto* simulate = app.add_subcommand("simulate", "One realization with optional per-node / per-route dumps");
  simulate->add_option("--n", sim_n, "Node count")->check(CLI::PositiveNumber);
  simulate->add_flag("--dump", dumps, "Write instance.json, ish_nodes.csv and imh_routes.csv");
  auto* sweep = app.add_subcommand("sweep", "Dyadic n sweep, slope fits and theory gates");

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = resolve(opts);
    if (*exponents) return cmd_exponents(cfg);
    if (*regime) return cmd_regime_map(cfg, theory_only);
    if (*simulate) return cmd_simulate(cfg, sim_n.value_or(cfg.simulate_n), dumps || cfg.output.dumps);
    if (*sweep) return cmd_sweep(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const SizingError& e) {
    std::cerr << "sizing error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
