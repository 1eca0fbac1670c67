#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cellscale/config.hpp"
#include "cellscale/errors.hpp"
#include "cellscale/output.hpp"
#include "cellscale/sweep.hpp"

using namespace cellscale;

namespace {

std::vector<AggregatePoint> power_law(double exponent, double scale, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, noise);
  std::vector<AggregatePoint> pts;
  for (std::size_t n = 256; n <= 16384; n *= 2) {
    pts.push_back({n, scale * std::pow(static_cast<double>(n), exponent) * (1.0 + jitter(rng)), 1});
  }
  return pts;
}

SweepSettings small_settings() {
  SweepSettings s;
  s.n_values = {256, 512, 1024, 2048};
  s.seeds = seed_range(1, 5);
  s.threads = 2;
  return s;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ScalingExponents separating() {
  ScalingExponents e;
  e.psi = 2.0;
  e.beta = 0.5;
  e.N0 = 10.0;
  e.P = 5000.0;
  return e;
}

}  // namespace

TEST(Fit, ExactPowerLaw) {
  const auto fit = fit_exponent(power_law(0.5, 3.0, 0.0, 1));
  EXPECT_NEAR(fit.slope, 0.5, 1e-12);
  EXPECT_NEAR(fit.ci_high - fit.ci_low, 0.0, 1e-9);
  EXPECT_EQ(fit.points, 4u);  // upper half of 7 points, at least 4
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-9);
}

TEST(Fit, NoisyInverseLaw) {
  const auto pts = power_law(-1.0, 7.0, 0.01, 42);
  const auto fit = fit_exponent(pts);
  EXPECT_NEAR(fit.slope, -1.0, 0.05);
  EXPECT_LT(fit.ci_low, fit.slope);
  EXPECT_GT(fit.ci_high, fit.slope);
  // Independent OLS over the same window with a Student-t interval.
  const std::size_t k = 4, first = pts.size() - k;
  double mx = 0, my = 0;
  for (std::size_t i = first; i < pts.size(); ++i) {
    mx += std::log(static_cast<double>(pts[i].n)) / k;
    my += std::log(pts[i].rate) / k;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = first; i < pts.size(); ++i) {
    const double dx = std::log(static_cast<double>(pts[i].n)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(pts[i].rate) - my);
  }
  const double slope = sxy / sxx;
  double sse = 0;
  for (std::size_t i = first; i < pts.size(); ++i) {
    const double r = std::log(pts[i].rate) - (my + slope * (std::log(static_cast<double>(pts[i].n)) - mx));
    sse += r * r;
  }
  const double se = std::sqrt(sse / (k - 2) / sxx);
  const double t = boost::math::quantile(boost::math::students_t(k - 2), 0.975);
  EXPECT_NEAR(fit.slope, slope, 1e-12);
  EXPECT_NEAR(fit.ci_high, slope + t * se, 1e-9);
  EXPECT_NEAR(fit.ci_low, slope - t * se, 1e-9);
}

TEST(Fit, ConstantRateAndWindow) {
  EXPECT_NEAR(fit_exponent(power_law(0.0, 2.0, 0.0, 1)).slope, 0.0, 1e-12);
  EXPECT_EQ(fit_exponent(power_law(0.0, 2.0, 0.0, 1), 1.0).points, 7u);
}

TEST(Fit, RejectsDegenerateInput) {
  auto pts = power_law(1.0, 1.0, 0.0, 1);
  pts.resize(3);
  EXPECT_THROW(fit_exponent(pts), ValidationError);
  std::vector<AggregatePoint> same(5, AggregatePoint{1024, 2.0, 1});
  EXPECT_THROW(fit_exponent(same, 1.0), ValidationError);
  auto bad = power_law(1.0, 1.0, 0.0, 1);
  bad.back().rate = 0.0;
  EXPECT_THROW(fit_exponent(bad), ValidationError);
}

TEST(Aggregate, GeometricMeanOfValidRows) {
  std::vector<SweepRow> rows;
  const auto row = [](std::size_t n, Protocol p, double rate, bool valid) {
    SweepRow r;
    r.n = n;
    r.protocol = p;
    r.feasible_rate = rate;
    r.valid = valid;
    return r;
  };
  rows.push_back(row(256, Protocol::Ish, 2.0, true));
  rows.push_back(row(256, Protocol::Ish, 8.0, true));
  rows.push_back(row(256, Protocol::Ish, 1000.0, false));
  rows.push_back(row(256, Protocol::Imh, 5.0, true));
  rows.push_back(row(512, Protocol::Ish, 3.0, true));
  const auto agg = aggregate(rows, Protocol::Ish);
  ASSERT_EQ(agg.size(), 2u);
  EXPECT_NEAR(agg[0].rate, 4.0, 1e-12);
  EXPECT_EQ(agg[0].samples, 2u);
  EXPECT_NEAR(agg[1].rate, 3.0, 1e-12);
}

TEST(Compare, TheoryExamples) {
  ScalingExponents zero;
  EXPECT_DOUBLE_EQ(compare_to_theory(-1.0, zero, Protocol::Ish).theory, -1.0);
  EXPECT_DOUBLE_EQ(compare_to_theory(-1.0, zero, Protocol::Imh).theory, -1.0);
  ScalingExponents e;
  e.psi = 2.0;
  e.beta = 0.5;
  EXPECT_DOUBLE_EQ(compare_to_theory(0.0, e, Protocol::Ish).theory, 0.5);
  EXPECT_DOUBLE_EQ(compare_to_theory(0.0, e, Protocol::Imh).theory, 1.5);
  EXPECT_TRUE(compare_to_theory(0.6, e, Protocol::Ish).pass);
  EXPECT_FALSE(compare_to_theory(0.7, e, Protocol::Ish).pass);
  EXPECT_NEAR(compare_to_theory(0.7, e, Protocol::Ish).margin, 0.2, 1e-12);
  // On the ISH kink either neighbouring slope is accepted.
  e.psi = 1.0;
  EXPECT_TRUE(compare_to_theory(0.45, e, Protocol::Ish).pass);
  EXPECT_TRUE(compare_to_theory(0.55, e, Protocol::Ish).pass);
  EXPECT_TRUE(compare_to_theory(0.6, e, Protocol::Ish, 0.1).pass);
  EXPECT_FALSE(compare_to_theory(0.61, e, Protocol::Ish, 0.1).pass);
}

TEST(Sweep, SeedRange) {
  EXPECT_EQ(seed_range(7, 3), (std::vector<std::uint64_t>{7, 8, 9}));
  EXPECT_TRUE(seed_range(7, 0).empty());
}

TEST(Sweep, RowCardinalityAndOrder) {
  const auto res = run_sweep(separating(), small_settings());
  EXPECT_EQ(res.rows.size(), 40u);
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    const auto& a = res.rows[i - 1];
    const auto& b = res.rows[i];
    EXPECT_LT(std::tuple(a.n, a.seed, static_cast<int>(a.protocol)), std::tuple(b.n, b.seed, static_cast<int>(b.protocol)));
  }
  EXPECT_EQ(res.summaries.size(), 2u);
  EXPECT_EQ(res.n_used.size(), 4u);
}

TEST(Sweep, DeterministicBytes) {
  const auto dir = std::filesystem::temp_directory_path() / "cellscale_sweep_test";
  std::filesystem::remove_all(dir);
  auto s = small_settings();
  const auto a = emit_outputs(run_sweep(separating(), s), dir / "a");
  s.threads = 1;
  const auto b = emit_outputs(run_sweep(separating(), s), dir / "b");
  EXPECT_EQ(read_file(a.rows), read_file(b.rows));
  EXPECT_EQ(read_file(a.summary), read_file(b.summary));
  EXPECT_FALSE(read_file(a.rows).empty());
  std::filesystem::remove_all(dir);
}

TEST(Sweep, TriviallyLinearConfigHasEqualSlopes) {
  ScalingExponents e;
  e.beta = 1.0;
  e.m0 = 0.25;
  e.psi = 0.5;
  auto s = small_settings();
  s.n_values = {1024, 2048, 4096, 8192};
  const auto res = run_sweep(e, s);
  const auto* ish = res.summary(Protocol::Ish);
  const auto* imh = res.summary(Protocol::Imh);
  ASSERT_NE(ish, nullptr);
  ASSERT_NE(imh, nullptr);
  EXPECT_DOUBLE_EQ(ish->comparison.theory, imh->comparison.theory);
  EXPECT_NEAR(ish->fit.slope, imh->fit.slope, 0.15);
}

TEST(Sweep, DropsInfeasibleSizes) {
  ScalingExponents e;
  e.beta = 0.5;
  e.gamma = 0.5;
  e.l0 = 2.0;  // m l = 2n: never enough nodes
  auto s = small_settings();
  EXPECT_THROW(run_sweep(e, s), SizingError);
  ScalingExponents f;
  f.beta = 0.5;
  f.m0 = 0.02;  // m0 sqrt(n) < 0.5 below n = 625
  s.n_values = {256, 1024, 2048, 4096, 8192};
  const auto res = run_sweep(f, s);
  ASSERT_EQ(res.warnings.size(), 1u);
  EXPECT_NE(res.warnings[0].find("n=256"), std::string::npos);
  EXPECT_EQ(res.n_used.size(), 4u);
}

TEST(Sweep, RejectsBadSettings) {
  auto s = small_settings();
  s.seeds = seed_range(1, 4);
  EXPECT_THROW(run_sweep(separating(), s), ValidationError);
  s = small_settings();
  s.n_values = {256, 512, 512, 1024};
  EXPECT_THROW(run_sweep(separating(), s), ValidationError);
  s.n_values = {256, 512, 1024};
  EXPECT_THROW(run_sweep(separating(), s), ValidationError);
}

TEST(Output, CsvHeaders) {
  std::ostringstream rows, summary, map;
  write_rows_csv(rows, {});
  write_summary_csv(summary, {});
  EXPECT_EQ(rows.str(), "n,seed,protocol,feasible_rate,regime,overspread_fraction,infeasible_route_fraction\n");
  EXPECT_EQ(summary.str(), "protocol,slope,ci_low,ci_high,theory,pass\n");
  ScalingExponents e;
  e.beta = 0.5;
  const auto points = run_regime_map(e, {0.5, 1.5, 2.5}, small_settings(), {}, false);
  write_regime_map_csv(map, points);
  const auto text = map.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "psi_plus_gamma,ish_theory,imh_theory,regime,ish_measured,imh_measured");
  EXPECT_NE(text.find("IshPowerImhDof"), std::string::npos);
  std::ostringstream svg;
  write_regime_map_svg(svg, points, e);
  EXPECT_NE(svg.str().find("<svg"), std::string::npos);
  EXPECT_NE(svg.str().find("</svg>"), std::string::npos);
}

TEST(Output, EmptyProtocolSetGivesHeaderOnlySummary) {
  auto s = small_settings();
  s.protocols.clear();
  const auto res = run_sweep(separating(), s);
  std::ostringstream os;
  write_summary_csv(os, res.summaries);
  EXPECT_EQ(os.str(), "protocol,slope,ci_low,ci_high,theory,pass\n");
}

TEST(Output, UnwritablePathNamesIt) {
  try {
    open_output("/proc/definitely/not/here.csv");
    FAIL() << "expected IoError";
  } catch (const IoError& err) {
    EXPECT_NE(std::string(err.what()).find("/proc/definitely/not"), std::string::npos);
  }
}

TEST(Config, DefaultsRoundTrip) {
  const auto cfg = default_config();
  EXPECT_DOUBLE_EQ(cfg.exponents.psi, 2.0);
  EXPECT_DOUBLE_EQ(cfg.exponents.beta, 0.5);
  EXPECT_EQ(cfg.sweep.seeds.size(), cfg.seed_count);
  const auto again = parse_config(config_to_json(cfg));
  EXPECT_EQ(config_to_json(again), config_to_json(cfg));
}

TEST(Config, ParsesSectionsAndKeepsDefaults) {
  const auto cfg = parse_config(R"({"exponents":{"psi":0.25},"constants":{"N0":3},
    "rate_law":{"kappa_dof":2},"sweep":{"seeds":6,"seed_base":100,"protocols":["imh"],"metric":"finite"},
    "output":{"dir":"x"}})");
  EXPECT_DOUBLE_EQ(cfg.exponents.psi, 0.25);
  EXPECT_DOUBLE_EQ(cfg.exponents.beta, 0.5);
  EXPECT_DOUBLE_EQ(cfg.exponents.N0, 3.0);
  EXPECT_DOUBLE_EQ(cfg.rate_law.kappa_dof, 2.0);
  EXPECT_EQ(cfg.sweep.seeds, seed_range(100, 6));
  EXPECT_EQ(cfg.sweep.protocols, std::vector<Protocol>{Protocol::Imh});
  EXPECT_EQ(cfg.sweep.metric, Metric::Finite);
  EXPECT_EQ(cfg.output.dir, "x");
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config(R"({"exponent":{}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"sweep":{"seedz":3}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"exponents":{"psi":"two"}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"sweep":{"c_occupancy":1.0}})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"exponents":{"beta":0.8,"gamma":0.5}})"), ValidationError);
  EXPECT_THROW(parse_config("{not json"), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
  try {
    parse_config(R"({"sweep":{"seedz":3}})");
  } catch (const ValidationError& err) {
    EXPECT_NE(std::string(err.what()).find("sweep.seedz"), std::string::npos);
  }
}
