#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "cellscale/channel.hpp"
#include "cellscale/errors.hpp"
#include "cellscale/ish.hpp"

using namespace cellscale;

namespace {

ScalingExponents base(double psi, double beta) {
  ScalingExponents e;
  e.psi = psi;
  e.beta = beta;
  return e;
}

// Nodes on a circle around one station: every node sees the same channel.
NetworkInstance ring_layout(const ScalingExponents& e, std::size_t n, double radius) {
  std::vector<Point> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    nodes.push_back({50 + radius * std::cos(t), 50 + radius * std::sin(t)});
  }
  return assemble_network(e, {100, 100, Metric::Finite}, {{50, 50}}, nodes);
}

}  // namespace

TEST(Ish, SingleStationClosedForm) {
  const auto inst = generate_network(base(0.5, 0.0), 300, 1);
  const auto alloc = ish_allocate(inst);
  for (std::size_t u = 0; u < inst.n; ++u) {
    EXPECT_DOUBLE_EQ(alloc.bandwidth_of_node[u], inst.bandwidth / 300.0);
    EXPECT_DOUBLE_EQ(alloc.power_of_node[u], 1.0 / 300.0);
    EXPECT_EQ(alloc.stream_of_node[u], 0u);
  }
}

TEST(Ish, BudgetsPerCell) {
  auto e = base(1.0, 0.5);
  e.l0 = 3.0;
  const auto inst = generate_network(e, 4096, 2);
  ASSERT_EQ(inst.l, 3u);
  const auto exact = ish_allocate(inst, ShareMode::PerRealization);
  std::vector<double> w(inst.m, 0.0), p(inst.m, 0.0);
  for (std::size_t u = 0; u < inst.n; ++u) {
    w[inst.cell_of_node[u]] += exact.bandwidth_of_node[u];
    p[inst.cell_of_node[u]] += exact.power_of_node[u];
  }
  for (std::size_t b = 0; b < inst.m; ++b) {
    EXPECT_LE(w[b], inst.bandwidth * 3 * (1 + 1e-12));
    EXPECT_LE(p[b], e.P_BS * (1 + 1e-12));
  }
  // The closed form spends the whole network budget exactly.
  const auto closed = ish_allocate(inst);
  double w_all = 0.0, p_all = 0.0;
  for (std::size_t u = 0; u < inst.n; ++u) {
    w_all += closed.bandwidth_of_node[u];
    p_all += closed.power_of_node[u];
  }
  EXPECT_NEAR(w_all, inst.bandwidth * 3 * static_cast<double>(inst.m), 1e-9 * w_all);
  EXPECT_NEAR(p_all, e.P_BS * static_cast<double>(inst.m), 1e-9 * p_all);
}

TEST(Ish, UsersPerStream) {
  auto e = base(1.0, 0.5);
  e.l0 = 4.0;
  const auto inst = generate_network(e, 1024, 1);
  ASSERT_EQ(inst.m, 32u);
  ASSERT_EQ(inst.l, 4u);
  const auto alloc = ish_allocate(inst);
  std::vector<std::vector<std::size_t>> count(inst.m, std::vector<std::size_t>(4, 0));
  for (std::size_t u = 0; u < inst.n; ++u) ++count[inst.cell_of_node[u]][alloc.stream_of_node[u]];
  double total = 0.0;
  for (const auto& cell : count) {
    const auto [lo, hi] = std::minmax_element(cell.begin(), cell.end());
    EXPECT_LE(*hi - *lo, 1u);
    for (auto c : cell) total += static_cast<double>(c);
  }
  EXPECT_DOUBLE_EQ(total / (32.0 * 4.0), 8.0);
}

TEST(Ish, SizingError) {
  auto e = base(0.0, 1.0);
  e.m0 = 0.5;
  e.l0 = 4.0;
  Domain d{10, 10, Metric::Finite};
  const auto inst = assemble_network(e, d, {{2, 2}, {8, 8}}, {{1, 1}, {3, 3}, {7, 7}});
  EXPECT_THROW(ish_allocate(inst), SizingError);
}

TEST(Ish, DofBranchNearStation) {
  auto e = base(0.0, 0.0);
  e.W0 = 1e-3;
  const auto inst = ring_layout(e, 8, 0.5);
  const auto alloc = ish_allocate(inst);
  const RateLawConstants c;
  for (std::size_t u = 0; u < inst.n; ++u) {
    const auto r = ish_node_report(inst, alloc, u, c, interference_psd_ish(inst, u));
    EXPECT_EQ(r.branch, RateBranch::Dof);
    EXPECT_NEAR(r.rate, c.kappa_dof * 1e-3 / 8.0, 1e-18);
  }
}

TEST(Ish, PowerBranchAtEdge) {
  auto e = base(0.0, 0.0);
  e.W0 = 1e9;
  const auto inst = ring_layout(e, 8, 40.0);
  const auto alloc = ish_allocate(inst);
  const RateLawConstants c;
  for (std::size_t u = 0; u < inst.n; ++u) {
    const auto r = ish_node_report(inst, alloc, u, c, interference_psd_ish(inst, u));
    EXPECT_EQ(r.branch, RateBranch::Power);
    EXPECT_NEAR(r.rate, c.kappa_pow * (1.0 / 8.0) * std::pow(inst.serving_distance(u), -4.0) / e.N0, 1e-15);
  }
}

TEST(Ish, EndToEndOracle) {
  const auto e = base(2.0, 0.5);
  const auto inst = generate_network(e, 4096, 5);
  const auto alloc = ish_allocate(inst);
  const RateLawConstants c;
  const double n = 4096, m = static_cast<double>(inst.m), W = std::pow(n, 2.0);
  double worst = INFINITY;
  for (std::size_t u = 0; u < inst.n; ++u) {
    const Point p = inst.node_positions[u];
    double interference = 0.0, best_d2 = INFINITY;
    std::size_t serving = 0;
    std::vector<double> d2(inst.m);
    for (std::size_t b = 0; b < inst.m; ++b) {
      double dx = std::abs(p.x - inst.bs_positions[b].x), dy = std::abs(p.y - inst.bs_positions[b].y);
      dx = std::min(dx, inst.domain.width - dx);
      dy = std::min(dy, inst.domain.height - dy);
      d2[b] = dx * dx + dy * dy;
      if (d2[b] < best_d2) {
        best_d2 = d2[b];
        serving = b;
      }
    }
    for (std::size_t b = 0; b < inst.m; ++b) {
      if (b != serving) interference += 1.0 / (d2[b] * d2[b]);
    }
    const double N_I = interference / W + 1.0;
    const double W_u = W * m / n;
    const double P_r = (m / n) / (best_d2 * best_d2);
    const double W_star = (1.0 / std::numbers::ln2) * P_r / N_I;
    const double rate = W_u < W_star ? W_u : P_r / (N_I * std::numbers::ln2);
    EXPECT_NEAR(ish_node_rate(inst, alloc, u, c), rate, 1e-12 * rate) << "node " << u;
    worst = std::min(worst, rate);
  }
  EXPECT_NEAR(ish_feasible_rate(inst, alloc, c), worst, 1e-12 * worst);
  const auto res = ish_evaluate(inst, alloc, c);
  EXPECT_NEAR(res.feasible_rate, worst, 1e-12 * worst);
  EXPECT_NEAR(res.nodes[res.bottleneck_node].rate, worst, 1e-12 * worst);
}

TEST(Ish, SymmetricLayoutAllEqual) {
  const auto inst = ring_layout(base(1.0, 0.0), 64, 10.0);
  const auto alloc = ish_allocate(inst);
  const auto res = ish_evaluate(inst, alloc);
  for (const auto& r : res.nodes) EXPECT_NEAR(r.rate, res.feasible_rate, 1e-12 * r.rate);
}

TEST(Ish, FartherNodeWeaklyLowersFeasibleRate) {
  const auto e = base(0.0, 0.0);
  std::vector<Point> nodes{{40, 50}, {55, 52}, {50, 45}, {47, 58}};
  const Domain d{100, 100, Metric::Finite};
  const auto before = assemble_network(e, d, {{50, 50}}, nodes);
  nodes.push_back({95, 95});
  const auto after = assemble_network(e, d, {{50, 50}}, nodes);
  EXPECT_LE(ish_feasible_rate(after, ish_allocate(after)), ish_feasible_rate(before, ish_allocate(before)));
}

TEST(IshProperties, FeasibleIsExactMinimum) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto inst = generate_network(base(1.5, 0.5), 2048, seed);
    const auto res = ish_evaluate(inst, ish_allocate(inst));
    double m = INFINITY;
    for (const auto& r : res.nodes) m = std::min(m, r.rate);
    EXPECT_EQ(res.feasible_rate, m);
  }
}

TEST(IshProperties, BandwidthSaturation) {
  for (double psi : {0.25, 1.0, 3.0}) {
    auto e = base(psi, 0.5);
    auto doubled = e;
    doubled.W0 = 2.0;
    const auto a = generate_network(e, 2048, 4);
    const auto b = generate_network(doubled, 2048, 4);
    const double ratio = ish_feasible_rate(b, ish_allocate(b)) / ish_feasible_rate(a, ish_allocate(a));
    EXPECT_GE(ratio, 1.0 - 1e-12);
    EXPECT_LE(ratio, 2.0 + 1e-12);
  }
  // Far above every node's critical bandwidth the rate no longer moves.
  auto e = base(0.0, 0.5);
  e.W0 = 1e12;
  auto doubled = e;
  doubled.W0 = 2e12;
  const auto a = generate_network(e, 2048, 4);
  const auto b = generate_network(doubled, 2048, 4);
  const double ra = ish_feasible_rate(a, ish_allocate(a)), rb = ish_feasible_rate(b, ish_allocate(b));
  // Only the interference share of N_I still shrinks with W, by ~1e-8 here.
  EXPECT_NEAR(rb / ra, 1.0, 1e-6);
}

TEST(Ish, NodeCsv) {
  const auto inst = generate_network(base(1.0, 0.5), 256, 1);
  std::ostringstream os;
  write_ish_nodes_csv(os, ish_evaluate(inst, ish_allocate(inst)).nodes);
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "node,r_u,W_u,W_star,branch,rate");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 257);
}
