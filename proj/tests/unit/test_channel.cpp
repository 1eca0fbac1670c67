#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <vector>

#include "cellscale/channel.hpp"
#include "cellscale/errors.hpp"

using namespace cellscale;

namespace {

double brute_ring_sum(double alpha, double r_cell) {
  double sum = 0.0;
  for (int k = 1000000; k >= 1; --k) sum += 6.0 * k * std::pow(2.0 * k * r_cell, -alpha);
  return sum;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / x.size();
    my += std::log(y[i]) / y.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST(Channel, PathlossExamples) {
  EXPECT_DOUBLE_EQ(pathloss_gain(1.0, 4.0), 1.0);
  EXPECT_DOUBLE_EQ(pathloss_gain(2.0, 4.0), 0.0625);
  EXPECT_NEAR(pathloss_gain(10.0, 3.0), 0.001, 1e-18);
  EXPECT_THROW(pathloss_gain(0.0, 4.0), ValidationError);
  EXPECT_THROW(pathloss_gain(-1.0, 4.0), ValidationError);
  EXPECT_THROW(pathloss_gain(1.0, 2.0), ValidationError);
}

TEST(Channel, SingleBaseStationGivesNoiseOnly) {
  ScalingExponents e;
  e.N0 = 0.37;
  const auto inst = generate_network(e, 200, 1);
  ASSERT_EQ(inst.m, 1u);
  for (std::size_t u = 0; u < inst.n; ++u) EXPECT_EQ(interference_psd_ish(inst, u), 0.37);
}

TEST(Channel, TwoBaseStationsOneTerm) {
  ScalingExponents e;
  e.P_BS = 3.0;
  e.N0 = 0.5;
  e.W0 = 2.0;
  Domain d{100.0, 100.0, Metric::Finite};
  const auto inst = assemble_network(e, d, {{10, 50}, {40, 50}}, {{12, 50}, {30, 50}});
  ASSERT_EQ(inst.cell_of_node[0], 0u);
  // Node 0 is 28 m from the other station; W = W0 n^0 = 2, l = 1.
  EXPECT_NEAR(interference_psd_ish(inst, 0), 3.0 * std::pow(28.0, -4.0) / 2.0 + 0.5, 1e-15);
  EXPECT_NEAR(interference_psd_ish(inst, 1), 3.0 * std::pow(20.0, -4.0) / 2.0 + 0.5, 1e-15);
}

TEST(Channel, MatchesDirectDoubleLoop) {
  ScalingExponents e;
  e.beta = 0.5;
  e.psi = 0.5;
  e.N0 = 1e-3;
  const auto inst = generate_network(e, 1024, 3);
  const auto all = interference_psd_ish_all(inst);
  const double W = std::pow(1024.0, 0.5);
  for (std::size_t u = 0; u < inst.n; ++u) {
    double sum = 0.0;
    for (std::size_t b = 0; b < inst.m; ++b) {
      if (b == inst.cell_of_node[u]) continue;
      double dx = std::abs(inst.node_positions[u].x - inst.bs_positions[b].x);
      double dy = std::abs(inst.node_positions[u].y - inst.bs_positions[b].y);
      dx = std::min(dx, inst.domain.width - dx);
      dy = std::min(dy, inst.domain.height - dy);
      sum += std::pow(std::hypot(dx, dy), -4.0);
    }
    const double want = sum / W + 1e-3;
    EXPECT_NEAR(all[u], want, 1e-12 * want) << "node " << u;
    EXPECT_GE(all[u], e.N0);
  }
}

TEST(Channel, RingBoundExamples) {
  EXPECT_NEAR(interference_ring_bound(3.0, 1.0, 1.0, 1.0, 1, 0.0), brute_ring_sum(3.0, 1.0), 1e-6);
  EXPECT_NEAR(interference_ring_bound(4.0, 1.0, 1.0, 1.0, 1, 0.0), brute_ring_sum(4.0, 1.0), 1e-9);
  EXPECT_NEAR(interference_ring_bound(3.0, 1.0, 1.0, 1.0, 1, 0.0), 1.23370, 5e-6);
  EXPECT_NEAR(interference_ring_bound(4.0, 1.0, 1.0, 1.0, 1, 0.0), 0.45077, 5e-6);
  for (double a : {2.5, 3.0, 4.0, 5.5}) EXPECT_EQ(interference_ring_bound(a, 0.7, 0.0, 3.0, 2, 0.25), 0.25);
  EXPECT_THROW(interference_ring_bound(2.0, 1.0, 1.0, 1.0, 1, 0.0), ValidationError);
}

TEST(Channel, ZetaAgainstBoost) {
  for (double s : {1.1, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 10.0, 30.0}) {
    const double want = boost::math::zeta(s);
    EXPECT_NEAR(riemann_zeta(s), want, 2e-12 * want) << "s = " << s;
  }
  EXPECT_THROW(riemann_zeta(1.0), ValidationError);
}

TEST(Channel, InterferencePsdSkipsColocatedTransmitter) {
  Domain d{10.0, 10.0, Metric::Torus};
  const std::vector<Transmitter> tx{{{1, 1}, 5.0}, {{1, 3}, 2.0}};
  EXPECT_NEAR(interference_psd(d, {1, 1}, tx, 4.0, 1.0, 1, 0.1), 2.0 / 16.0 + 0.1, 1e-15);
  // Torus: the image 2 m away across the border.
  EXPECT_NEAR(interference_psd(d, {1, 9}, {tx.data(), 1}, 4.0, 2.0, 2, 0.0), 5.0 * std::pow(2.0, -4.0) / 4.0, 1e-15);
  EXPECT_EQ(interference_psd(d, {5, 5}, {}, 4.0, 1.0, 1, 0.3), 0.3);
}

TEST(ChannelProperties, RingDistanceBoundDominates) {
  // Interferers of ring k sit at >= (2k-1) r_cell from any node of the cell.
  for (double alpha : {3.0, 4.0}) {
    ScalingExponents e;
    e.beta = 0.5;
    e.alpha = alpha;
    for (std::uint64_t seed : {1u, 2u}) {
      const auto inst = generate_network(e, 4096, seed);
      double bound = 0.0;
      for (int k = 200000; k >= 1; --k) bound += 6.0 * k * std::pow((2.0 * k - 1.0) * inst.r_cell, -alpha);
      bound = bound * e.P_BS / (inst.bandwidth * static_cast<double>(inst.l)) + e.N0;
      for (std::size_t u = 0; u < inst.n; ++u) EXPECT_LE(interference_psd_ish(inst, u), bound);
    }
  }
}

TEST(ChannelProperties, InterferenceScalingAtFixedRelativePosition) {
  ScalingExponents e;
  e.beta = 0.5;
  e.psi = 0.5;
  const double expected = 0.5 * e.alpha * (e.beta - e.nu) - e.psi - e.gamma;
  std::vector<double> ns, term;
  for (std::size_t n = 2048; n <= 65536; n *= 2) {
    const auto inst = generate_network(e, n, 1);
    // Halfway from base station 0 towards its right-hand neighbour's edge.
    const Point rx = inst.domain.wrap({inst.bs_positions[0].x + 0.5 * inst.bs_spacing / 2, inst.bs_positions[0].y});
    std::vector<Transmitter> tx;
    for (std::size_t b = 1; b < inst.m; ++b) tx.push_back({inst.bs_positions[b], e.P_BS});
    ns.push_back(static_cast<double>(n));
    term.push_back(interference_psd(inst.domain, rx, tx, e.alpha, inst.bandwidth, inst.l, 0.0));
  }
  EXPECT_NEAR(log_log_slope(ns, term), expected, 0.15);
}
