#include "cellscale/channel.hpp"

#include <cmath>

#include "cellscale/errors.hpp"

namespace cellscale {

namespace {

// d2^(-alpha/2) without a sqrt; alpha = 4 is by far the common case.
double gain_from_d2(double d2, double alpha) {
  if (alpha == 4.0) return 1.0 / (d2 * d2);
  return std::pow(d2, -0.5 * alpha);
}

}  // namespace

double pathloss_gain(double d, double alpha) {
  if (!(d > 0.0)) throw ValidationError("path-loss distance must be > 0");
  if (!(alpha > 2.0)) throw ValidationError("path-loss exponent alpha must be > 2");
  return std::pow(d, -alpha);
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw ValidationError("zeta series diverges for s <= 1");
  // Tail from N: N^(1-s)/(s-1) + N^-s/2 + s N^(-s-1)/12 - s(s+1)(s+2) N^(-s-3)/720,
  // with remainder below s(s+1)(s+2)(s+3)(s+4) N^(-s-5)/30240.
  double partial = 0.0;
  for (int k = 1;; ++k) {
    partial += std::pow(static_cast<double>(k), -s);
    const double N = k + 1.0;
    const double remainder = s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * std::pow(N, -s - 5.0) / 30240.0;
    if (k >= 8 && remainder < kZetaRelativeTolerance * partial) {
      const double tail = std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s) +
                          s * std::pow(N, -s - 1.0) / 12.0 - s * (s + 1) * (s + 2) * std::pow(N, -s - 3.0) / 720.0;
      return partial + tail;
    }
  }
}

double interference_psd(const Domain& domain, Point rx, std::span<const Transmitter> tx, double alpha, double W,
                        std::size_t l_t, double N0) {
  double sum = 0.0;
  for (const auto& t : tx) {
    const double d2 = domain.distance_squared(rx, t.position);
    if (d2 > 0.0) sum += t.power * gain_from_d2(d2, alpha);
  }
  return sum / (W * static_cast<double>(l_t)) + N0;
}

double interference_psd_ish(const NetworkInstance& inst, std::size_t node) {
  const auto& e = inst.exponents;
  const Point p = inst.node_positions.at(node);
  const std::size_t serving = inst.cell_of_node[node];
  double sum = 0.0;
  for (std::size_t b = 0; b < inst.m; ++b) {
    if (b == serving) continue;
    sum += gain_from_d2(inst.domain.distance_squared(p, inst.bs_positions[b]), e.alpha);
  }
  return e.P_BS * sum / (inst.bandwidth * static_cast<double>(inst.l)) + e.N0;
}

std::vector<double> interference_psd_ish_all(const NetworkInstance& inst) {
  std::vector<double> out(inst.n);
  for (std::size_t u = 0; u < inst.n; ++u) out[u] = interference_psd_ish(inst, u);
  return out;
}

double interference_ring_bound(double alpha, double r_cell, double P_BS, double W, std::size_t l, double N0) {
  if (!(alpha > 2.0)) throw ValidationError("ring bound needs alpha > 2 (zeta(alpha-1) diverges otherwise)");
  if (!(r_cell > 0.0) || !(W > 0.0) || l == 0) throw ValidationError("ring bound needs r_cell, W, l > 0");
  return P_BS / (W * static_cast<double>(l)) * 6.0 * std::pow(2.0 * r_cell, -alpha) * riemann_zeta(alpha - 1.0) + N0;
}

}  // namespace cellscale
