#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cellscale/geometry.hpp"

namespace cellscale {

/// Inputs to the two-regime link rate law.
struct LinkBudget {
  double W_u = 1.0;      // Hz allocated to the link
  double P_r = 1.0;      // W, mean received power
  double N_I = 1.0;      // W/Hz, interference plus noise
  std::size_t l_t = 1;   // antennas at the transmitter (PSD divisor)
};

/// d^(-alpha); throws ValidationError for d <= 0 or alpha <= 2.
double pathloss_gain(double d, double alpha);

/// Riemann zeta for s > 1: direct partial sum plus an Euler-Maclaurin tail,
/// truncated once the remainder bound drops below 1e-12 of the partial sum.
double riemann_zeta(double s);
inline constexpr double kZetaRelativeTolerance = 1e-12;

/// N_I seen by `node` under ISH: every base station other than the serving one
/// transmits P_BS, spread over W and the l antenna streams, plus N0.
double interference_psd_ish(const NetworkInstance& inst, std::size_t node);

/// interference_psd_ish for every node.
std::vector<double> interference_psd_ish_all(const NetworkInstance& inst);

/// Closed-form bound with interferers on hexagonal rings at distance >= (2k-1) r_cell:
/// (P_BS/(W l)) 6 (2 r_cell)^(-alpha) zeta(alpha-1) + N0.
double interference_ring_bound(double alpha, double r_cell, double P_BS, double W, std::size_t l, double N0);

struct Transmitter {
  Point position;
  double power = 0.0;  // W
};

/// N0 + sum over `tx` of power * d^(-alpha) / (W l_t), distances per `domain`.
/// Transmitters at the receiver position contribute nothing (a node never
/// interferes with itself).
double interference_psd(const Domain& domain, Point rx, std::span<const Transmitter> tx, double alpha, double W,
                        std::size_t l_t, double N0);

}  // namespace cellscale
