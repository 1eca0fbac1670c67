#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace cellscale {

/// Scaling exponents of the network parameters against the node count n,
/// together with the base constants they multiply:
///   W = W0 n^psi, A = A0 n^nu, m = m0 n^beta, l = l0 n^gamma.
struct ScalingExponents {
  double psi = 0.0;    // bandwidth
  double nu = 0.0;     // area
  double beta = 0.0;   // number of base stations
  double gamma = 0.0;  // antennas per base station
  double alpha = 4.0;  // path-loss exponent

  double W0 = 1.0;    // Hz
  double A0 = 1.0;    // m^2
  double m0 = 1.0;
  double l0 = 1.0;
  double P = 1.0;     // node transmit power, W
  double P_BS = 1.0;  // base-station transmit power, W
  double N0 = 1.0;    // thermal noise PSD, W/Hz
};

/// Throws ValidationError naming the first violated bound.
void validate(const ScalingExponents& e);

enum class RegimeLabel {
  BothDofLimited,
  IshPowerImhDof,
  BothPowerLimited,
};

std::string_view to_string(RegimeLabel label);

/// (alpha/2)(beta - nu): where single-hop transmissions turn power-limited.
double ish_threshold(const ScalingExponents& e);
/// (alpha/2)(1 - nu): where multi-hop transmissions turn power-limited.
double imh_threshold(const ScalingExponents& e);

double theorem_exponent_ish(const ScalingExponents& e);
double theorem_exponent_imh(const ScalingExponents& e);

/// A value of psi+gamma exactly on a threshold goes to the power-limited side.
RegimeLabel classify_regime(const ScalingExponents& e);

/// beta = 1, gamma = 0: every node has a dedicated non-scaling channel and
/// both protocols scale linearly.
bool is_trivially_linear(const ScalingExponents& e);

struct CurvePoint {
  double dof_exponent = 0.0;  // psi + gamma
  double ish = 0.0;
  double imh = 0.0;
  RegimeLabel regime = RegimeLabel::BothDofLimited;
};

/// Evaluates both theorem exponents along a grid of psi+gamma values. gamma is
/// kept from `e` and psi is set to (grid value - gamma), so grid values below
/// gamma are rejected.
std::vector<CurvePoint> exponent_curve(const ScalingExponents& e, std::span<const double> grid);

}  // namespace cellscale
