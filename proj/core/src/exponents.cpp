#include "cellscale/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cellscale/errors.hpp"

namespace cellscale {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("invalid scaling exponents: " + what);
}

}  // namespace

void validate(const ScalingExponents& e) {
  require(std::isfinite(e.psi) && e.psi >= 0.0, "psi must be >= 0");
  require(e.nu >= 0.0 && e.nu <= 1.0, "nu must lie in [0, 1]");
  require(e.beta >= 0.0 && e.beta <= 1.0, "beta must lie in [0, 1]");
  require(e.gamma >= 0.0, "gamma must be >= 0");
  require(e.beta + e.gamma <= 1.0 + 1e-12, "beta + gamma must be <= 1");
  require(std::isfinite(e.alpha) && e.alpha > 2.0, "alpha must be > 2");
  require(e.W0 > 0.0, "W0 must be > 0");
  require(e.A0 > 0.0, "A0 must be > 0");
  require(e.m0 > 0.0, "m0 must be > 0");
  require(e.l0 > 0.0, "l0 must be > 0");
  require(e.P > 0.0, "P must be > 0");
  require(e.P_BS > 0.0, "P_BS must be > 0");
  require(e.N0 > 0.0, "N0 must be > 0");
}

std::string_view to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::BothDofLimited: return "BothDofLimited";
    case RegimeLabel::IshPowerImhDof: return "IshPowerImhDof";
    case RegimeLabel::BothPowerLimited: return "BothPowerLimited";
  }
  return "unknown";
}

double ish_threshold(const ScalingExponents& e) { return 0.5 * e.alpha * (e.beta - e.nu); }

double imh_threshold(const ScalingExponents& e) { return 0.5 * e.alpha * (1.0 - e.nu); }

double theorem_exponent_ish(const ScalingExponents& e) {
  validate(e);
  return e.beta - 1.0 + std::min(e.psi + e.gamma, ish_threshold(e));
}

double theorem_exponent_imh(const ScalingExponents& e) {
  validate(e);
  return e.beta - 1.0 + std::min(e.psi + e.gamma, imh_threshold(e));
}

RegimeLabel classify_regime(const ScalingExponents& e) {
  validate(e);
  const double dof = e.psi + e.gamma;
  if (dof < ish_threshold(e)) return RegimeLabel::BothDofLimited;
  if (dof < imh_threshold(e)) return RegimeLabel::IshPowerImhDof;
  return RegimeLabel::BothPowerLimited;
}

bool is_trivially_linear(const ScalingExponents& e) { return e.beta == 1.0 && e.gamma == 0.0; }

std::vector<CurvePoint> exponent_curve(const ScalingExponents& e, std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("exponent_curve: grid must not be empty");
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (double g : grid) {
    if (!(g >= 0.0)) throw ValidationError("exponent_curve: grid values must be >= 0");
    if (g < e.gamma) throw ValidationError("exponent_curve: grid value below gamma gives psi < 0");
    ScalingExponents at = e;
    at.psi = g - e.gamma;
    out.push_back({g, theorem_exponent_ish(at), theorem_exponent_imh(at), classify_regime(at)});
  }
  return out;
}

}  // namespace cellscale
