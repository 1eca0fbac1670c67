#include "cellscale/link_rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cellscale/errors.hpp"

namespace cellscale {

void validate(const RateLawConstants& c) {
  if (!(c.kappa_dof > 0.0) || !(c.kappa_pow > 0.0)) throw ValidationError("rate-law constants must be > 0");
}

std::string_view to_string(RateBranch b) { return b == RateBranch::Dof ? "dof" : "power"; }

double critical_bandwidth(const LinkBudget& b, const RateLawConstants& c) {
  return c.kappa_pow / c.kappa_dof * b.P_r / b.N_I;
}

RateBranch link_branch(const LinkBudget& b, const RateLawConstants& c) {
  return b.W_u < critical_bandwidth(b, c) ? RateBranch::Dof : RateBranch::Power;
}

double link_rate(const LinkBudget& b, const RateLawConstants& c) {
  return link_branch(b, c) == RateBranch::Dof ? c.kappa_dof * b.W_u : c.kappa_pow * b.P_r / b.N_I;
}

double critical_distance(double P_BS, std::size_t l, double W, double N_I, double alpha, const RateLawConstants& c) {
  return std::pow(c.kappa_pow * P_BS / (c.kappa_dof * static_cast<double>(l) * N_I * W), 1.0 / alpha);
}

double critical_distance_ish(const ScalingExponents& e, double n, const RateLawConstants& c, double N_I) {
  const double l = e.l0 * std::pow(n, e.gamma);
  const double W = e.W0 * std::pow(n, e.psi);
  return std::pow(c.kappa_pow * e.P_BS / (c.kappa_dof * l * N_I * W), 1.0 / e.alpha);
}

double overspread_fraction_ish(const ScalingExponents& e, double n, double r_star) {
  if (!(r_star > 0.0)) throw ValidationError("critical distance must be > 0");
  const double cell_area = e.A0 * std::pow(n, e.nu) / (e.m0 * std::pow(n, e.beta));
  return std::min(2.0 * std::numbers::pi * r_star * r_star / cell_area, 1.0);
}

double overspread_fraction_exponent(const ScalingExponents& e) {
  return -2.0 * (e.gamma + e.psi) / e.alpha + (e.beta - e.nu);
}

}  // namespace cellscale
