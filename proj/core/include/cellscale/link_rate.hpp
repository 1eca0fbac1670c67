#pragma once

#include <cstddef>
#include <numbers>
#include <string_view>

#include "cellscale/channel.hpp"
#include "cellscale/exponents.hpp"

namespace cellscale {

/// Constants of the two-regime rate law. With the defaults the power branch
/// is the wideband AWGN limit P_r / (N_I ln 2).
struct RateLawConstants {
  double kappa_dof = 1.0;                  // bits/s/Hz below the critical bandwidth
  double kappa_pow = 1.0 / std::numbers::ln2;  // multiplies P_r/N_I above it
};

void validate(const RateLawConstants& c);

enum class RateBranch { Dof, Power };
std::string_view to_string(RateBranch b);

/// W* = (kappa_pow / kappa_dof) P_r / N_I.
double critical_bandwidth(const LinkBudget& b, const RateLawConstants& c);

/// kappa_dof W_u below W*, kappa_pow P_r / N_I from W* on (the boundary is
/// assigned to the power branch; both branches agree there).
double link_rate(const LinkBudget& b, const RateLawConstants& c);
RateBranch link_branch(const LinkBudget& b, const RateLawConstants& c);

/// Distance at which an ISH user's bandwidth share equals its critical
/// bandwidth. W_u = W l m / n and P_u = P_BS m / n make the m/n factors cancel:
/// r* = (kappa_pow P_BS / (kappa_dof l N_I W))^(1/alpha).
double critical_distance(double P_BS, std::size_t l, double W, double N_I, double alpha, const RateLawConstants& c);

/// Same, on the continuous scalings l = l0 n^gamma, W = W0 n^psi.
double critical_distance_ish(const ScalingExponents& e, double n, const RateLawConstants& c, double N_I);

/// min(2 pi r*^2 / (A/m), 1) with the continuous cell area A0 n^nu / (m0 n^beta):
/// predicted fraction of users that are not overspread.
double overspread_fraction_ish(const ScalingExponents& e, double n, double r_star);

/// n-exponent of the unclamped fraction: -2 (gamma + psi) / alpha + (beta - nu).
double overspread_fraction_exponent(const ScalingExponents& e);

}  // namespace cellscale
