#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "cellscale/geometry.hpp"
#include "cellscale/link_rate.hpp"

namespace cellscale {

enum class ShareMode {
  ClosedForm,      // W_u = W l m / n and P_u = P_BS m / n for everyone
  PerRealization,  // shares from the actual user counts of each stream and cell
};

/// Orthogonal bandwidth/power split of each base station over its users,
/// with users spread round-robin over the l spatial streams.
struct IshAllocation {
  ShareMode mode = ShareMode::ClosedForm;
  std::vector<std::size_t> stream_of_node;
  std::vector<double> bandwidth_of_node;  // Hz
  std::vector<double> power_of_node;      // W
};

/// Throws SizingError when n < m l.
IshAllocation ish_allocate(const NetworkInstance& inst, ShareMode mode = ShareMode::ClosedForm);

struct IshNodeReport {
  std::size_t node = 0;
  double r_u = 0.0;     // serving distance
  double N_I = 0.0;
  double W_u = 0.0;
  double W_star = 0.0;
  RateBranch branch = RateBranch::Dof;
  double rate = 0.0;
};

IshNodeReport ish_node_report(const NetworkInstance& inst, const IshAllocation& alloc, std::size_t node,
                              const RateLawConstants& c, double N_I);
double ish_node_rate(const NetworkInstance& inst, const IshAllocation& alloc, std::size_t node,
                     const RateLawConstants& c = {});

/// Reports for every node, in node order.
std::vector<IshNodeReport> ish_node_reports(const NetworkInstance& inst, const IshAllocation& alloc,
                                            const RateLawConstants& c = {});

struct IshResult {
  double feasible_rate = 0.0;       // min over nodes
  std::size_t bottleneck_node = 0;
  double overspread_fraction = 0.0;  // share of users with W_u >= W*
  double predicted_non_overspread = 0.0;  // closed-form circle fraction, at the mean N_I
  std::vector<IshNodeReport> nodes;
};

IshResult ish_evaluate(const NetworkInstance& inst, const IshAllocation& alloc, const RateLawConstants& c = {});
double ish_feasible_rate(const NetworkInstance& inst, const IshAllocation& alloc, const RateLawConstants& c = {});

/// CSV with columns node,r_u,W_u,W_star,branch,rate.
void write_ish_nodes_csv(std::ostream& os, const std::vector<IshNodeReport>& nodes);

}  // namespace cellscale
