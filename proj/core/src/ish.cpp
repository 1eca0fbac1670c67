#include "cellscale/ish.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "cellscale/channel.hpp"
#include "cellscale/errors.hpp"
#include "cellscale/format.hpp"

namespace cellscale {

IshAllocation ish_allocate(const NetworkInstance& inst, ShareMode mode) {
  if (inst.n < inst.m * inst.l) {
    throw SizingError("ISH needs n >= m*l (n = " + std::to_string(inst.n) + ", m*l = " +
                      std::to_string(inst.m * inst.l) + ")");
  }
  IshAllocation alloc;
  alloc.mode = mode;
  alloc.stream_of_node.resize(inst.n);
  std::vector<std::size_t> users_in_cell(inst.m, 0);
  for (std::size_t u = 0; u < inst.n; ++u) {
    const std::size_t b = inst.cell_of_node[u];
    alloc.stream_of_node[u] = users_in_cell[b] % inst.l;
    ++users_in_cell[b];
  }

  const double W = inst.bandwidth;
  const double P_BS = inst.exponents.P_BS;
  const double l = static_cast<double>(inst.l);
  if (mode == ShareMode::ClosedForm) {
    const double per_user = static_cast<double>(inst.m) / static_cast<double>(inst.n);
    alloc.bandwidth_of_node.assign(inst.n, W * l * per_user);
    alloc.power_of_node.assign(inst.n, P_BS * per_user);
    return alloc;
  }

  // A stream's users split the full band; the station's power splits over all its users.
  alloc.bandwidth_of_node.resize(inst.n);
  alloc.power_of_node.resize(inst.n);
  for (std::size_t u = 0; u < inst.n; ++u) {
    const std::size_t b = inst.cell_of_node[u];
    const std::size_t s = alloc.stream_of_node[u];
    const std::size_t count = users_in_cell[b];
    const std::size_t in_stream = count / inst.l + (s < count % inst.l ? 1 : 0);
    alloc.bandwidth_of_node[u] = W / static_cast<double>(in_stream);
    alloc.power_of_node[u] = P_BS / static_cast<double>(count);
  }
  return alloc;
}

IshNodeReport ish_node_report(const NetworkInstance& inst, const IshAllocation& alloc, std::size_t node,
                              const RateLawConstants& c, double N_I) {
  IshNodeReport r;
  r.node = node;
  r.r_u = inst.serving_distance(node);
  r.N_I = N_I;
  const LinkBudget budget{alloc.bandwidth_of_node[node],
                          alloc.power_of_node[node] * pathloss_gain(r.r_u, inst.exponents.alpha), N_I, inst.l};
  r.W_u = budget.W_u;
  r.W_star = critical_bandwidth(budget, c);
  r.branch = link_branch(budget, c);
  r.rate = link_rate(budget, c);
  return r;
}

double ish_node_rate(const NetworkInstance& inst, const IshAllocation& alloc, std::size_t node,
                     const RateLawConstants& c) {
  return ish_node_report(inst, alloc, node, c, interference_psd_ish(inst, node)).rate;
}

std::vector<IshNodeReport> ish_node_reports(const NetworkInstance& inst, const IshAllocation& alloc,
                                            const RateLawConstants& c) {
  std::vector<IshNodeReport> out;
  out.reserve(inst.n);
  for (std::size_t u = 0; u < inst.n; ++u) out.push_back(ish_node_report(inst, alloc, u, c, interference_psd_ish(inst, u)));
  return out;
}

IshResult ish_evaluate(const NetworkInstance& inst, const IshAllocation& alloc, const RateLawConstants& c) {
  validate(c);
  IshResult res;
  res.nodes = ish_node_reports(inst, alloc, c);
  const auto worst = std::min_element(res.nodes.begin(), res.nodes.end(),
                                      [](const auto& a, const auto& b) { return a.rate < b.rate; });
  res.feasible_rate = worst->rate;
  res.bottleneck_node = worst->node;
  const auto power = std::count_if(res.nodes.begin(), res.nodes.end(),
                                   [](const auto& r) { return r.branch == RateBranch::Power; });
  res.overspread_fraction = static_cast<double>(power) / static_cast<double>(inst.n);
  const double mean_ni = std::accumulate(res.nodes.begin(), res.nodes.end(), 0.0,
                                         [](double acc, const auto& r) { return acc + r.N_I; }) /
                         static_cast<double>(inst.n);
  const double r_star = critical_distance(inst.exponents.P_BS, inst.l, inst.bandwidth, mean_ni, inst.exponents.alpha, c);
  res.predicted_non_overspread = overspread_fraction_ish(inst.exponents, static_cast<double>(inst.n), r_star);
  return res;
}

double ish_feasible_rate(const NetworkInstance& inst, const IshAllocation& alloc, const RateLawConstants& c) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < inst.n; ++u) best = std::min(best, ish_node_rate(inst, alloc, u, c));
  return best;
}

void write_ish_nodes_csv(std::ostream& os, const std::vector<IshNodeReport>& nodes) {
  os << "node,r_u,W_u,W_star,branch,rate\n";
  for (const auto& r : nodes) {
    os << r.node << ',' << fmt_real(r.r_u) << ',' << fmt_real(r.W_u) << ',' << fmt_real(r.W_star) << ','
       << to_string(r.branch) << ',' << fmt_real(r.rate) << '\n';
  }
}

}  // namespace cellscale
