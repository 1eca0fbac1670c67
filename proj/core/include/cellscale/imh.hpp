#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "cellscale/geometry.hpp"
#include "cellscale/link_rate.hpp"

namespace cellscale {

/// One transmission along a route. The first hop always leaves the base
/// station; later hops are node-to-node.
struct Hop {
  bool from_bs = false;
  std::size_t tx = 0;  // base-station index when from_bs, node index otherwise
  std::size_t rx = 0;  // node index
  std::size_t tx_subcell = 0;
  double distance = 0.0;
};

struct Route {
  std::size_t destination = 0;
  std::size_t bs = 0;
  bool feasible = true;  // false when the staircase crosses an empty sub-cell
  std::vector<Hop> hops;
};

/// Time-division colouring of the routing grid with the grid's period p:
/// colour (col mod p, row mod p), so at least one full sub-cell separates a
/// receiver from any co-active transmitter when p = 3. Base stations use their
/// sub-cell's colour and the relay of a station-hosted sub-cell moves to a
/// mirrored copy of that colour: K = 2 p^2. A collapsed grid has K = 1.
struct ImhSchedule {
  std::size_t reuse_factor = 18;
  std::vector<std::uint8_t> color_of_subcell;  // slot of each sub-cell's relay
  std::vector<std::uint8_t> color_of_bs;
};

ImhSchedule make_schedule(const RoutingGrid& grid);

/// Staircase routes from each node's base station through the elected relay
/// of every visited sub-cell. Candidates start at the station's own sub-cell
/// or at one of its four neighbours (the first hop then lands there), walk
/// horizontal-then-vertical or the mirror, and a destination in a neighbouring
/// sub-cell may be served in one hop. The candidate with the shortest first
/// hop wins, ties going to fewer hops. A route is infeasible only when every
/// candidate crosses an empty sub-cell. When the destination is itself the
/// last relay that hop is dropped.
std::vector<Route> imh_build_routes(const NetworkInstance& inst, const RoutingGrid& grid);

/// Everything transmitting in each slot: base stations in their sub-cell's slot
/// and every relay that forwards on at least one feasible route.
struct ImhActivity {
  struct Entry {
    Transmitter tx;
    bool is_bs = false;
    std::size_t id = 0;
  };
  std::vector<std::vector<Entry>> by_color;
};

ImhActivity imh_activity(const NetworkInstance& inst, const std::vector<Route>& routes,
                         const ImhSchedule& schedule);

struct HopReport {
  double N_I = 0.0;
  double W_star = 0.0;
  RateBranch branch = RateBranch::Dof;
  double rate = 0.0;  // includes the 1/K duty cycle
};

/// First hop: W_u = W, P_tx = P_BS / l, PSD divided by l. Later hops: W_u = W,
/// P_tx = P, PSD divided by 1. Interferers are the other members of the
/// transmitter's slot.
HopReport imh_hop_report(const NetworkInstance& inst, const ImhActivity& activity, const ImhSchedule& schedule,
                         const Hop& hop, const RateLawConstants& c = {});
double imh_hop_rate(const NetworkInstance& inst, const ImhActivity& activity, const ImhSchedule& schedule,
                    const Hop& hop, const RateLawConstants& c = {});

struct RouteReport {
  std::size_t destination = 0;
  bool feasible = true;
  std::size_t hop_count = 0;
  std::size_t bottleneck_hop = 0;  // 1-based; 0 for infeasible routes
  double route_rate = 0.0;
  double normalized_rate = 0.0;  // route_rate * l m / n
  bool first_hop_overspread = false;
  std::size_t later_hops = 0;
  std::size_t later_hops_overspread = 0;
};

/// Per-route overspread pattern.
enum class OverspreadPattern { None, FirstHopOnly, AllHops, Mixed };
OverspreadPattern pattern_of(const RouteReport& r);
std::string_view to_string(OverspreadPattern p);

struct ImhResult {
  double feasible_rate = 0.0;  // min normalized rate over feasible routes
  std::size_t bottleneck_destination = 0;
  double infeasible_fraction = 0.0;
  bool valid = true;  // infeasible_fraction within the threshold
  std::size_t reuse_factor = 1;
  std::size_t modal_bottleneck_hop = 0;
  double overspread_fraction = 0.0;  // over all hops of feasible routes
  double first_hop_overspread_fraction = 0.0;
  double later_hop_overspread_fraction = 0.0;  // 0 when there are no later hops
  OverspreadPattern modal_pattern = OverspreadPattern::None;
  std::vector<RouteReport> routes;
};

inline constexpr double kDefaultInfeasibleThreshold = 0.01;

ImhResult imh_evaluate(const NetworkInstance& inst, const std::vector<Route>& routes,
                       const ImhSchedule& schedule, const RateLawConstants& c = {},
                       double infeasible_threshold = kDefaultInfeasibleThreshold);

/// Convenience: grid, schedule, routes and evaluation in one call.
ImhResult imh_run(const NetworkInstance& inst, double c_occupancy = 1.5, const RateLawConstants& c = {},
                  double infeasible_threshold = kDefaultInfeasibleThreshold);

double imh_feasible_rate(const NetworkInstance& inst, const std::vector<Route>& routes,
                         const ImhSchedule& schedule, const RateLawConstants& c = {});

/// CSV with columns destination,hop_count,bottleneck_hop,route_rate,normalized_rate.
void write_imh_routes_csv(std::ostream& os, const std::vector<RouteReport>& routes);

}  // namespace cellscale
