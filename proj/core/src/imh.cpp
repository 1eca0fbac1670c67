#include "cellscale/imh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cellscale/channel.hpp"
#include "cellscale/format.hpp"

namespace cellscale {

namespace {

long wrapped_delta(long delta, std::size_t count, bool wrap) {
  if (!wrap) return delta;
  const auto c = static_cast<long>(count);
  delta %= c;
  if (delta > c / 2) delta -= c;
  if (delta < -c / 2) delta += c;
  return delta;
}

std::size_t step(std::size_t from, long dir, std::size_t count) {
  const auto c = static_cast<long>(count);
  return static_cast<std::size_t>(((static_cast<long>(from) + dir) % c + c) % c);
}

Point tx_position(const NetworkInstance& inst, const Hop& hop) {
  return hop.from_bs ? inst.bs_positions[hop.tx] : inst.node_positions[hop.tx];
}

}  // namespace

ImhSchedule make_schedule(const RoutingGrid& grid) {
  ImhSchedule s;
  s.color_of_subcell.assign(grid.size(), 0);
  s.color_of_bs.assign(grid.bs_subcell.size(), 0);
  if (grid.collapsed) {
    s.reuse_factor = 1;
    return s;
  }
  const std::size_t k = grid.period;
  const std::size_t grid_colors = k * k;
  const auto color = [&](std::size_t i) {
    return static_cast<std::uint8_t>((grid.col_of(i) % k) + k * (grid.row_of(i) % k));
  };
  for (std::size_t i = 0; i < grid.size(); ++i) s.color_of_subcell[i] = color(i);
  // A station keeps its sub-cell's colour; that sub-cell's relay moves to the
  // mirrored slot of the same colour, so touching station sub-cells still differ.
  for (std::size_t b = 0; b < grid.bs_subcell.size(); ++b) {
    const std::size_t c0 = grid.bs_subcell[b];
    s.color_of_bs[b] = color(c0);
    s.color_of_subcell[c0] = static_cast<std::uint8_t>(grid_colors + color(c0));
  }
  s.reuse_factor = 2 * grid_colors;
  return s;
}

std::vector<Route> imh_build_routes(const NetworkInstance& inst, const RoutingGrid& grid) {
  std::vector<Route> routes(inst.n);
  std::vector<std::size_t> path;
  std::vector<std::size_t> relays;
  // Sub-cells next to each station's own, as routing entry points.
  std::vector<std::vector<std::size_t>> entries(inst.m);
  std::vector<std::vector<std::size_t>> adjacent(inst.m);
  if (!grid.collapsed) {
    for (std::size_t b = 0; b < inst.m; ++b) {
      const std::size_t c0 = grid.bs_subcell[b];
      for (const auto& [dc, dr] : {std::pair{1L, 0L}, {-1L, 0L}, {0L, 1L}, {0L, -1L}}) {
        const long col = static_cast<long>(grid.col_of(c0)) + dc;
        const long row = static_cast<long>(grid.row_of(c0)) + dr;
        if (!grid.wraparound && (col < 0 || row < 0 || col >= static_cast<long>(grid.cols) ||
                                 row >= static_cast<long>(grid.rows))) {
          continue;
        }
        const std::size_t sc = grid.index(step(grid.col_of(c0), dc, grid.cols), step(grid.row_of(c0), dr, grid.rows));
        adjacent[b].push_back(sc);
        if (grid.relay_of_subcell[sc] != kEmptySubcell) entries[b].push_back(sc);
      }
    }
  }

  for (std::size_t u = 0; u < inst.n; ++u) {
    Route& r = routes[u];
    r.destination = u;
    r.bs = inst.cell_of_node[u];
    const std::size_t start = grid.bs_subcell[r.bs];
    const std::size_t goal = grid.subcell_of_node[u];

    const auto try_path = [&](std::ptrdiff_t via, bool horizontal_first) {
      path.clear();
      relays.clear();
      if (grid.collapsed || (via == kEmptySubcell && goal == start)) return true;
      std::size_t from = start;
      if (via != kEmptySubcell) {
        from = static_cast<std::size_t>(via);
        path.push_back(from);
      }
      const long dq = wrapped_delta(static_cast<long>(grid.col_of(goal)) - static_cast<long>(grid.col_of(from)),
                                    grid.cols, grid.wraparound);
      const long dp = wrapped_delta(static_cast<long>(grid.row_of(goal)) - static_cast<long>(grid.row_of(from)),
                                    grid.rows, grid.wraparound);
      std::size_t col = grid.col_of(from);
      std::size_t row = grid.row_of(from);
      const auto walk_cols = [&] {
        for (long k = 0; k < std::abs(dq); ++k) {
          col = step(col, dq > 0 ? 1 : -1, grid.cols);
          path.push_back(grid.index(col, row));
        }
      };
      const auto walk_rows = [&] {
        for (long k = 0; k < std::abs(dp); ++k) {
          row = step(row, dp > 0 ? 1 : -1, grid.rows);
          path.push_back(grid.index(col, row));
        }
      };
      if (horizontal_first) {
        walk_cols();
        walk_rows();
      } else {
        walk_rows();
        walk_cols();
      }
      for (const std::size_t sc : path) {
        const auto relay = grid.relay_of_subcell[sc];
        if (relay == kEmptySubcell) return false;
        relays.push_back(static_cast<std::size_t>(relay));
      }
      return true;
    };
    // Candidates: staircases from the station's sub-cell and from each
    // neighbouring entry, both orders, plus the direct hop for a destination
    // next door. The shortest first hop wins, then the fewest hops.
    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best_len = 0;
    std::vector<std::size_t> best_path;
    std::vector<std::size_t> best_relays;
    const auto keep = [&] {
      if (!relays.empty() && relays.back() == u) relays.pop_back();
      const std::size_t rx = relays.empty() ? u : relays.front();
      const double d2 = inst.domain.distance_squared(inst.bs_positions[r.bs], inst.node_positions[rx]);
      if (d2 < best_d2 || (d2 == best_d2 && relays.size() < best_len)) {
        best_d2 = d2;
        best_len = relays.size();
        best_path = path;
        best_relays = relays;
      }
    };
    const auto consider = [&](std::ptrdiff_t via, bool horizontal_first) {
      if (try_path(via, horizontal_first)) keep();
    };
    consider(kEmptySubcell, true);
    consider(kEmptySubcell, false);
    for (const std::size_t sc : entries[r.bs]) {
      consider(static_cast<std::ptrdiff_t>(sc), true);
      consider(static_cast<std::ptrdiff_t>(sc), false);
    }
    if (std::find(adjacent[r.bs].begin(), adjacent[r.bs].end(), goal) != adjacent[r.bs].end()) {
      path.clear();
      relays.clear();
      keep();
    }
    r.feasible = std::isfinite(best_d2);
    path = std::move(best_path);
    relays = std::move(best_relays);
    if (!r.feasible) continue;

    Hop hop{true, r.bs, 0, start, 0.0};
    for (std::size_t i = 0; i <= relays.size(); ++i) {
      hop.rx = i < relays.size() ? relays[i] : u;
      hop.distance = inst.domain.distance(tx_position(inst, hop), inst.node_positions[hop.rx]);
      r.hops.push_back(hop);
      hop = Hop{false, hop.rx, 0, i < path.size() ? path[i] : goal, 0.0};
    }
  }
  return routes;
}

ImhActivity imh_activity(const NetworkInstance& inst, const std::vector<Route>& routes,
                         const ImhSchedule& schedule) {
  ImhActivity act;
  act.by_color.resize(schedule.reuse_factor);
  for (std::size_t b = 0; b < inst.m; ++b) {
    act.by_color[schedule.color_of_bs[b]].push_back(
        {{inst.bs_positions[b], inst.exponents.P_BS}, true, b});
  }
  std::vector<bool> seen(inst.n, false);
  for (const auto& r : routes) {
    if (!r.feasible) continue;
    for (const auto& h : r.hops) {
      if (h.from_bs || seen[h.tx]) continue;
      seen[h.tx] = true;
      act.by_color[schedule.color_of_subcell[h.tx_subcell]].push_back(
          {{inst.node_positions[h.tx], inst.exponents.P}, false, h.tx});
    }
  }
  // Route order is deterministic already; sorting keeps the summation order
  // independent of it as well.
  for (auto& group : act.by_color) {
    std::sort(group.begin(), group.end(),
              [](const auto& a, const auto& b) { return std::pair(!a.is_bs, a.id) < std::pair(!b.is_bs, b.id); });
  }
  return act;
}

HopReport imh_hop_report(const NetworkInstance& inst, const ImhActivity& activity, const ImhSchedule& schedule,
                         const Hop& hop, const RateLawConstants& c) {
  const auto& e = inst.exponents;
  const Point rx = inst.node_positions[hop.rx];
  double sum = 0.0;
  const auto accumulate = [&](const std::vector<ImhActivity::Entry>& group) {
    for (const auto& entry : group) {
      if (entry.is_bs == hop.from_bs && entry.id == hop.tx) continue;
      const double d2 = inst.domain.distance_squared(rx, entry.tx.position);
      if (d2 > 0.0) sum += entry.tx.power * std::pow(d2, -0.5 * e.alpha);
    }
  };
  accumulate(activity.by_color[hop.from_bs ? schedule.color_of_bs[hop.tx] : schedule.color_of_subcell[hop.tx_subcell]]);
  const std::size_t l_t = hop.from_bs ? inst.l : 1;
  const double P_tx = hop.from_bs ? e.P_BS / static_cast<double>(inst.l) : e.P;
  const LinkBudget budget{inst.bandwidth, P_tx * pathloss_gain(hop.distance, e.alpha),
                          sum / (inst.bandwidth * static_cast<double>(l_t)) + e.N0, l_t};
  HopReport rep;
  rep.N_I = budget.N_I;
  rep.W_star = critical_bandwidth(budget, c);
  rep.branch = link_branch(budget, c);
  rep.rate = link_rate(budget, c) / static_cast<double>(schedule.reuse_factor);
  return rep;
}

double imh_hop_rate(const NetworkInstance& inst, const ImhActivity& activity, const ImhSchedule& schedule,
                    const Hop& hop, const RateLawConstants& c) {
  return imh_hop_report(inst, activity, schedule, hop, c).rate;
}

OverspreadPattern pattern_of(const RouteReport& r) {
  const bool later_all = r.later_hops_overspread == r.later_hops;
  const bool later_none = r.later_hops_overspread == 0;
  if (!r.first_hop_overspread && later_none) return OverspreadPattern::None;
  if (r.first_hop_overspread && r.later_hops > 0 && later_none) return OverspreadPattern::FirstHopOnly;
  if (r.first_hop_overspread && later_all) return OverspreadPattern::AllHops;
  return OverspreadPattern::Mixed;
}

std::string_view to_string(OverspreadPattern p) {
  switch (p) {
    case OverspreadPattern::None: return "none";
    case OverspreadPattern::FirstHopOnly: return "first-hop-only";
    case OverspreadPattern::AllHops: return "all-hops";
    case OverspreadPattern::Mixed: return "mixed";
  }
  return "mixed";
}

ImhResult imh_evaluate(const NetworkInstance& inst, const std::vector<Route>& routes,
                       const ImhSchedule& schedule, const RateLawConstants& c, double infeasible_threshold) {
  validate(c);
  const ImhActivity activity = imh_activity(inst, routes, schedule);
  const double normalization = static_cast<double>(inst.l) * static_cast<double>(inst.m) / static_cast<double>(inst.n);

  ImhResult res;
  res.reuse_factor = schedule.reuse_factor;
  res.routes.reserve(routes.size());
  res.feasible_rate = std::numeric_limits<double>::infinity();
  std::size_t infeasible = 0, hops = 0, hops_over = 0, first = 0, first_over = 0, later = 0, later_over = 0;
  std::map<std::size_t, std::size_t> bottleneck_counts;
  std::map<OverspreadPattern, std::size_t> pattern_counts;
  for (const auto& route : routes) {
    RouteReport rep;
    rep.destination = route.destination;
    rep.feasible = route.feasible;
    rep.hop_count = route.hops.size();
    if (!route.feasible) {
      ++infeasible;
      res.routes.push_back(rep);
      continue;
    }
    rep.route_rate = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < route.hops.size(); ++h) {
      const HopReport hr = imh_hop_report(inst, activity, schedule, route.hops[h], c);
      const bool over = hr.branch == RateBranch::Power;
      if (hr.rate < rep.route_rate) {
        rep.route_rate = hr.rate;
        rep.bottleneck_hop = h + 1;
      }
      if (h == 0) {
        rep.first_hop_overspread = over;
      } else {
        ++rep.later_hops;
        if (over) ++rep.later_hops_overspread;
      }
    }
    rep.normalized_rate = rep.route_rate * normalization;
    if (rep.normalized_rate < res.feasible_rate) {
      res.feasible_rate = rep.normalized_rate;
      res.bottleneck_destination = rep.destination;
    }
    ++first;
    if (rep.first_hop_overspread) ++first_over;
    later += rep.later_hops;
    later_over += rep.later_hops_overspread;
    hops += rep.hop_count;
    hops_over += (rep.first_hop_overspread ? 1 : 0) + rep.later_hops_overspread;
    ++bottleneck_counts[rep.bottleneck_hop];
    ++pattern_counts[pattern_of(rep)];
    res.routes.push_back(rep);
  }

  res.infeasible_fraction = static_cast<double>(infeasible) / static_cast<double>(inst.n);
  res.valid = res.infeasible_fraction <= infeasible_threshold && first > 0;
  if (first == 0) res.feasible_rate = 0.0;
  const auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
  res.overspread_fraction = ratio(hops_over, hops);
  res.first_hop_overspread_fraction = ratio(first_over, first);
  res.later_hop_overspread_fraction = ratio(later_over, later);
  const auto mode = [](const auto& counts) {
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    return best->first;
  };
  if (!bottleneck_counts.empty()) res.modal_bottleneck_hop = mode(bottleneck_counts);
  if (!pattern_counts.empty()) res.modal_pattern = mode(pattern_counts);
  return res;
}

ImhResult imh_run(const NetworkInstance& inst, double c_occupancy, const RateLawConstants& c,
                  double infeasible_threshold) {
  const RoutingGrid grid = build_routing_grid(inst, c_occupancy);
  const ImhSchedule schedule = make_schedule(grid);
  const auto routes = imh_build_routes(inst, grid);
  return imh_evaluate(inst, routes, schedule, c, infeasible_threshold);
}

double imh_feasible_rate(const NetworkInstance& inst, const std::vector<Route>& routes,
                         const ImhSchedule& schedule, const RateLawConstants& c) {
  return imh_evaluate(inst, routes, schedule, c, 1.0).feasible_rate;
}

void write_imh_routes_csv(std::ostream& os, const std::vector<RouteReport>& routes) {
  os << "destination,hop_count,bottleneck_hop,route_rate,normalized_rate\n";
  for (const auto& r : routes) {
    os << r.destination << ',' << r.hop_count << ',' << r.bottleneck_hop << ',' << fmt_real(r.route_rate) << ','
       << fmt_real(r.normalized_rate) << '\n';
  }
}

}  // namespace cellscale
