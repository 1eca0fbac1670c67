#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cellscale/exponents.hpp"

namespace cellscale {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

enum class Metric {
  Torus,   // wrap-around rectangle, minimum-image distances
  Finite,  // plain Euclidean distances inside the rectangle
};

std::string_view to_string(Metric metric);
Metric metric_from_string(std::string_view name);

/// The rectangle [0, width) x [0, height) holding every node and base station.
struct Domain {
  double width = 1.0;
  double height = 1.0;
  Metric metric = Metric::Torus;

  /// Vector from `from` to `to`; under Torus the shortest image is used.
  Point displacement(Point from, Point to) const;
  double distance_squared(Point a, Point b) const;
  double distance(Point a, Point b) const;
  /// Maps a point back into the rectangle (Torus only; Finite returns it unchanged).
  Point wrap(Point p) const;
};

/// Row/column count of a regular hexagonal lattice on the torus. rows == 1
/// only for the single-cell layout.
struct LatticeShape {
  std::size_t rows = 1;
  std::size_t cols = 1;

  std::size_t count() const { return rows * cols; }
};

/// Nearest base-station count to `m_target` that tiles a torus with regular
/// hexagons: an even number of rows (offset rows must wrap) and a rectangle
/// aspect ratio within [1/4, 4]. Ties on count prefer the squarer rectangle.
LatticeShape choose_lattice(double m_target);

/// One realized network. Immutable after construction.
struct NetworkInstance {
  ScalingExponents exponents;
  std::size_t n = 0;   // nodes
  std::size_t m = 0;   // base stations
  std::size_t l = 1;   // antennas per base station
  double area = 0.0;       // m^2
  double bandwidth = 0.0;  // Hz
  Domain domain;
  LatticeShape lattice;
  double bs_spacing = 0.0;  // horizontal distance between neighbouring base stations
  double r_cell = 0.0;      // circumradius of one cell
  std::uint64_t seed = 0;

  std::vector<Point> bs_positions;
  std::vector<Point> node_positions;
  std::vector<std::size_t> cell_of_node;

  bool wraparound() const { return domain.metric == Metric::Torus; }
  double distance_to_bs(std::size_t node, std::size_t bs) const {
    return domain.distance(node_positions[node], bs_positions[bs]);
  }
  double serving_distance(std::size_t node) const { return distance_to_bs(node, cell_of_node[node]); }
};

/// m = nearest torus-hexagonal count to m0 n^beta (SizingError if that rounds to 0),
/// l = max(1, round(l0 n^gamma)), A = A0 n^nu, W = W0 n^psi. Nodes are i.i.d.
/// uniform over the domain and attach to their nearest base station.
/// Deterministic in (e, n, seed, metric).
NetworkInstance generate_network(const ScalingExponents& e, std::size_t n, std::uint64_t seed,
                                 Metric metric = Metric::Torus);

/// Builds an instance from explicit positions (synthetic layouts in tests and
/// tools). n, m are the vector sizes; l, W and A follow from `e` and n.
NetworkInstance assemble_network(const ScalingExponents& e, Domain domain, std::vector<Point> bs_positions,
                                 std::vector<Point> node_positions);

/// Rounded m and l for a given n, without building anything.
struct NetworkSize {
  std::size_t m = 1;
  std::size_t l = 1;
  LatticeShape lattice;
};
NetworkSize network_size(const ScalingExponents& e, std::size_t n);

inline constexpr std::ptrdiff_t kEmptySubcell = -1;

/// Rectangular routing sub-cells tiling the whole domain, independent of the
/// base-station lattice. Both grid dimensions are multiples of `period` so a
/// period x period colouring wraps cleanly on the torus.
struct RoutingGrid {
  double c_occupancy = 1.5;
  std::size_t period = 3;
  double target_area = 0.0;   // c (A/m) 2 log(n/m) / (n/m)
  double subcell_area = 0.0;  // pitch_x * pitch_y, never below target_area
  double pitch_x = 0.0;
  double pitch_y = 0.0;
  Point origin;  // lower-left corner of sub-cell (0, 0)
  std::size_t cols = 0;
  std::size_t rows = 0;
  /// One sub-cell per cell: every route is a single BS -> node hop.
  bool collapsed = false;
  bool wraparound = true;

  std::vector<std::ptrdiff_t> relay_of_subcell;  // node index or kEmptySubcell
  std::vector<std::size_t> occupancy;            // nodes per sub-cell
  std::vector<std::size_t> subcell_of_node;
  std::vector<std::size_t> bs_subcell;

  std::size_t size() const { return relay_of_subcell.size(); }
  std::size_t index(std::size_t col, std::size_t row) const { return row * cols + col; }
  std::size_t col_of(std::size_t idx) const { return idx % cols; }
  std::size_t row_of(std::size_t idx) const { return idx / cols; }
  /// Half the sub-cell diagonal.
  double r_subcell() const;
  double empty_fraction() const;
  bool is_bs_subcell(std::size_t idx) const;
};

/// Pitch is the smallest that keeps each sub-cell at least
/// c (A/m) 2 log(n/m) / (n/m). Collapses to one sub-cell per cell when that
/// area reaches the cell area or fewer than `period` sub-cells fit per axis.
/// Throws ValidationError when n/m < 2, c_occupancy <= 1 or period == 0.
RoutingGrid build_routing_grid(const NetworkInstance& inst, double c_occupancy = 1.5, std::size_t period = 3);

/// JSON document with the instance (and optionally the grid); see docs/instance-schema.md.
std::string to_json(const NetworkInstance& inst, const RoutingGrid* grid = nullptr);

}  // namespace cellscale
