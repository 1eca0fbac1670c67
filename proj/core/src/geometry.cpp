#include "cellscale/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "cellscale/errors.hpp"

namespace cellscale {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

double wrap_coord(double v, double period) {
  double r = std::fmod(v, period);
  if (r < 0.0) r += period;
  // fmod can return `period` itself for tiny negative inputs.
  return r >= period ? 0.0 : r;
}

double min_image(double d, double period) { return d - period * std::nearbyint(d / period); }

// 53-bit uniform in [0, 1); spelled out so realizations do not depend on the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::mt19937_64 make_rng(std::uint64_t seed, std::size_t n) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(std::uint64_t{n} >> 32)};
  return std::mt19937_64(seq);
}

std::size_t nearest_bs_brute(const Domain& domain, std::span<const Point> bs, Point p) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < bs.size(); ++b) {
    const double d2 = domain.distance_squared(p, bs[b]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = b;
    }
  }
  return best;
}

// Nearest base station on the generated hexagonal lattice: only the three
// closest rows and three closest columns per row can hold the minimum.
std::size_t nearest_bs_lattice(const NetworkInstance& inst, Point p) {
  const auto rows = static_cast<long>(inst.lattice.rows);
  const auto cols = static_cast<long>(inst.lattice.cols);
  const double s = inst.bs_spacing;
  const double row_h = s * kSqrt3 / 2.0;
  const long j0 = static_cast<long>(std::floor(p.y / row_h));
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (long dj = -1; dj <= 1; ++dj) {
    long j = j0 + dj;
    if (inst.wraparound()) {
      j = ((j % rows) + rows) % rows;
    } else if (j < 0 || j >= rows) {
      continue;
    }
    const double shift = 0.5 + 0.5 * static_cast<double>(j % 2);
    const long k0 = static_cast<long>(std::floor(p.x / s - shift + 0.5));
    for (long dk = -1; dk <= 1; ++dk) {
      const long k = ((k0 + dk) % cols + cols) % cols;
      const auto b = static_cast<std::size_t>(j * cols + k);
      const double d2 = inst.domain.distance_squared(p, inst.bs_positions[b]);
      if (d2 < best_d2 || (d2 == best_d2 && b < best)) {
        best_d2 = d2;
        best = b;
      }
    }
  }
  // Finite domains with wrapped odd rows can put the true nearest station far
  // from the lattice guess at the borders; fall back to the exhaustive scan there.
  if (!inst.wraparound()) {
    const std::size_t brute = nearest_bs_brute(inst.domain, inst.bs_positions, p);
    if (inst.domain.distance_squared(p, inst.bs_positions[brute]) < best_d2) return brute;
  }
  return best;
}

}  // namespace

std::string_view to_string(Metric metric) { return metric == Metric::Torus ? "torus" : "finite"; }

Metric metric_from_string(std::string_view name) {
  if (name == "torus") return Metric::Torus;
  if (name == "finite") return Metric::Finite;
  throw ValidationError("unknown metric '" + std::string(name) + "' (expected torus or finite)");
}

Point Domain::displacement(Point from, Point to) const {
  Point d{to.x - from.x, to.y - from.y};
  if (metric == Metric::Torus) {
    d.x = min_image(d.x, width);
    d.y = min_image(d.y, height);
  }
  return d;
}

double Domain::distance_squared(Point a, Point b) const {
  const Point d = displacement(a, b);
  return d.x * d.x + d.y * d.y;
}

double Domain::distance(Point a, Point b) const { return std::sqrt(distance_squared(a, b)); }

Point Domain::wrap(Point p) const {
  if (metric != Metric::Torus) return p;
  return {wrap_coord(p.x, width), wrap_coord(p.y, height)};
}

LatticeShape choose_lattice(double m_target) {
  if (!(m_target >= 0.5)) throw SizingError("base-station count m0 n^beta rounds to zero (need m >= 1)");
  if (m_target < 1.5) return {1, 1};
  LatticeShape best{2, 1};
  double best_count_err = std::numeric_limits<double>::infinity();
  double best_aspect_err = std::numeric_limits<double>::infinity();
  const auto r_max = static_cast<std::size_t>(2.0 * std::ceil(std::sqrt(4.0 * m_target)) + 2.0);
  for (std::size_t rows = 2; rows <= r_max; rows += 2) {
    const double c_guess = m_target / static_cast<double>(rows);
    const auto c_lo = static_cast<long>(std::floor(c_guess)) - 1;
    for (long c = std::max(1L, c_lo); c <= c_lo + 3; ++c) {
      const auto cols = static_cast<std::size_t>(c);
      const double aspect = static_cast<double>(cols) / (static_cast<double>(rows) * kSqrt3 / 2.0);
      if (aspect < 0.25 || aspect > 4.0) continue;
      const double count_err = std::abs(std::log(static_cast<double>(rows * cols) / m_target));
      const double aspect_err = std::abs(std::log(aspect));
      const bool better_count = count_err < best_count_err - 1e-12;
      const bool same_count = std::abs(count_err - best_count_err) <= 1e-12;
      if (better_count || (same_count && aspect_err < best_aspect_err)) {
        best = {rows, cols};
        best_count_err = count_err;
        best_aspect_err = aspect_err;
      }
    }
  }
  return best;
}

NetworkSize network_size(const ScalingExponents& e, std::size_t n) {
  validate(e);
  if (n == 0) throw SizingError("node count n must be positive");
  const double nd = static_cast<double>(n);
  NetworkSize size;
  size.lattice = choose_lattice(e.m0 * std::pow(nd, e.beta));
  size.m = size.lattice.count();
  size.l = static_cast<std::size_t>(std::max(1.0, std::round(e.l0 * std::pow(nd, e.gamma))));
  return size;
}

NetworkInstance generate_network(const ScalingExponents& e, std::size_t n, std::uint64_t seed, Metric metric) {
  const NetworkSize size = network_size(e, n);
  if (n < size.m * size.l) {
    throw SizingError("n = " + std::to_string(n) + " is below m*l = " + std::to_string(size.m) + "*" +
                      std::to_string(size.l) + " (need more nodes than base-station antennas)");
  }
  const double nd = static_cast<double>(n);

  NetworkInstance inst;
  inst.exponents = e;
  inst.n = n;
  inst.m = size.m;
  inst.l = size.l;
  inst.lattice = size.lattice;
  inst.area = e.A0 * std::pow(nd, e.nu);
  inst.bandwidth = e.W0 * std::pow(nd, e.psi);
  inst.seed = seed;
  inst.domain.metric = metric;

  if (inst.m == 1) {
    const double side = std::sqrt(inst.area);
    inst.domain.width = side;
    inst.domain.height = side;
    inst.bs_spacing = side;
    inst.r_cell = side / std::numbers::sqrt2;
    inst.bs_positions = {{side / 2.0, side / 2.0}};
  } else {
    const double s = std::sqrt(2.0 * inst.area / (kSqrt3 * static_cast<double>(inst.m)));
    const double row_h = s * kSqrt3 / 2.0;
    inst.bs_spacing = s;
    inst.r_cell = s / kSqrt3;
    inst.domain.width = static_cast<double>(inst.lattice.cols) * s;
    inst.domain.height = static_cast<double>(inst.lattice.rows) * row_h;
    inst.bs_positions.reserve(inst.m);
    for (std::size_t j = 0; j < inst.lattice.rows; ++j) {
      for (std::size_t k = 0; k < inst.lattice.cols; ++k) {
        const double x = (static_cast<double>(k) + 0.5 + 0.5 * static_cast<double>(j % 2)) * s;
        const double y = (static_cast<double>(j) + 0.5) * row_h;
        inst.bs_positions.push_back({wrap_coord(x, inst.domain.width), y});
      }
    }
  }

  auto rng = make_rng(seed, n);
  inst.node_positions.resize(n);
  for (auto& p : inst.node_positions) {
    p.x = unit_uniform(rng) * inst.domain.width;
    p.y = unit_uniform(rng) * inst.domain.height;
  }

  inst.cell_of_node.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    inst.cell_of_node[u] = inst.m == 1 ? 0 : nearest_bs_lattice(inst, inst.node_positions[u]);
  }
  return inst;
}

NetworkInstance assemble_network(const ScalingExponents& e, Domain domain, std::vector<Point> bs_positions,
                                 std::vector<Point> node_positions) {
  validate(e);
  if (bs_positions.empty()) throw SizingError("at least one base station is required");
  if (node_positions.empty()) throw SizingError("at least one node is required");
  NetworkInstance inst;
  inst.exponents = e;
  inst.n = node_positions.size();
  inst.m = bs_positions.size();
  const double nd = static_cast<double>(inst.n);
  inst.l = static_cast<std::size_t>(std::max(1.0, std::round(e.l0 * std::pow(nd, e.gamma))));
  inst.area = domain.width * domain.height;
  inst.bandwidth = e.W0 * std::pow(nd, e.psi);
  inst.domain = domain;
  inst.lattice = {1, inst.m};
  inst.bs_spacing = std::sqrt(inst.area / static_cast<double>(inst.m));
  inst.r_cell = std::sqrt(2.0 * inst.area / (3.0 * kSqrt3 * static_cast<double>(inst.m)));
  inst.bs_positions = std::move(bs_positions);
  inst.node_positions = std::move(node_positions);
  inst.cell_of_node.resize(inst.n);
  for (std::size_t u = 0; u < inst.n; ++u) {
    inst.cell_of_node[u] = nearest_bs_brute(inst.domain, inst.bs_positions, inst.node_positions[u]);
  }
  return inst;
}

double RoutingGrid::r_subcell() const { return 0.5 * std::hypot(pitch_x, pitch_y); }

double RoutingGrid::empty_fraction() const {
  if (relay_of_subcell.empty()) return 0.0;
  const auto empty = std::count(relay_of_subcell.begin(), relay_of_subcell.end(), kEmptySubcell);
  return static_cast<double>(empty) / static_cast<double>(relay_of_subcell.size());
}

bool RoutingGrid::is_bs_subcell(std::size_t idx) const {
  return std::find(bs_subcell.begin(), bs_subcell.end(), idx) != bs_subcell.end();
}

RoutingGrid build_routing_grid(const NetworkInstance& inst, double c_occupancy, std::size_t period) {
  if (!(c_occupancy > 1.0)) throw ValidationError("c_occupancy must be > 1");
  if (period == 0) throw ValidationError("routing grid period must be >= 1");
  const double per_cell = static_cast<double>(inst.n) / static_cast<double>(inst.m);
  if (per_cell < 2.0) throw ValidationError("routing grid needs n/m >= 2");

  RoutingGrid grid;
  grid.c_occupancy = c_occupancy;
  grid.period = period;
  grid.wraparound = inst.wraparound();
  const double cell_area = inst.area / static_cast<double>(inst.m);
  grid.target_area = c_occupancy * cell_area * 2.0 * std::log(per_cell) / per_cell;

  // Largest multiple of the period whose pitch still covers target_area.
  const double side = std::sqrt(grid.target_area);
  const auto fit = [&](double extent) {
    return period * static_cast<std::size_t>(std::floor(extent / side / static_cast<double>(period)));
  };
  const std::size_t cols = fit(inst.domain.width);
  const std::size_t rows = fit(inst.domain.height);
  grid.collapsed = grid.target_area >= cell_area || cols < period || rows < period;

  if (grid.collapsed) {
    grid.cols = inst.m;
    grid.rows = 1;
    grid.pitch_x = grid.pitch_y = std::sqrt(cell_area);
    grid.subcell_area = cell_area;
    grid.subcell_of_node = inst.cell_of_node;
    grid.bs_subcell.resize(inst.m);
    for (std::size_t b = 0; b < inst.m; ++b) grid.bs_subcell[b] = b;
    grid.occupancy.assign(inst.m, 0);
    grid.relay_of_subcell.assign(inst.m, kEmptySubcell);
    std::vector<double> best(inst.m, std::numeric_limits<double>::infinity());
    for (std::size_t u = 0; u < inst.n; ++u) {
      const std::size_t c = inst.cell_of_node[u];
      ++grid.occupancy[c];
      const double d2 = inst.domain.distance_squared(inst.node_positions[u], inst.bs_positions[c]);
      if (d2 < best[c]) {
        best[c] = d2;
        grid.relay_of_subcell[c] = static_cast<std::ptrdiff_t>(u);
      }
    }
    return grid;
  }

  grid.cols = cols;
  grid.rows = rows;
  grid.pitch_x = inst.domain.width / static_cast<double>(cols);
  grid.pitch_y = inst.domain.height / static_cast<double>(rows);
  grid.subcell_area = grid.pitch_x * grid.pitch_y;
  if (grid.wraparound) {
    // Random phase against the base-station lattice, reproducible per instance.
    auto rng = make_rng(inst.seed ^ 0x9e3779b97f4a7c15ULL, inst.n);
    grid.origin.x = unit_uniform(rng) * grid.pitch_x;
    grid.origin.y = unit_uniform(rng) * grid.pitch_y;
  }

  const auto locate = [&](Point p) {
    auto axis = [&](double v, double o, double pitch, std::size_t count) {
      const auto raw = static_cast<long>(std::floor((v - o) / pitch));
      const auto cnt = static_cast<long>(count);
      if (grid.wraparound) return static_cast<std::size_t>(((raw % cnt) + cnt) % cnt);
      return static_cast<std::size_t>(std::clamp(raw, 0L, cnt - 1));
    };
    return grid.index(axis(p.x, grid.origin.x, grid.pitch_x, grid.cols),
                      axis(p.y, grid.origin.y, grid.pitch_y, grid.rows));
  };
  const auto center = [&](std::size_t idx) {
    return inst.domain.wrap({grid.origin.x + (static_cast<double>(grid.col_of(idx)) + 0.5) * grid.pitch_x,
                             grid.origin.y + (static_cast<double>(grid.row_of(idx)) + 0.5) * grid.pitch_y});
  };

  const std::size_t count = grid.cols * grid.rows;
  grid.relay_of_subcell.assign(count, kEmptySubcell);
  grid.occupancy.assign(count, 0);
  grid.subcell_of_node.resize(inst.n);
  std::vector<double> best(count, std::numeric_limits<double>::infinity());
  for (std::size_t u = 0; u < inst.n; ++u) {
    const std::size_t idx = locate(inst.node_positions[u]);
    grid.subcell_of_node[u] = idx;
    ++grid.occupancy[idx];
    const double d2 = inst.domain.distance_squared(inst.node_positions[u], center(idx));
    if (d2 < best[idx]) {
      best[idx] = d2;
      grid.relay_of_subcell[idx] = static_cast<std::ptrdiff_t>(u);
    }
  }
  grid.bs_subcell.resize(inst.m);
  for (std::size_t b = 0; b < inst.m; ++b) grid.bs_subcell[b] = locate(inst.bs_positions[b]);
  return grid;
}

std::string to_json(const NetworkInstance& inst, const RoutingGrid* grid) {
  using nlohmann::json;
  auto points = [](const std::vector<Point>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back({p.x, p.y});
    return arr;
  };
  const auto& e = inst.exponents;
  json doc;
  doc["exponents"] = {{"psi", e.psi}, {"nu", e.nu}, {"beta", e.beta}, {"gamma", e.gamma}, {"alpha", e.alpha}};
  doc["constants"] = {{"W0", e.W0}, {"A0", e.A0}, {"m0", e.m0}, {"l0", e.l0},
                      {"P", e.P},   {"P_BS", e.P_BS}, {"N0", e.N0}};
  doc["n"] = inst.n;
  doc["m"] = inst.m;
  doc["l"] = inst.l;
  doc["seed"] = inst.seed;
  doc["area"] = inst.area;
  doc["bandwidth"] = inst.bandwidth;
  doc["r_cell"] = inst.r_cell;
  doc["domain"] = {{"width", inst.domain.width}, {"height", inst.domain.height},
                   {"metric", std::string(to_string(inst.domain.metric))}};
  doc["lattice"] = {{"rows", inst.lattice.rows}, {"cols", inst.lattice.cols}, {"spacing", inst.bs_spacing}};
  doc["bs_positions"] = points(inst.bs_positions);
  doc["node_positions"] = points(inst.node_positions);
  doc["cell_of_node"] = inst.cell_of_node;
  if (grid != nullptr) {
    json g;
    g["collapsed"] = grid->collapsed;
    g["cols"] = grid->cols;
    g["rows"] = grid->rows;
    g["pitch"] = {grid->pitch_x, grid->pitch_y};
    g["origin"] = {grid->origin.x, grid->origin.y};
    g["c_occupancy"] = grid->c_occupancy;
    g["period"] = grid->period;
    g["target_area"] = grid->target_area;
    g["subcell_area"] = grid->subcell_area;
    g["relay_of_subcell"] = grid->relay_of_subcell;
    g["occupancy"] = grid->occupancy;
    g["subcell_of_node"] = grid->subcell_of_node;
    g["bs_subcell"] = grid->bs_subcell;
    doc["routing_grid"] = std::move(g);
  }
  return doc.dump(2);
}

}  // namespace cellscale
