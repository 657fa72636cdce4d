#pragma once

// Test-only fixtures and independent oracles. The oracles deliberately avoid
// the library's computation paths: shortest paths are checked against plain
// relaxation sweeps, area weights against rejection sampling, and densities
// against direct distance scans.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "emsnet/accessibility.hpp"
#include "emsnet/density.hpp"
#include "emsnet/network.hpp"
#include "emsnet/population.hpp"
#include "emsnet/rng.hpp"
#include "emsnet/travel_time.hpp"

namespace emsnet::testing {

// --- small fixtures ---------------------------------------------------------

// Path graph n0 - n1 - ... - n{count-1} with uniform edge length and speed.
inline RoadNetwork path_network(std::size_t count, double length_m, double speed_mps) {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < count; ++i) {
    nodes.push_back({"n" + std::to_string(i), static_cast<double>(i) * length_m, 0.0});
  }
  for (std::size_t i = 0; i + 1 < count; ++i) {
    edges.push_back({"e" + std::to_string(i), nodes[i].id, nodes[i + 1].id, length_m, speed_mps,
                     RoadClass::kStreet, false});
  }
  return RoadNetwork::build(nodes, edges);
}

inline FacilitySet facilities_at_nodes(const RoadNetwork& network,
                                       const std::vector<std::pair<std::string, FacilityKind>>& at) {
  FacilitySet set;
  for (const auto& [node_id, kind] : at) {
    const auto v = network.find_node(node_id);
    if (!v) {
      throw std::runtime_error("fixture facility node missing: " + node_id);
    }
    const Point p = network.position(*v);
    set.facilities.push_back({"f_" + node_id, kind, p.x, p.y, *v, 0.0});
  }
  return set;
}

// --- shortest-path oracle -----------------------------------------------------

// Multi-source relaxation to fixpoint (Bellman-Ford style). Sweeps every
// edge in both permitted directions until nothing improves.
inline std::vector<double> bellman_ford_field(const RoadNetwork& network,
                                              const std::vector<double>& edge_seconds,
                                              const std::vector<NodeIndex>& sources,
                                              FieldDirection direction =
                                                  FieldDirection::kFromFacilities) {
  std::vector<double> dist(network.node_count(), kUnreachable);
  for (const NodeIndex s : sources) {
    dist[s] = 0.0;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (EdgeIndex e = 0; e < network.edge_count(); ++e) {
      const RoadNetwork::Edge& edge = network.edge(e);
      const double w = edge_seconds[e];
      const bool forward = direction != FieldDirection::kToFacilities || !edge.oneway;
      const bool backward = !edge.oneway || direction == FieldDirection::kToFacilities ||
                            direction == FieldDirection::kAnyDirection;
      if (forward && dist[edge.from] != kUnreachable && dist[edge.from] + w < dist[edge.to]) {
        dist[edge.to] = dist[edge.from] + w;
        changed = true;
      }
      if (backward && dist[edge.to] != kUnreachable && dist[edge.to] + w < dist[edge.from]) {
        dist[edge.from] = dist[edge.to] + w;
        changed = true;
      }
    }
  }
  return dist;
}

// --- density oracle -----------------------------------------------------------

inline std::size_t brute_force_disk_count(const std::vector<Point>& points, const Point& center,
                                          double radius) {
  std::size_t count = 0;
  for (const Point& p : points) {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    if (dx * dx + dy * dy <= radius * radius) {
      ++count;
    }
  }
  return count;
}

// --- population oracle ----------------------------------------------------------

// Stand-alone even-odd point-in-ring (independent of the library geometry).
inline bool oracle_point_in_ring(double x, double y, const Ring& ring) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    if ((ring[i].y > y) != (ring[j].y > y) &&
        x < (ring[j].x - ring[i].x) * (y - ring[i].y) / (ring[j].y - ring[i].y) + ring[i].x) {
      inside = !inside;
    }
  }
  return inside;
}

inline bool oracle_point_in_polygon(double x, double y, const Polygon& poly) {
  if (!oracle_point_in_ring(x, y, poly.shell)) {
    return false;
  }
  for (const Ring& hole : poly.holes) {
    if (oracle_point_in_ring(x, y, hole)) {
      return false;
    }
  }
  return true;
}

struct McPopulation {
  std::vector<double> weights;
  double total = 0.0;
};

// Rejection-sampling estimate of the Voronoi-census weights: points uniform
// over each tract's bounding box, kept when inside the tract and the
// boundary, attributed to the nearest in-boundary node.
inline McPopulation mc_population_weights(const RoadNetwork& network, const Polygon& boundary,
                                          const std::vector<CensusTract>& tracts,
                                          std::uint64_t seed, std::size_t samples_per_tract) {
  std::vector<NodeIndex> sites;
  for (NodeIndex v = 0; v < network.node_count(); ++v) {
    const Point p = network.position(v);
    if (oracle_point_in_polygon(p.x, p.y, boundary)) {
      sites.push_back(v);
    }
  }

  McPopulation out;
  out.weights.assign(network.node_count(), 0.0);
  SplitMix64 rng(seed);
  for (const CensusTract& tract : tracts) {
    const Bounds bb = tract.polygon.bounds();
    const double box_area = bb.width() * bb.height();
    const double rho = tract.population / tract.livable_area();
    const double mass = rho * box_area / static_cast<double>(samples_per_tract);
    for (std::size_t s = 0; s < samples_per_tract; ++s) {
      const double x = rng.uniform(bb.min_x, bb.max_x);
      const double y = rng.uniform(bb.min_y, bb.max_y);
      if (!oracle_point_in_polygon(x, y, tract.polygon) ||
          !oracle_point_in_polygon(x, y, boundary)) {
        continue;
      }
      NodeIndex best = sites.front();
      double best_d2 = std::numeric_limits<double>::max();
      for (const NodeIndex v : sites) {
        const Point p = network.position(v);
        const double dx = p.x - x;
        const double dy = p.y - y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
          best_d2 = d2;
          best = v;
        }
      }
      out.weights[best] += mass;
      out.total += mass;
    }
  }
  return out;
}

// --- percentile oracle ------------------------------------------------------------

// Direct sort-and-index estimate with the same closest-ranks convention.
// The interpolation uses the canonical a + frac * (b - a) evaluation so that
// "exact match" is well-defined; the sorting and indexing path is
// independent of the library implementation.
inline double sort_and_index_percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p / 100.0;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) {
    return values.back();
  }
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

// --- synthetic city ----------------------------------------------------------------

// Seeded mid-size city used by the acceptance suite: a jittered lattice with
// a protected spanning tree plus randomly kept cross streets, biased
// facility placement, and a tiled tract layer. Everything derives from
// `seed` alone.
struct SyntheticCity {
  RoadNetwork network;
  std::vector<RawFacility> facilities;
  std::vector<CensusTract> tracts;
  Polygon boundary;
};

inline SyntheticCity make_synthetic_city(std::uint64_t seed) {
  constexpr std::size_t kRows = 44;
  constexpr std::size_t kCols = 45;
  constexpr double kSpacing = 170.0;
  constexpr double kJitter = 25.0;
  constexpr double kKeepProbability = 0.6;  // non-tree lattice edges kept

  SplitMix64 rng(seed);
  const double width = static_cast<double>(kCols - 1) * kSpacing;
  const double height = static_cast<double>(kRows - 1) * kSpacing;

  std::vector<NodeRecord> nodes;
  nodes.reserve(kRows * kCols);
  auto node_name = [](std::size_t r, std::size_t c) {
    return "c" + std::to_string(r) + "_" + std::to_string(c);
  };
  for (std::size_t r = 0; r < kRows; ++r) {
    for (std::size_t c = 0; c < kCols; ++c) {
      nodes.push_back({node_name(r, c),
                       static_cast<double>(c) * kSpacing + rng.uniform(-kJitter, kJitter),
                       static_cast<double>(r) * kSpacing + rng.uniform(-kJitter, kJitter)});
    }
  }

  // All candidate lattice edges, as (a, b) index pairs.
  auto index_of = [&](std::size_t r, std::size_t c) { return r * kCols + c; };
  std::vector<std::pair<std::size_t, std::size_t>> lattice;
  for (std::size_t r = 0; r < kRows; ++r) {
    for (std::size_t c = 0; c < kCols; ++c) {
      if (c + 1 < kCols) {
        lattice.emplace_back(index_of(r, c), index_of(r, c + 1));
      }
      if (r + 1 < kRows) {
        lattice.emplace_back(index_of(r, c), index_of(r + 1, c));
      }
    }
  }

  // Spanning tree via union-find over a seeded shuffle; tree edges are kept
  // unconditionally so the city stays connected.
  std::vector<std::size_t> shuffled(lattice.size());
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    shuffled[i] = i;
  }
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
  }
  std::vector<std::size_t> parent(nodes.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    parent[i] = i;
  }
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<bool> in_tree(lattice.size(), false);
  for (const std::size_t e : shuffled) {
    const auto [a, b] = lattice[e];
    if (find(a) != find(b)) {
      parent[find(a)] = find(b);
      in_tree[e] = true;
    }
  }

  std::vector<EdgeRecord> edges;
  const double speeds[] = {20.0 * kMphToMps, 25.0 * kMphToMps, 30.0 * kMphToMps};
  for (std::size_t e = 0; e < lattice.size(); ++e) {
    const double keep_draw = rng.next_double();
    const double speed = speeds[rng.next_below(3)];
    if (!in_tree[e] && keep_draw > kKeepProbability) {
      continue;
    }
    const auto [a, b] = lattice[e];
    edges.push_back({"ce" + std::to_string(e), nodes[a].id, nodes[b].id, std::nullopt, speed,
                     RoadClass::kStreet, false});
  }

  SyntheticCity city{RoadNetwork::build(nodes, edges), {}, {}, {}};

  // Facilities biased toward the west half; the east periphery keeps deficits.
  for (std::size_t f = 0; f < 20; ++f) {
    const bool hospital = f >= 14;
    const double fx = rng.uniform(0.0, hospital ? width : 0.6 * width);
    const double fy = rng.uniform(0.0, height);
    // Snap close to a node so none fall past the snap limit.
    NodeIndex nearest = 0;
    double best = std::numeric_limits<double>::max();
    for (NodeIndex v = 0; v < city.network.node_count(); ++v) {
      const double d2 = squared_distance({fx, fy}, city.network.position(v));
      if (d2 < best) {
        best = d2;
        nearest = v;
      }
    }
    const Point p = city.network.position(nearest);
    city.facilities.push_back({"fac" + std::to_string(f),
                               hospital ? FacilityKind::kHospital : FacilityKind::kEmsStation,
                               p.x + rng.uniform(-40.0, 40.0), p.y + rng.uniform(-40.0, 40.0)});
  }

  // 10 x 5 tract tiling of an interior rectangle, safely inside the hull.
  const double margin = 150.0;
  const double tract_w = (width - 2.0 * margin) / 10.0;
  const double tract_h = (height - 2.0 * margin) / 5.0;
  for (std::size_t ty = 0; ty < 5; ++ty) {
    for (std::size_t tx = 0; tx < 10; ++tx) {
      const double x0 = margin + static_cast<double>(tx) * tract_w;
      const double y0 = margin + static_cast<double>(ty) * tract_h;
      CensusTract tract;
      tract.tract_id = "tract_" + std::to_string(ty * 10 + tx);
      tract.polygon.shell = {{x0, y0}, {x0 + tract_w, y0}, {x0 + tract_w, y0 + tract_h},
                             {x0, y0 + tract_h}};
      tract.population = std::floor(rng.uniform(500.0, 5000.0));
      city.tracts.push_back(std::move(tract));
    }
  }

  city.boundary = default_boundary(city.network, 100.0);
  return city;
}

}  // namespace emsnet::testing
