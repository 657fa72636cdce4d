#include "emsnet/population.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <utility>

#include "emsnet/errors.hpp"

namespace emsnet {

double effective_density(const CensusTract& tract) {
  const double area = tract.livable_area();
  if (!(area > 0.0)) {
    throw ValidationError("tract '" + tract.tract_id + "' has non-positive livable area");
  }
  if (tract.population < 0.0) {
    throw ValidationError("tract '" + tract.tract_id + "' has negative population");
  }
  return tract.population / area;
}

double VoronoiPartition::cell_area_sum() const {
  double total = 0.0;
  for (const VoronoiCell& cell : cells) {
    total += cell.area;
  }
  return total;
}

Polygon default_boundary(const RoadNetwork& network, double buffer_m) {
  std::vector<Point> pts;
  pts.reserve(network.node_count());
  for (NodeIndex v = 0; v < network.node_count(); ++v) {
    pts.push_back(network.position(v));
  }
  Ring hull = convex_hull(pts);
  Polygon boundary;
  if (hull.size() >= 3) {
    boundary.shell = offset_convex(hull, buffer_m);
  } else {
    // Collinear or tiny networks: expanded bounding box.
    const Bounds b = bounds_of_points(pts).expanded(buffer_m);
    boundary.shell = {{b.min_x, b.min_y}, {b.max_x, b.min_y}, {b.max_x, b.max_y},
                      {b.min_x, b.max_y}};
  }
  return boundary;
}

namespace {

// Keep the half of `ring` closer to `site` than to `other`.
Ring clip_bisector(const Ring& ring, const Point& site, const Point& other) {
  const Point mid{0.5 * (site.x + other.x), 0.5 * (site.y + other.y)};
  // Line through mid, perpendicular to site->other, oriented so the site
  // side is kept (left of a->b).
  const Point dir{-(other.y - site.y), other.x - site.x};
  const Point a = mid;
  const Point b{mid.x + dir.x, mid.y + dir.y};
  return clip_half_plane(ring, a, b);
}

double max_squared_radius(const Ring& ring, const Point& site) {
  double r2 = 0.0;
  for (const Point& p : ring) {
    r2 = std::max(r2, squared_distance(p, site));
  }
  return r2;
}

}  // namespace

VoronoiPartition voronoi_partition(const RoadNetwork& network, const Polygon& boundary,
                                   unsigned threads) {
  validate_polygon(boundary, "study boundary");
  Polygon normalized = boundary;
  normalized.normalize();

  VoronoiPartition partition;
  partition.boundary = normalized;
  partition.cells.resize(network.node_count());

  // Group exactly coincident sites; the diagram sees each location once.
  // The study region is closed: nodes sitting on the boundary belong to it.
  const Bounds bounds = normalized.bounds();
  const double edge_tolerance = 1e-9 * std::max({bounds.width(), bounds.height(), 1.0});
  std::map<std::pair<double, double>, std::vector<NodeIndex>> by_location;
  for (NodeIndex v = 0; v < network.node_count(); ++v) {
    const Point p = network.position(v);
    if (!normalized.contains(p) && !on_polygon_boundary(p, normalized, edge_tolerance)) {
      continue;
    }
    by_location[{p.x, p.y}].push_back(v);
  }
  if (by_location.empty()) {
    throw ValidationError("no network node lies inside the study boundary");
  }

  std::vector<Point> sites;
  sites.reserve(by_location.size());
  for (auto& [loc, members] : by_location) {
    std::sort(members.begin(), members.end());
    sites.push_back({loc.first, loc.second});
    partition.colocated_groups.push_back(members);
  }

  const Bounds bb = normalized.bounds();
  const double span = std::max(bb.width(), bb.height());
  const Bounds box = bb.expanded(std::max(span, 1.0));
  const Ring start{{box.min_x, box.min_y}, {box.max_x, box.min_y}, {box.max_x, box.max_y},
                   {box.min_x, box.max_y}};

  const std::size_t site_count = sites.size();
  auto build_cell = [&](std::size_t s) {
    const Point site = sites[s];

    // Other sites by increasing distance; once a site is farther than twice
    // the cell's current radius its bisector cannot cut the cell, and all
    // later sites are farther still.
    std::vector<std::size_t> others;
    others.reserve(site_count - 1);
    for (std::size_t u = 0; u < site_count; ++u) {
      if (u != s) {
        others.push_back(u);
      }
    }
    std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
      const double da = squared_distance(sites[a], site);
      const double db = squared_distance(sites[b], site);
      return da < db || (da == db && a < b);
    });

    Ring core = start;
    double r2 = max_squared_radius(core, site);
    for (const std::size_t u : others) {
      if (squared_distance(sites[u], site) > 4.0 * r2) {
        break;
      }
      core = clip_bisector(core, site, sites[u]);
      if (core.size() < 3) {
        break;
      }
      r2 = max_squared_radius(core, site);
    }

    VoronoiCell cell;
    cell.convex_core = core;
    Ring shell_piece = clip_to_convex(normalized.shell, core);
    double area = signed_area(shell_piece);
    if (!shell_piece.empty()) {
      cell.rings.push_back(std::move(shell_piece));
    }
    for (const Ring& hole : normalized.holes) {
      Ring hole_piece = clip_to_convex(hole, core);
      if (!hole_piece.empty()) {
        area += signed_area(hole_piece);  // holes are clockwise: negative
        cell.rings.push_back(std::move(hole_piece));
      }
    }
    cell.area = std::max(area, 0.0);
    std::vector<Point> ring_points;
    for (const Ring& r : cell.rings) {
      ring_points.insert(ring_points.end(), r.begin(), r.end());
    }
    cell.bounds = ring_points.empty() ? Bounds{} : bounds_of_points(ring_points);

    partition.cells[partition.colocated_groups[s][0]] = std::move(cell);
  };

  if (threads <= 1 || site_count < 2 * threads) {
    for (std::size_t s = 0; s < site_count; ++s) {
      build_cell(s);
    }
    return partition;
  }
  std::vector<std::future<void>> tasks;
  const std::size_t chunk = (site_count + threads - 1) / threads;
  for (std::size_t begin = 0; begin < site_count; begin += chunk) {
    const std::size_t end = std::min(begin + chunk, site_count);
    tasks.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t s = begin; s < end; ++s) {
        build_cell(s);
      }
    }));
  }
  for (std::future<void>& t : tasks) {
    t.get();
  }
  return partition;
}

PopulationWeights assign_population(const VoronoiPartition& partition,
                                    const std::vector<CensusTract>& tracts,
                                    unsigned threads) {
  for (const CensusTract& tract : tracts) {
    validate_polygon(tract.polygon, "tract '" + tract.tract_id + "'");
  }

  // Per-tract contribution, independent of every other tract.
  struct TractShare {
    std::vector<std::pair<NodeIndex, double>> weights;
    double unassigned = 0.0;
  };
  std::vector<TractShare> shares(tracts.size());

  auto clip_tract = [&](std::size_t t) {
    const CensusTract& tract = tracts[t];
    const double rho = effective_density(tract);
    const double tract_area = tract.polygon.area();
    const Bounds tb = tract.polygon.bounds();

    TractShare share;
    double covered = 0.0;
    for (const std::vector<NodeIndex>& group : partition.colocated_groups) {
      const VoronoiCell& cell = partition.cells[group[0]];
      if (cell.rings.empty() || cell.area <= 0.0 || !cell.bounds.intersects(tb)) {
        continue;
      }
      const double overlap =
          std::max(masked_overlap_area(tract.polygon, cell.convex_core, partition.boundary), 0.0);
      if (overlap <= 0.0) {
        continue;
      }
      covered += overlap;
      const double split = overlap * rho / static_cast<double>(group.size());
      for (const NodeIndex v : group) {
        share.weights.emplace_back(v, split);
      }
    }
    share.unassigned = std::max(tract_area - covered, 0.0) * rho;
    shares[t] = std::move(share);
  };

  if (threads <= 1 || tracts.size() < 2 * static_cast<std::size_t>(threads)) {
    for (std::size_t t = 0; t < tracts.size(); ++t) {
      clip_tract(t);
    }
  } else {
    std::vector<std::future<void>> tasks;
    const std::size_t chunk = (tracts.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < tracts.size(); begin += chunk) {
      const std::size_t end = std::min(begin + chunk, tracts.size());
      tasks.push_back(std::async(std::launch::async, [&, begin, end] {
        for (std::size_t t = begin; t < end; ++t) {
          clip_tract(t);
        }
      }));
    }
    for (std::future<void>& t : tasks) {
      t.get();
    }
  }

  // Deterministic reduction in tract order: the result is bitwise identical
  // for any worker count.
  PopulationWeights out;
  out.weights.assign(partition.cells.size(), 0.0);
  for (const TractShare& share : shares) {
    for (const auto& [v, persons] : share.weights) {
      out.weights[v] += persons;
    }
    out.unassigned += share.unassigned;
  }
  out.total_assigned = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  return out;
}

}  // namespace emsnet
