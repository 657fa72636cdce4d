#include "emsnet/density.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "emsnet/errors.hpp"

namespace emsnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

long quantize(double v, double grid) { return std::lround(v / grid); }

}  // namespace

PointGridIndex::PointGridIndex(const std::vector<Point>& points, double cell_size)
    : cell_size_(cell_size) {
  if (cell_size_ <= 0.0) {
    throw ValidationError("point index cell size must be > 0");
  }
  for (const Point& p : points) {
    buckets_[cell_of(p)].push_back(p);
  }
}

PointGridIndex::Cell PointGridIndex::cell_of(const Point& p) const {
  return {static_cast<long>(std::floor(p.x / cell_size_)),
          static_cast<long>(std::floor(p.y / cell_size_))};
}

std::size_t PointGridIndex::count_within(const Point& center, double radius) const {
  if (radius > cell_size_) {
    throw ValidationError("radius query exceeds index cell size");
  }
  const double r2 = radius * radius;
  const Cell c = cell_of(center);
  std::size_t count = 0;
  for (long dx = -1; dx <= 1; ++dx) {
    for (long dy = -1; dy <= 1; ++dy) {
      const auto it = buckets_.find({c.first + dx, c.second + dy});
      if (it == buckets_.end()) {
        continue;
      }
      for (const Point& p : it->second) {
        if (squared_distance(p, center) <= r2) {
          ++count;
        }
      }
    }
  }
  return count;
}

IntersectionSet derive_intersections(const RoadNetwork& network,
                                     const std::vector<RoadClass>& classes,
                                     double rounding_grid_m) {
  if (rounding_grid_m <= 0.0) {
    throw ValidationError("rounding grid must be > 0");
  }

  // Count filtered segment endpoints per quantized point.
  std::map<std::pair<long, long>, std::size_t> incidences;
  for (const RoadNetwork::Edge& e : network.edges()) {
    if (std::find(classes.begin(), classes.end(), e.road_class) == classes.end()) {
      continue;
    }
    for (const NodeIndex v : {e.from, e.to}) {
      const Point p = network.position(v);
      ++incidences[{quantize(p.x, rounding_grid_m), quantize(p.y, rounding_grid_m)}];
    }
  }

  IntersectionSet out;
  out.rounding_grid_m = rounding_grid_m;
  for (const auto& [cell, count] : incidences) {
    if (count >= 2) {
      out.points.push_back({static_cast<double>(cell.first) * rounding_grid_m,
                            static_cast<double>(cell.second) * rounding_grid_m});
    }
  }
  return out;
}

DensityField density_field(const RoadNetwork& network, const IntersectionSet& intersections,
                           double radius_m, double unit_scale_m2, unsigned threads) {
  if (radius_m <= 0.0) {
    throw ValidationError("density radius must be > 0");
  }
  if (unit_scale_m2 <= 0.0) {
    throw ValidationError("density unit scale must be > 0");
  }

  DensityField field;
  field.radius_m = radius_m;
  field.unit_scale_m2 = unit_scale_m2;
  field.values.resize(network.node_count(), 0.0);

  const double disk_area = kPi * radius_m * radius_m;
  const double scale = unit_scale_m2 / disk_area;
  const PointGridIndex index(intersections.points, radius_m);

  auto compute_range = [&](NodeIndex begin, NodeIndex end) {
    for (NodeIndex v = begin; v < end; ++v) {
      const std::size_t count = index.count_within(network.position(v), radius_m);
      field.values[v] = static_cast<double>(count) * scale;
    }
  };

  const NodeIndex n = static_cast<NodeIndex>(network.node_count());
  if (threads <= 1 || n < 2 * threads) {
    compute_range(0, n);
    return field;
  }
  std::vector<std::future<void>> tasks;
  const NodeIndex chunk = (n + threads - 1) / threads;
  for (NodeIndex begin = 0; begin < n; begin += chunk) {
    const NodeIndex end = std::min<NodeIndex>(begin + chunk, n);
    tasks.push_back(std::async(std::launch::async, compute_range, begin, end));
  }
  for (std::future<void>& t : tasks) {
    t.get();
  }
  return field;
}

}  // namespace emsnet
