#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "emsnet/geometry.hpp"
#include "emsnet/network.hpp"

namespace emsnet {

// Derived intersection points: quantized, deduplicated edge endpoints where
// at least two filtered segments meet.
struct IntersectionSet {
  std::vector<Point> points;
  double rounding_grid_m = 1.0;
};

// Per-node intersection density I(v): intersections within `radius_m` of the
// node, divided by the disk area and rescaled to `unit_scale_m2` (so a value
// of 2.0 with unit_scale 1e4 means 2 intersections per hectare).
struct DensityField {
  double radius_m = 800.0;
  double unit_scale_m2 = 1e4;
  std::vector<double> values;  // indexed by NodeIndex
};

// Fixed-cell bucket index over points, cell size = query radius. Radius
// queries scan the 3x3 cell neighborhood and distance-test each candidate,
// so results match a brute-force scan exactly.
class PointGridIndex {
 public:
  PointGridIndex(const std::vector<Point>& points, double cell_size);

  // Count of indexed points with distance(p, center) <= radius; requires
  // radius <= the cell size used at construction.
  std::size_t count_within(const Point& center, double radius) const;

 private:
  using Cell = std::pair<long, long>;
  Cell cell_of(const Point& p) const;

  double cell_size_;
  std::map<Cell, std::vector<Point>> buckets_;
};

// Endpoints of edges whose road class is in `classes`, snapped to the
// rounding grid and deduplicated. Points touched by only one filtered
// segment (dead ends) are dropped; only multi-way meets remain.
IntersectionSet derive_intersections(const RoadNetwork& network,
                                     const std::vector<RoadClass>& classes,
                                     double rounding_grid_m);

// I(v) for every node: disk count / (pi * r^2), rescaled to unit_scale_m2.
// An intersection coincident with the node counts toward its own disk.
// Per-node counts are independent; `threads` > 1 splits the node range and
// assembles results in node order, so the output does not depend on it.
DensityField density_field(const RoadNetwork& network, const IntersectionSet& intersections,
                           double radius_m, double unit_scale_m2, unsigned threads = 1);

}  // namespace emsnet
