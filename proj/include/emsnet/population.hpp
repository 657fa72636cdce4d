#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emsnet/geometry.hpp"
#include "emsnet/network.hpp"

namespace emsnet {

// Census tract polygon with its population count. `area_sq_m` overrides the
// livable area; by default the polygon's own area stands in for it.
struct CensusTract {
  std::string tract_id;
  Polygon polygon;  // normalized: shell counter-clockwise, holes clockwise
  double population = 0.0;
  std::optional<double> area_sq_m;

  double livable_area() const { return area_sq_m.value_or(polygon.area()); }
};

// rho*(c) = population / livable area, persons per square meter.
double effective_density(const CensusTract& tract);

// Voronoi cell of one node, clipped to the study boundary.
struct VoronoiCell {
  // Convex half-plane-intersection cell before boundary clipping. Empty for
  // nodes outside the boundary and for non-representative co-located nodes.
  Ring convex_core;
  // Boundary rings clipped to the core (shell pieces positive, hole pieces
  // negative); their signed areas sum to the cell area.
  std::vector<Ring> rings;
  double area = 0.0;
  Bounds bounds{};
};

struct VoronoiPartition {
  std::vector<VoronoiCell> cells;  // indexed by NodeIndex
  Polygon boundary;
  // For nodes sharing exact coordinates the diagram is built once per
  // location; members list every node of the group, cell stored on members[0].
  std::vector<std::vector<NodeIndex>> colocated_groups;

  double boundary_area() const { return boundary.area(); }
  double cell_area_sum() const;
};

// Per-node population weights P(v) from Eqs. over the Voronoi overlay.
struct PopulationWeights {
  std::vector<double> weights;  // persons, indexed by NodeIndex
  double total_assigned = 0.0;
  // Tract population mass that fell outside every cell.
  double unassigned = 0.0;
};

// Convex hull of the nodes, miter-offset outward by `buffer_m`. Degenerate
// hulls (collinear nodes) fall back to the expanded bounding box. This is
// the default study boundary when none is supplied.
Polygon default_boundary(const RoadNetwork& network, double buffer_m = 100.0);

// Planar Voronoi diagram of the node sites clipped to `boundary`. Nodes
// outside the boundary get empty cells; if every node is outside, throws.
// Cells are independent computations; `threads` > 1 splits the site range
// and each worker writes its own slots, so the result does not depend on it.
VoronoiPartition voronoi_partition(const RoadNetwork& network, const Polygon& boundary,
                                   unsigned threads = 1);

// P(v) = sum over tracts of |cell(v) ∩ tract| * rho*(tract). Tract area not
// covered by any cell accumulates into `unassigned`. Co-located nodes split
// their shared cell's population equally. Tracts are clipped independently
// (optionally in parallel) and reduced in tract order, so the weights are
// identical for any worker count.
PopulationWeights assign_population(const VoronoiPartition& partition,
                                    const std::vector<CensusTract>& tracts,
                                    unsigned threads = 1);

}  // namespace emsnet
