#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emsnet/geometry.hpp"

namespace emsnet {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

enum class RoadClass { kStreet, kHighway, kOther };

std::string_view road_class_name(RoadClass rc);
std::optional<RoadClass> road_class_from_name(std::string_view name);

// Exactly 1 mph in meters per second.
inline constexpr double kMphToMps = 0.44704;

// Ingestion-side node description. Coordinates are projected meters.
struct NodeRecord {
  std::string id;
  double x = 0.0;
  double y = 0.0;
};

// Ingestion-side road segment description. A missing length is computed as
// the Euclidean distance between the endpoints at build time.
struct EdgeRecord {
  std::string id;
  std::string from;
  std::string to;
  std::optional<double> length_m;
  double speed_mps = 0.0;
  RoadClass road_class = RoadClass::kStreet;
  bool oneway = false;
};

// Immutable road multigraph. Node and edge ids are opaque strings mapped to
// dense indices at build time; all computations run on the indices.
class RoadNetwork {
 public:
  struct Node {
    std::string id;
    double x = 0.0;
    double y = 0.0;
  };

  struct Edge {
    std::string id;
    NodeIndex from = 0;
    NodeIndex to = 0;
    double length_m = 0.0;
    double speed_mps = 0.0;
    RoadClass road_class = RoadClass::kStreet;
    bool oneway = false;
  };

  // One traversable direction of an edge as seen from a node.
  struct Incidence {
    EdgeIndex edge = 0;
    NodeIndex neighbor = 0;
  };

  // Validates records and builds the adjacency. Throws ValidationError on
  // duplicate node ids, duplicate edge ids, references to unknown nodes,
  // self-loops, or non-positive lengths/speeds.
  static RoadNetwork build(const std::vector<NodeRecord>& nodes,
                           const std::vector<EdgeRecord>& edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Node& node(NodeIndex v) const { return nodes_[v]; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<NodeIndex> find_node(std::string_view id) const;

  // Edges traversable *from* v: both directions of a bidirectional edge,
  // only from->to for oneway edges.
  const std::vector<Incidence>& outgoing(NodeIndex v) const { return out_[v]; }
  // Edges traversable *into* v; used when a field is run with reversed
  // orientation.
  const std::vector<Incidence>& incoming(NodeIndex v) const { return in_[v]; }

  // Rank of v when nodes are ordered by id; used for deterministic,
  // platform-independent tie-breaking.
  std::uint32_t id_rank(NodeIndex v) const { return id_rank_[v]; }

  Point position(NodeIndex v) const { return {nodes_[v].x, nodes_[v].y}; }
  Bounds bounds() const;

  // Round-trips the network back into ingestion records (lengths filled in).
  std::vector<NodeRecord> node_records() const;
  std::vector<EdgeRecord> edge_records() const;

 private:
  RoadNetwork() = default;

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> out_;
  std::vector<std::vector<Incidence>> in_;
  std::vector<std::uint32_t> id_rank_;
};

// rows x cols lattice with bidirectional edges between 4-neighbors, all of
// length `spacing`. Node ids are "n<row>_<col>".
RoadNetwork generate_grid(std::size_t rows, std::size_t cols, double spacing, double speed_mps);

// Deterministic connected test network: n nodes scattered in `box`, wired to
// their 3 nearest neighbors, then stitched into one component by repeatedly
// joining the closest pair of nodes across components.
RoadNetwork generate_random_planar(std::size_t n, std::uint64_t seed, const Bounds& box);

}  // namespace emsnet
