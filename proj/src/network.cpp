#include "emsnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "emsnet/errors.hpp"
#include "emsnet/rng.hpp"

namespace emsnet {

std::string_view road_class_name(RoadClass rc) {
  switch (rc) {
    case RoadClass::kStreet:
      return "street";
    case RoadClass::kHighway:
      return "highway";
    case RoadClass::kOther:
      return "other";
  }
  return "other";
}

std::optional<RoadClass> road_class_from_name(std::string_view name) {
  if (name == "street") return RoadClass::kStreet;
  if (name == "highway") return RoadClass::kHighway;
  if (name == "other") return RoadClass::kOther;
  return std::nullopt;
}

RoadNetwork RoadNetwork::build(const std::vector<NodeRecord>& nodes,
                               const std::vector<EdgeRecord>& edges) {
  if (nodes.empty()) {
    throw ValidationError("network build: node list is empty");
  }
  if (edges.empty()) {
    throw ValidationError("network build: edge list is empty");
  }

  RoadNetwork net;
  net.nodes_.reserve(nodes.size());
  std::unordered_map<std::string, NodeIndex> index_by_id;
  index_by_id.reserve(nodes.size());
  for (const NodeRecord& rec : nodes) {
    if (!std::isfinite(rec.x) || !std::isfinite(rec.y)) {
      throw ValidationError("node '" + rec.id + "' has non-finite coordinates");
    }
    const NodeIndex idx = static_cast<NodeIndex>(net.nodes_.size());
    if (!index_by_id.emplace(rec.id, idx).second) {
      throw ValidationError("duplicate node id '" + rec.id + "'");
    }
    net.nodes_.push_back({rec.id, rec.x, rec.y});
  }

  net.edges_.reserve(edges.size());
  std::unordered_map<std::string, EdgeIndex> edge_ids;
  edge_ids.reserve(edges.size());
  for (const EdgeRecord& rec : edges) {
    if (!edge_ids.emplace(rec.id, static_cast<EdgeIndex>(net.edges_.size())).second) {
      throw ValidationError("duplicate edge id '" + rec.id + "'");
    }
    const auto from_it = index_by_id.find(rec.from);
    if (from_it == index_by_id.end()) {
      throw ValidationError("edge '" + rec.id + "' references unknown node '" + rec.from + "'");
    }
    const auto to_it = index_by_id.find(rec.to);
    if (to_it == index_by_id.end()) {
      throw ValidationError("edge '" + rec.id + "' references unknown node '" + rec.to + "'");
    }
    if (from_it->second == to_it->second) {
      throw ValidationError("edge '" + rec.id + "' is a self-loop on node '" + rec.from + "'");
    }
    double length = rec.length_m.value_or(
        distance(net.position(from_it->second), net.position(to_it->second)));
    if (!std::isfinite(length) || length <= 0.0) {
      throw ValidationError("edge '" + rec.id + "' has non-positive length");
    }
    if (!std::isfinite(rec.speed_mps) || rec.speed_mps <= 0.0) {
      throw ValidationError("edge '" + rec.id + "' has non-positive speed limit");
    }
    net.edges_.push_back({rec.id, from_it->second, to_it->second, length, rec.speed_mps,
                          rec.road_class, rec.oneway});
  }

  net.out_.assign(net.nodes_.size(), {});
  net.in_.assign(net.nodes_.size(), {});
  for (EdgeIndex e = 0; e < net.edges_.size(); ++e) {
    const Edge& edge = net.edges_[e];
    net.out_[edge.from].push_back({e, edge.to});
    net.in_[edge.to].push_back({e, edge.from});
    if (!edge.oneway) {
      net.out_[edge.to].push_back({e, edge.from});
      net.in_[edge.from].push_back({e, edge.to});
    }
  }

  net.id_rank_.resize(net.nodes_.size());
  std::vector<NodeIndex> order(net.nodes_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return net.nodes_[a].id < net.nodes_[b].id;
  });
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    net.id_rank_[order[rank]] = rank;
  }
  return net;
}

std::optional<NodeIndex> RoadNetwork::find_node(std::string_view id) const {
  for (NodeIndex v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].id == id) {
      return v;
    }
  }
  return std::nullopt;
}

Bounds RoadNetwork::bounds() const {
  std::vector<Point> pts;
  pts.reserve(nodes_.size());
  for (const Node& n : nodes_) {
    pts.push_back({n.x, n.y});
  }
  return bounds_of_points(pts);
}

std::vector<NodeRecord> RoadNetwork::node_records() const {
  std::vector<NodeRecord> out;
  out.reserve(nodes_.size());
  for (const Node& n : nodes_) {
    out.push_back({n.id, n.x, n.y});
  }
  return out;
}

std::vector<EdgeRecord> RoadNetwork::edge_records() const {
  std::vector<EdgeRecord> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) {
    out.push_back({e.id, nodes_[e.from].id, nodes_[e.to].id, e.length_m, e.speed_mps,
                   e.road_class, e.oneway});
  }
  return out;
}

RoadNetwork generate_grid(std::size_t rows, std::size_t cols, double spacing, double speed_mps) {
  if (rows < 2 || cols < 2) {
    throw ValidationError("grid generation requires rows >= 2 and cols >= 2");
  }
  if (spacing <= 0.0) {
    throw ValidationError("grid generation requires spacing > 0");
  }

  auto node_id = [](std::size_t r, std::size_t c) {
    return "n" + std::to_string(r) + "_" + std::to_string(c);
  };

  std::vector<NodeRecord> nodes;
  nodes.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      nodes.push_back({node_id(r, c), static_cast<double>(c) * spacing,
                       static_cast<double>(r) * spacing});
    }
  }

  std::vector<EdgeRecord> edges;
  edges.reserve(rows * (cols - 1) + cols * (rows - 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        edges.push_back({"e" + std::to_string(r) + "_" + std::to_string(c) + "_h", node_id(r, c),
                         node_id(r, c + 1), spacing, speed_mps, RoadClass::kStreet, false});
      }
      if (r + 1 < rows) {
        edges.push_back({"e" + std::to_string(r) + "_" + std::to_string(c) + "_v", node_id(r, c),
                         node_id(r + 1, c), spacing, speed_mps, RoadClass::kStreet, false});
      }
    }
  }
  return RoadNetwork::build(nodes, edges);
}

RoadNetwork generate_random_planar(std::size_t n, std::uint64_t seed, const Bounds& box) {
  if (n < 2) {
    throw ValidationError("random network generation requires n >= 2");
  }

  SplitMix64 rng(seed);
  std::vector<Point> pts(n);
  for (Point& p : pts) {
    p = {rng.uniform(box.min_x, box.max_x), rng.uniform(box.min_y, box.max_y)};
  }
  // Coincident points would produce zero-length edges; nudge duplicates.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (pts[i] == pts[j]) {
        pts[i].x += 1e-6 * (box.width() > 0 ? box.width() : 1.0);
      }
    }
  }

  std::vector<NodeRecord> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = {"n" + std::to_string(i), pts[i].x, pts[i].y};
  }

  // Wire each node to its k nearest neighbors (deduplicated pairs).
  const std::size_t k = std::min<std::size_t>(3, n - 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        others.push_back(j);
      }
    }
    std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
      const double da = squared_distance(pts[i], pts[a]);
      const double db = squared_distance(pts[i], pts[b]);
      return da < db || (da == db && a < b);
    });
    for (std::size_t m = 0; m < k; ++m) {
      pairs.emplace_back(std::min(i, others[m]), std::max(i, others[m]));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  // Union-find to stitch remaining components together.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [a, b] : pairs) {
    parent[find(a)] = find(b);
  }
  while (true) {
    double best = std::numeric_limits<double>::max();
    std::pair<std::size_t, std::size_t> join{0, 0};
    bool split = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (find(i) == find(j)) {
          continue;
        }
        split = true;
        const double d = squared_distance(pts[i], pts[j]);
        if (d < best) {
          best = d;
          join = {i, j};
        }
      }
    }
    if (!split) {
      break;
    }
    pairs.push_back(join);
    parent[find(join.first)] = find(join.second);
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<EdgeRecord> edges;
  edges.reserve(pairs.size());
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const double speed = rng.uniform(5.0, 25.0);
    edges.push_back({"e" + std::to_string(e), nodes[pairs[e].first].id, nodes[pairs[e].second].id,
                     std::nullopt, speed, RoadClass::kStreet, false});
  }
  return RoadNetwork::build(nodes, edges);
}

}  // namespace emsnet
