#include "emsnet/travel_time.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "emsnet/errors.hpp"

namespace emsnet {

std::string_view facility_kind_name(FacilityKind kind) {
  return kind == FacilityKind::kEmsStation ? "ems_station" : "hospital";
}

std::optional<FacilityKind> facility_kind_from_name(std::string_view name) {
  if (name == "ems_station") return FacilityKind::kEmsStation;
  if (name == "hospital") return FacilityKind::kHospital;
  return std::nullopt;
}

std::string_view facility_category_name(FacilityCategory category) {
  switch (category) {
    case FacilityCategory::kEmsStation:
      return "ems_station";
    case FacilityCategory::kHospital:
      return "hospital";
    case FacilityCategory::kOverall:
      return "overall";
  }
  return "overall";
}

std::optional<FacilityCategory> facility_category_from_name(std::string_view name) {
  if (name == "ems_station") return FacilityCategory::kEmsStation;
  if (name == "hospital") return FacilityCategory::kHospital;
  if (name == "overall") return FacilityCategory::kOverall;
  return std::nullopt;
}

std::vector<double> baseline_times(const RoadNetwork& network) {
  std::vector<double> out(network.edge_count());
  for (EdgeIndex e = 0; e < network.edge_count(); ++e) {
    out[e] = network.edge(e).length_m / network.edge(e).speed_mps;
  }
  return out;
}

EdgeDelays edge_delays(const RoadNetwork& network, const DensityField& density, double alpha) {
  if (alpha < 0.0) {
    throw ValidationError("intersection delay factor alpha must be >= 0");
  }
  if (density.values.size() != network.node_count()) {
    throw ValidationError("density field covers " + std::to_string(density.values.size()) +
                          " nodes but the network has " + std::to_string(network.node_count()));
  }
  EdgeDelays out;
  out.alpha = alpha;
  out.seconds.resize(network.edge_count());
  for (EdgeIndex e = 0; e < network.edge_count(); ++e) {
    const RoadNetwork::Edge& edge = network.edge(e);
    out.seconds[e] = alpha * 0.5 * (density.values[edge.from] + density.values[edge.to]);
  }
  return out;
}

EdgeTimes adjusted_times(std::vector<double> baseline, const EdgeDelays& delays) {
  if (baseline.size() != delays.seconds.size()) {
    throw ValidationError("baseline and delay edge sets differ (" +
                          std::to_string(baseline.size()) + " vs " +
                          std::to_string(delays.seconds.size()) + " edges)");
  }
  EdgeTimes out;
  out.alpha = delays.alpha;
  out.baseline = std::move(baseline);
  out.delay = delays.seconds;
  out.adjusted.resize(out.baseline.size());
  for (std::size_t e = 0; e < out.baseline.size(); ++e) {
    out.adjusted[e] = out.baseline[e] + out.delay[e];
  }
  return out;
}

FacilitySet snap_facilities(const RoadNetwork& network, const std::vector<RawFacility>& raw,
                            double max_snap_m) {
  if (network.node_count() == 0) {
    throw ValidationError("cannot snap facilities onto an empty network");
  }
  FacilitySet out;
  for (const RawFacility& f : raw) {
    NodeIndex best = 0;
    double best_d2 = std::numeric_limits<double>::max();
    for (NodeIndex v = 0; v < network.node_count(); ++v) {
      const double d2 = squared_distance({f.x, f.y}, network.position(v));
      if (d2 < best_d2 ||
          (d2 == best_d2 && network.node(v).id < network.node(best).id)) {
        best_d2 = d2;
        best = v;
      }
    }
    const double dist = std::sqrt(best_d2);
    if (dist > max_snap_m) {
      out.excluded.push_back({f.id, f.kind, dist});
      continue;
    }
    out.facilities.push_back({f.id, f.kind, f.x, f.y, best, dist});
  }
  return out;
}

namespace {

bool in_category(FacilityKind kind, FacilityCategory category) {
  switch (category) {
    case FacilityCategory::kEmsStation:
      return kind == FacilityKind::kEmsStation;
    case FacilityCategory::kHospital:
      return kind == FacilityKind::kHospital;
    case FacilityCategory::kOverall:
      return true;
  }
  return false;
}

}  // namespace

TravelTimeField travel_time_field(const RoadNetwork& network, const EdgeTimes& times,
                                  const FacilitySet& facilities, FacilityCategory category,
                                  FieldDirection direction) {
  if (times.adjusted.size() != network.edge_count()) {
    throw ValidationError("edge times cover " + std::to_string(times.adjusted.size()) +
                          " edges but the network has " + std::to_string(network.edge_count()));
  }
  for (const double t : times.adjusted) {
    if (!std::isfinite(t) || t <= 0.0) {
      throw ValidationError("adjusted edge times must be finite and positive");
    }
  }

  TravelTimeField field;
  field.category = category;
  field.alpha = times.alpha;
  field.seconds.assign(network.node_count(), kUnreachable);

  // (distance, id rank, node); ordered so the smallest distance pops first
  // and equal distances pop in node-id order.
  using Entry = std::tuple<double, std::uint32_t, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

  bool seeded = false;
  for (const Facility& f : facilities.facilities) {
    if (!in_category(f.kind, category)) {
      continue;
    }
    seeded = true;
    if (field.seconds[f.snapped_node] != 0.0) {
      field.seconds[f.snapped_node] = 0.0;
      queue.push({0.0, network.id_rank(f.snapped_node), f.snapped_node});
    }
  }
  if (!seeded) {
    throw ValidationError(std::string("no facilities in category '") +
                          std::string(facility_category_name(category)) + "'");
  }

  while (!queue.empty()) {
    const auto [dist, rank, u] = queue.top();
    queue.pop();
    if (dist > field.seconds[u]) {
      continue;  // stale entry
    }
    auto relax = [&](const std::vector<RoadNetwork::Incidence>& incidences) {
      for (const RoadNetwork::Incidence& inc : incidences) {
        const double candidate = dist + times.adjusted[inc.edge];
        if (candidate < field.seconds[inc.neighbor]) {
          field.seconds[inc.neighbor] = candidate;
          queue.push({candidate, network.id_rank(inc.neighbor), inc.neighbor});
        }
      }
    };
    switch (direction) {
      case FieldDirection::kFromFacilities:
        relax(network.outgoing(u));
        break;
      case FieldDirection::kToFacilities:
        relax(network.incoming(u));
        break;
      case FieldDirection::kAnyDirection:
        relax(network.outgoing(u));
        relax(network.incoming(u));
        break;
    }
  }
  return field;
}

}  // namespace emsnet
