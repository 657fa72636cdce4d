#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "emsnet/density.hpp"
#include "emsnet/network.hpp"

namespace emsnet {

// Marker for nodes no facility can reach. Kept distinct from every finite
// time so coverage and vulnerability can tell "slow" from "disconnected".
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

inline bool is_reachable(double seconds) { return seconds != kUnreachable; }

enum class FacilityKind { kEmsStation, kHospital };
enum class FacilityCategory { kEmsStation, kHospital, kOverall };

std::string_view facility_kind_name(FacilityKind kind);
std::optional<FacilityKind> facility_kind_from_name(std::string_view name);
std::string_view facility_category_name(FacilityCategory category);
std::optional<FacilityCategory> facility_category_from_name(std::string_view name);

// Per-edge intersection delays in seconds, with the alpha they were
// computed under (seconds * unit-scale area per intersection).
struct EdgeDelays {
  std::vector<double> seconds;  // indexed by EdgeIndex
  double alpha = 0.0;
};

// Baseline, delay, and adjusted per-edge travel times. adjusted[e] is always
// baseline[e] + delay[e].
struct EdgeTimes {
  std::vector<double> baseline;
  std::vector<double> delay;
  std::vector<double> adjusted;
  double alpha = 0.0;
};

struct RawFacility {
  std::string id;
  FacilityKind kind = FacilityKind::kEmsStation;
  double x = 0.0;
  double y = 0.0;
};

struct Facility {
  std::string id;
  FacilityKind kind = FacilityKind::kEmsStation;
  double x = 0.0;
  double y = 0.0;
  NodeIndex snapped_node = 0;
  double snap_distance_m = 0.0;
};

// A facility left out because it was farther than the snap limit.
struct ExcludedFacility {
  std::string id;
  FacilityKind kind = FacilityKind::kEmsStation;
  double nearest_distance_m = 0.0;
};

struct FacilitySet {
  std::vector<Facility> facilities;
  std::vector<ExcludedFacility> excluded;
};

// Minimum adjusted travel time from the nearest facility of `category` to
// each node. kUnreachable marks nodes outside every facility's component.
struct TravelTimeField {
  FacilityCategory category = FacilityCategory::kOverall;
  std::vector<double> seconds;  // indexed by NodeIndex
  double alpha = 0.0;
};

// T(e) = length / speed limit, per edge.
std::vector<double> baseline_times(const RoadNetwork& network);

// D(e) = alpha * (I(from) + I(to)) / 2, with I in the field's unit scale.
// Rejects a density field that does not cover the network's node set.
EdgeDelays edge_delays(const RoadNetwork& network, const DensityField& density, double alpha);

// Componentwise baseline + delay; records the delays' alpha.
EdgeTimes adjusted_times(std::vector<double> baseline, const EdgeDelays& delays);

// Snaps each raw facility to the nearest network node (ties broken by
// smallest node id). Facilities farther than max_snap_m are excluded and
// reported, not errors.
FacilitySet snap_facilities(const RoadNetwork& network, const std::vector<RawFacility>& raw,
                            double max_snap_m = 500.0);

// Travel direction for the field. kFromFacilities follows edge orientation
// outward from the facilities (response direction); kToFacilities reverses
// it; kAnyDirection ignores oneway restrictions (contraflow allowed). The
// modes only differ on networks with oneway edges.
enum class FieldDirection { kFromFacilities, kToFacilities, kAnyDirection };

// Multi-source shortest-path field over adjusted edge times, all category
// facilities seeded at distance 0. Priority-queue ties break on node id so
// output is platform-independent. Throws if the category has no facilities.
TravelTimeField travel_time_field(const RoadNetwork& network, const EdgeTimes& times,
                                  const FacilitySet& facilities, FacilityCategory category,
                                  FieldDirection direction = FieldDirection::kFromFacilities);

}  // namespace emsnet
