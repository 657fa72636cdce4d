#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emsnet/network.hpp"
#include "emsnet/travel_time.hpp"

namespace emsnet {

// Run parameters shared by the CLI subcommands and the pipeline. Defaults
// follow the model's standard settings: 800 m density radius, per-hectare
// density scale, 4-minute benchmark, 1 m endpoint rounding, 500 m snap
// limit, 100-person cluster floor, half-alpha scenario.
struct RunConfig {
  double alpha = 15.0;           // seconds * unit-scale area per intersection
  double radius_m = 800.0;
  double unit_scale_m2 = 1e4;    // hectare
  double tau_seconds = 240.0;
  FacilityCategory category = FacilityCategory::kOverall;
  double rounding_grid_m = 1.0;
  double max_snap_m = 500.0;
  double min_cluster_population = 100.0;
  double alpha_scale = 0.5;
  std::uint64_t seed = 0;

  double curve_max_tau_seconds = 900.0;
  double curve_step_seconds = 15.0;
  std::vector<RoadClass> intersection_classes{RoadClass::kStreet, RoadClass::kHighway};
  FieldDirection direction = FieldDirection::kFromFacilities;
  double boundary_buffer_m = 100.0;
  unsigned threads = 1;
  std::string crs;  // recorded in the manifest, never interpreted
  bool run_scenario = false;

  // Throws ConfigError on the first out-of-range field.
  void validate() const;
};

}  // namespace emsnet
