#pragma once

#include <string>
#include <vector>

#include "emsnet/accessibility.hpp"
#include "emsnet/calibration.hpp"
#include "emsnet/density.hpp"
#include "emsnet/geometry.hpp"
#include "emsnet/network.hpp"
#include "emsnet/population.hpp"
#include "emsnet/travel_time.hpp"

namespace emsnet::io {

// Warnings raised while parsing or assembling a run; the pipeline echoes
// each one into the manifest exactly once.
struct Warnings {
  std::vector<std::string> messages;
  void add(std::string message);
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// 64-bit FNV-1a over file bytes, lowercase hex; used for manifest digests.
std::string fnv1a64_hex(const std::string& bytes);

// All numeric emission goes through this: shortest round-trippable form at
// 12 significant digits.
std::string format_double(double value);

// --- delimited text codecs -------------------------------------------------
// Headers are required; columns may appear in any order. Values must not
// contain the delimiter (no quoting).

// node_id,x,y
std::vector<NodeRecord> parse_nodes_csv(const std::string& text, const std::string& source);
std::string emit_nodes_csv(const std::vector<NodeRecord>& nodes);

// edge_id,from,to,length_m,speed_mps|speed_mph,road_class,oneway
// length_m may be empty (computed at build); the speed column name selects
// the unit, converted to m/s at ingestion.
std::vector<EdgeRecord> parse_edges_csv(const std::string& text, const std::string& source);
std::string emit_edges_csv(const std::vector<EdgeRecord>& edges);

// dispatch_ts,arrival_ts[,severity] with ISO-8601 timestamps; naive
// timestamps are taken as UTC with a warning.
std::vector<TripRecord> parse_trips_csv(const std::string& text, const std::string& source,
                                        Warnings* warnings = nullptr);
std::string emit_trips_csv(const std::vector<TripRecord>& trips);

// node_id,x,y,seconds with the literal "unreachable" sentinel.
struct FieldRow {
  std::string node_id;
  double x = 0.0;
  double y = 0.0;
  double seconds = 0.0;  // kUnreachable round-trips through the sentinel
};
std::string emit_field_csv(const RoadNetwork& network, const TravelTimeField& field);
std::vector<FieldRow> parse_field_csv(const std::string& text, const std::string& source);

// node_id,x,y,density
std::string emit_density_csv(const RoadNetwork& network, const DensityField& density);

// node_id,persons
struct WeightRow {
  std::string node_id;
  double persons = 0.0;
};
std::string emit_weights_csv(const RoadNetwork& network, const PopulationWeights& weights);
std::vector<WeightRow> parse_weights_csv(const std::string& text, const std::string& source);

// tau_seconds,covered_fraction
std::string emit_curve_csv(const CoverageCurve& curve);

// tau_seconds,coverage_before,coverage_after,delta
std::string emit_scenario_csv(const ScenarioResult& scenario);

// percentile,seconds ("mean" label for the mean row)
std::string emit_summary_csv(const PercentileSummary& summary);
PercentileSummary parse_summary_csv(const std::string& text, const std::string& source);

// percentile,actual_seconds,simulated_seconds,ratio
std::string emit_ratio_csv(const RatioTable& table);

// The same table as a structured JSON report.
std::string emit_ratio_json(const RatioTable& table);

// --- GeoJSON codecs ----------------------------------------------------------
// Coordinates are projected meters throughout; no CRS interpretation.

// Point features with properties facility_id and kind.
std::vector<RawFacility> parse_facilities_geojson(const std::string& text,
                                                  const std::string& source);
std::string emit_facilities_geojson(const std::vector<RawFacility>& facilities);

// Polygon features with properties tract_id, population, optional area_sq_m.
// Ring orientation is normalized on parse (shells CCW, holes CW).
std::vector<CensusTract> parse_tracts_geojson(const std::string& text, const std::string& source);
std::string emit_tracts_geojson(const std::vector<CensusTract>& tracts);

// A single polygon feature (or bare Polygon geometry).
Polygon parse_boundary_geojson(const std::string& text, const std::string& source);
std::string emit_boundary_geojson(const Polygon& boundary);

// Derived intersections as a point FeatureCollection.
std::string emit_intersections_geojson(const IntersectionSet& intersections);

// Reported clusters as point features (one per node, carrying its assigned
// population) plus a summary foreign member with per-cluster totals.
std::string emit_vulnerability_geojson(const RoadNetwork& network, const TravelTimeField& field,
                                       const PopulationWeights& weights,
                                       const VulnerabilityReport& report);

}  // namespace emsnet::io
