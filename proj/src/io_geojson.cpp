#include <utility>

#include "emsnet/errors.hpp"
#include "emsnet/io.hpp"
#include "json.hpp"

namespace emsnet::io {

namespace {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, -1, std::string("invalid JSON: ") + e.what());
  }
}

const Json& feature_array(const Json& root, const std::string& source) {
  if (!root.is_object() || root.value("type", "") != "FeatureCollection" ||
      !root.contains("features") || !root["features"].is_array()) {
    throw ParseError(source, -1, "expected a GeoJSON FeatureCollection");
  }
  return root["features"];
}

Point parse_position(const Json& coords, const std::string& source, long feature) {
  if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() ||
      !coords[1].is_number()) {
    throw ParseError(source, feature, "malformed coordinate pair");
  }
  return {coords[0].get<double>(), coords[1].get<double>()};
}

Ring parse_ring(const Json& arr, const std::string& source, long feature) {
  if (!arr.is_array() || arr.size() < 4) {
    throw ParseError(source, feature, "polygon ring needs at least 4 positions");
  }
  Ring ring;
  ring.reserve(arr.size());
  for (const Json& pos : arr) {
    ring.push_back(parse_position(pos, source, feature));
  }
  if (!(ring.front() == ring.back())) {
    throw ParseError(source, feature, "polygon ring is not closed");
  }
  ring.pop_back();  // store rings open
  return ring;
}

Polygon parse_polygon_geometry(const Json& geom, const std::string& source, long feature) {
  if (!geom.is_object() || geom.value("type", "") != "Polygon" || !geom.contains("coordinates")) {
    throw ParseError(source, feature, "expected a Polygon geometry");
  }
  const Json& rings = geom["coordinates"];
  if (!rings.is_array() || rings.empty()) {
    throw ParseError(source, feature, "polygon has no rings");
  }
  Polygon poly;
  poly.shell = parse_ring(rings[0], source, feature);
  for (std::size_t i = 1; i < rings.size(); ++i) {
    poly.holes.push_back(parse_ring(rings[i], source, feature));
  }
  poly.normalize();
  return poly;
}

Json emit_ring(const Ring& ring) {
  Json arr = Json::array();
  for (const Point& p : ring) {
    arr.push_back(Json::array({p.x, p.y}));
  }
  if (!ring.empty()) {
    arr.push_back(Json::array({ring.front().x, ring.front().y}));
  }
  return arr;
}

Json emit_polygon_geometry(const Polygon& poly) {
  Json rings = Json::array();
  rings.push_back(emit_ring(poly.shell));
  for (const Ring& hole : poly.holes) {
    rings.push_back(emit_ring(hole));
  }
  return Json{{"type", "Polygon"}, {"coordinates", std::move(rings)}};
}

Json point_feature(double x, double y, Json properties) {
  return Json{{"type", "Feature"},
              {"geometry", Json{{"type", "Point"}, {"coordinates", Json::array({x, y})}}},
              {"properties", std::move(properties)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<RawFacility> parse_facilities_geojson(const std::string& text,
                                                  const std::string& source) {
  const Json root = parse_json(text, source);
  const Json& features = feature_array(root, source);

  std::vector<RawFacility> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const long fi = static_cast<long>(i);
    const Json& f = features[i];
    const Json& geom = f.value("geometry", Json());
    if (!geom.is_object() || geom.value("type", "") != "Point") {
      throw ParseError(source, fi, "facility feature must be a Point");
    }
    const Point p = parse_position(geom.value("coordinates", Json()), source, fi);
    const Json& props = f.value("properties", Json::object());
    RawFacility fac;
    fac.id = props.value("facility_id", "facility_" + std::to_string(i));
    const std::string kind = props.value("kind", "");
    const auto parsed_kind = facility_kind_from_name(kind);
    if (!parsed_kind) {
      throw ParseError(source, fi,
                       "facility '" + fac.id + "' has unknown kind '" + kind +
                           "' (expected ems_station or hospital)");
    }
    fac.kind = *parsed_kind;
    fac.x = p.x;
    fac.y = p.y;
    out.push_back(std::move(fac));
  }
  return out;
}

std::string emit_facilities_geojson(const std::vector<RawFacility>& facilities) {
  Json features = Json::array();
  for (const RawFacility& f : facilities) {
    features.push_back(point_feature(
        f.x, f.y,
        Json{{"facility_id", f.id}, {"kind", std::string(facility_kind_name(f.kind))}}));
  }
  return dump(Json{{"type", "FeatureCollection"}, {"features", std::move(features)}});
}

std::vector<CensusTract> parse_tracts_geojson(const std::string& text, const std::string& source) {
  const Json root = parse_json(text, source);
  const Json& features = feature_array(root, source);

  std::vector<CensusTract> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const long fi = static_cast<long>(i);
    const Json& f = features[i];
    const Json& props = f.value("properties", Json::object());

    CensusTract tract;
    tract.tract_id = props.value("tract_id", "tract_" + std::to_string(i));
    if (!props.contains("population") || !props["population"].is_number()) {
      throw ParseError(source, fi, "tract '" + tract.tract_id +
                                       "' is missing a numeric 'population' property");
    }
    tract.population = props["population"].get<double>();
    if (tract.population < 0.0) {
      throw ParseError(source, fi, "tract '" + tract.tract_id + "' has negative population");
    }
    if (props.contains("area_sq_m")) {
      if (!props["area_sq_m"].is_number()) {
        throw ParseError(source, fi, "tract '" + tract.tract_id + "' has non-numeric area_sq_m");
      }
      tract.area_sq_m = props["area_sq_m"].get<double>();
      if (!(*tract.area_sq_m > 0.0)) {
        throw ParseError(source, fi, "tract '" + tract.tract_id + "' has non-positive area_sq_m");
      }
    }
    tract.polygon = parse_polygon_geometry(f.value("geometry", Json()), source, fi);
    out.push_back(std::move(tract));
  }
  return out;
}

std::string emit_tracts_geojson(const std::vector<CensusTract>& tracts) {
  Json features = Json::array();
  for (const CensusTract& t : tracts) {
    Json props{{"tract_id", t.tract_id}, {"population", t.population}};
    if (t.area_sq_m) {
      props["area_sq_m"] = *t.area_sq_m;
    }
    features.push_back(Json{{"type", "Feature"},
                            {"geometry", emit_polygon_geometry(t.polygon)},
                            {"properties", std::move(props)}});
  }
  return dump(Json{{"type", "FeatureCollection"}, {"features", std::move(features)}});
}

Polygon parse_boundary_geojson(const std::string& text, const std::string& source) {
  const Json root = parse_json(text, source);
  if (root.is_object() && root.value("type", "") == "Polygon") {
    return parse_polygon_geometry(root, source, 0);
  }
  if (root.is_object() && root.value("type", "") == "Feature") {
    return parse_polygon_geometry(root.value("geometry", Json()), source, 0);
  }
  if (root.is_object() && root.value("type", "") == "FeatureCollection") {
    const Json& features = feature_array(root, source);
    if (features.size() != 1) {
      throw ParseError(source, -1, "boundary collection must contain exactly one feature");
    }
    return parse_polygon_geometry(features[0].value("geometry", Json()), source, 0);
  }
  throw ParseError(source, -1, "expected a Polygon, Feature, or FeatureCollection");
}

std::string emit_boundary_geojson(const Polygon& boundary) {
  return dump(Json{{"type", "Feature"},
                   {"geometry", emit_polygon_geometry(boundary)},
                   {"properties", Json::object()}});
}

std::string emit_intersections_geojson(const IntersectionSet& intersections) {
  Json features = Json::array();
  for (std::size_t i = 0; i < intersections.points.size(); ++i) {
    const Point& p = intersections.points[i];
    features.push_back(point_feature(p.x, p.y, Json{{"intersection_id", i}}));
  }
  return dump(Json{{"type", "FeatureCollection"},
                   {"rounding_grid_m", intersections.rounding_grid_m},
                   {"features", std::move(features)}});
}

std::string emit_ratio_json(const RatioTable& table) {
  Json rows = Json::array();
  for (const RatioRow& row : table.rows) {
    rows.push_back(Json{{"row", row.is_mean ? Json("mean") : Json(row.percentile)},
                        {"actual_seconds", row.actual},
                        {"simulated_seconds", row.simulated},
                        {"ratio", row.ratio}});
  }
  return dump(Json{{"rows", std::move(rows)}});
}

std::string emit_vulnerability_geojson(const RoadNetwork& network, const TravelTimeField& field,
                                       const PopulationWeights& weights,
                                       const VulnerabilityReport& report) {
  Json features = Json::array();
  Json clusters = Json::array();
  for (const VulnerableCluster& cluster : report.clusters) {
    clusters.push_back(Json{{"cluster_id", cluster.cluster_id},
                            {"node_count", cluster.node_ids.size()},
                            {"population", cluster.population},
                            {"max_time_seconds", is_reachable(cluster.max_time_seconds)
                                                     ? Json(cluster.max_time_seconds)
                                                     : Json("unreachable")},
                            {"mean_time_seconds", is_reachable(cluster.mean_time_seconds)
                                                      ? Json(cluster.mean_time_seconds)
                                                      : Json("unreachable")}});
    for (const NodeIndex v : cluster.node_ids) {
      const RoadNetwork::Node& n = network.node(v);
      features.push_back(point_feature(
          n.x, n.y,
          Json{{"node_id", n.id},
               {"cluster_id", cluster.cluster_id},
               {"population", weights.weights[v]},
               {"seconds",
                is_reachable(field.seconds[v]) ? Json(field.seconds[v]) : Json("unreachable")}}));
    }
  }
  return dump(Json{{"type", "FeatureCollection"},
                   {"summary", Json{{"tau_seconds", report.tau_seconds},
                                    {"total_underserved", report.total_underserved},
                                    {"accessible_population", report.accessible_population},
                                    {"filtered_population", report.filtered_population},
                                    {"clusters", std::move(clusters)}}},
                   {"features", std::move(features)}});
}

}  // namespace emsnet::io
