#include "emsnet/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <future>
#include <sstream>

#include "emsnet/accessibility.hpp"
#include "emsnet/errors.hpp"
#include "emsnet/io.hpp"
#include "json.hpp"

namespace emsnet {

namespace {

using Json = nlohmann::ordered_json;

std::string utc_now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

Json config_json(const RunConfig& c) {
  Json classes = Json::array();
  for (const RoadClass rc : c.intersection_classes) {
    classes.push_back(std::string(road_class_name(rc)));
  }
  const char* direction = c.direction == FieldDirection::kFromFacilities ? "from_facilities"
                          : c.direction == FieldDirection::kToFacilities ? "to_facilities"
                                                                         : "any_direction";
  return Json{{"alpha", c.alpha},
              {"radius_m", c.radius_m},
              {"unit_scale_m2", c.unit_scale_m2},
              {"tau_seconds", c.tau_seconds},
              {"category", std::string(facility_category_name(c.category))},
              {"rounding_grid_m", c.rounding_grid_m},
              {"max_snap_m", c.max_snap_m},
              {"min_cluster_population", c.min_cluster_population},
              {"alpha_scale", c.alpha_scale},
              {"seed", c.seed},
              {"curve_max_tau_seconds", c.curve_max_tau_seconds},
              {"curve_step_seconds", c.curve_step_seconds},
              {"intersection_classes", std::move(classes)},
              {"direction", direction},
              {"boundary_buffer_m", c.boundary_buffer_m},
              {"threads", c.threads},
              {"run_scenario", c.run_scenario}};
}

}  // namespace

void RunConfig::validate() const {
  if (alpha < 0.0) {
    throw ConfigError("alpha must be >= 0");
  }
  if (!(radius_m > 0.0)) {
    throw ConfigError("radius must be > 0");
  }
  if (!(unit_scale_m2 > 0.0)) {
    throw ConfigError("unit scale must be > 0");
  }
  if (tau_seconds < 0.0) {
    throw ConfigError("tau must be >= 0");
  }
  if (!(rounding_grid_m > 0.0)) {
    throw ConfigError("rounding grid must be > 0");
  }
  if (max_snap_m < 0.0) {
    throw ConfigError("max snap distance must be >= 0");
  }
  if (min_cluster_population < 0.0) {
    throw ConfigError("min cluster population must be >= 0");
  }
  if (!(alpha_scale > 0.0) || alpha_scale > 1.0) {
    throw ConfigError("alpha scale must be in (0, 1]");
  }
  if (!(curve_step_seconds > 0.0) || !(curve_max_tau_seconds > 0.0)) {
    throw ConfigError("curve sampling parameters must be > 0");
  }
  if (intersection_classes.empty()) {
    throw ConfigError("at least one intersection road class is required");
  }
  if (threads < 1) {
    throw ConfigError("threads must be >= 1");
  }
}

PipelineOutcome run_pipeline(const RunConfig& config, const PipelineInputs& inputs,
                             const std::string& out_dir) {
  PipelineOutcome outcome;
  io::Warnings warnings;

  auto fail = [&](int code, const std::string& message) {
    outcome.exit_code = code;
    outcome.error = message;
    return outcome;
  };

  try {
    config.validate();
  } catch (const ConfigError& e) {
    return fail(kExitConfig, e.what());
  }

  try {
    std::filesystem::create_directories(out_dir);

    Json input_meta = Json::object();
    auto read_input = [&](const std::string& path, const char* role) {
      std::string bytes = io::read_file(path);
      input_meta[role] = Json{{"path", path}, {"fnv1a64", io::fnv1a64_hex(bytes)}};
      return bytes;
    };

    // --- ingest ---
    const auto nodes = io::parse_nodes_csv(read_input(inputs.nodes_path, "nodes"),
                                           inputs.nodes_path);
    const auto edge_records = io::parse_edges_csv(read_input(inputs.edges_path, "edges"),
                                                  inputs.edges_path);
    const auto raw_facilities = io::parse_facilities_geojson(
        read_input(inputs.facilities_path, "facilities"), inputs.facilities_path);
    const auto tracts = io::parse_tracts_geojson(read_input(inputs.tracts_path, "tracts"),
                                                 inputs.tracts_path);

    const RoadNetwork network = RoadNetwork::build(nodes, edge_records);

    Polygon boundary;
    Json boundary_meta;
    if (!inputs.boundary_path.empty()) {
      boundary = io::parse_boundary_geojson(read_input(inputs.boundary_path, "boundary"),
                                            inputs.boundary_path);
      boundary_meta = Json{{"source", inputs.boundary_path}};
    } else {
      boundary = default_boundary(network, config.boundary_buffer_m);
      boundary_meta = Json{{"source", "default_buffered_hull"},
                           {"buffer_m", config.boundary_buffer_m}};
    }

    // --- derive ---
    const IntersectionSet intersections =
        derive_intersections(network, config.intersection_classes, config.rounding_grid_m);
    const DensityField density = density_field(network, intersections, config.radius_m,
                                               config.unit_scale_m2, config.threads);

    const FacilitySet facilities = snap_facilities(network, raw_facilities, config.max_snap_m);
    for (const ExcludedFacility& ex : facilities.excluded) {
      warnings.add("facility '" + ex.id + "' excluded: nearest node is " +
                   io::format_double(ex.nearest_distance_m) + " m away (limit " +
                   io::format_double(config.max_snap_m) + " m)");
    }
    Json facility_meta = Json::array();
    for (const Facility& f : facilities.facilities) {
      facility_meta.push_back(Json{{"facility_id", f.id},
                                   {"kind", std::string(facility_kind_name(f.kind))},
                                   {"snapped_node", network.node(f.snapped_node).id},
                                   {"snap_distance_m", f.snap_distance_m}});
    }

    const EdgeTimes times =
        adjusted_times(baseline_times(network), edge_delays(network, density, config.alpha));
    const TravelTimeField field =
        travel_time_field(network, times, facilities, config.category, config.direction);

    const VoronoiPartition partition = voronoi_partition(network, boundary, config.threads);
    const PopulationWeights weights = assign_population(partition, tracts, config.threads);
    if (weights.unassigned > 1e-6 * (weights.total_assigned + weights.unassigned)) {
      warnings.add("tract population of " + io::format_double(weights.unassigned) +
                   " persons fell outside every cell and was left unassigned");
    }

    const std::vector<double> taus =
        default_tau_samples(config.curve_max_tau_seconds, config.curve_step_seconds);
    const CoverageCurve curve = coverage_curve(field, weights, taus);
    const VulnerabilityReport vulnerability = vulnerability_report(
        network, field, weights, config.tau_seconds, config.min_cluster_population);

    // --- emit ---
    const std::filesystem::path dir(out_dir);
    auto write_artifact = [&](const char* name, const std::string& content) {
      const std::string path = (dir / name).string();
      io::write_file(path, content);
      outcome.artifacts.push_back(path);
    };

    write_artifact("intersections.geojson", io::emit_intersections_geojson(intersections));
    write_artifact("density.csv", io::emit_density_csv(network, density));
    write_artifact("travel_time.csv", io::emit_field_csv(network, field));
    write_artifact("weights.csv", io::emit_weights_csv(network, weights));
    write_artifact("coverage.csv", io::emit_curve_csv(curve));
    write_artifact("vulnerability.geojson",
                   io::emit_vulnerability_geojson(network, field, weights, vulnerability));

    if (config.run_scenario) {
      const ScenarioResult scenario = scenario_alpha_scale(
          network, density, facilities, config.category, weights, taus, config.alpha,
          config.alpha_scale, config.direction, config.threads > 1);
      write_artifact("scenario.csv", io::emit_scenario_csv(scenario));
    }

    if (!inputs.trips_path.empty()) {
      const auto trips = io::parse_trips_csv(read_input(inputs.trips_path, "trips"),
                                             inputs.trips_path, &warnings);
      const PercentileSummary actual = percentile_summary(trip_durations(trips));
      std::vector<double> simulated_times;
      simulated_times.reserve(field.seconds.size());
      for (const double s : field.seconds) {
        if (is_reachable(s)) {
          simulated_times.push_back(s);
        }
      }
      const PercentileSummary simulated = percentile_summary(std::move(simulated_times));
      const RatioTable ratios = ratio_table(actual, simulated);
      write_artifact("ratio.csv", io::emit_ratio_csv(ratios));
      write_artifact("ratio.json", io::emit_ratio_json(ratios));
    }

    // Coverage at the configured benchmark, for the stdout recap.
    double covered_at_tau = 0.0;
    for (NodeIndex v = 0; v < network.node_count(); ++v) {
      if (is_accessible(field.seconds[v], config.tau_seconds)) {
        covered_at_tau += weights.weights[v];
      }
    }
    std::ostringstream recap;
    recap << "network: " << network.node_count() << " nodes, " << network.edge_count()
          << " edges, " << intersections.points.size() << " intersections\n"
          << "facilities: " << facilities.facilities.size() << " snapped, "
          << facilities.excluded.size() << " excluded\n"
          << "category " << facility_category_name(config.category) << ", alpha "
          << io::format_double(config.alpha) << ", tau " << io::format_double(config.tau_seconds)
          << " s\n"
          << "population: " << io::format_double(weights.total_assigned) << " assigned, "
          << io::format_double(weights.unassigned) << " unassigned\n"
          << "coverage at tau: "
          << io::format_double(covered_at_tau / weights.total_assigned) << "\n"
          << "vulnerable: " << vulnerability.clusters.size() << " cluster(s), "
          << io::format_double(vulnerability.total_underserved) << " persons underserved\n";
    outcome.summary = recap.str();

    outcome.warnings = warnings.messages;
    Json warning_json = Json::array();
    for (const std::string& w : warnings.messages) {
      warning_json.push_back(w);
    }
    Json artifact_json = Json::array();
    for (const std::string& a : outcome.artifacts) {
      artifact_json.push_back(std::filesystem::path(a).filename().string());
    }
    artifact_json.push_back("manifest.json");

    const Json manifest{{"tool", "emsnet"},
                        {"generated_at", utc_now_iso8601()},
                        {"crs", config.crs},
                        {"config", config_json(config)},
                        {"inputs", std::move(input_meta)},
                        {"boundary", std::move(boundary_meta)},
                        {"facilities", std::move(facility_meta)},
                        {"warnings", std::move(warning_json)},
                        {"artifacts", std::move(artifact_json)}};
    const std::string manifest_path = (dir / "manifest.json").string();
    io::write_file(manifest_path, manifest.dump(2) + "\n");
    outcome.artifacts.push_back(manifest_path);
  } catch (const ParseError& e) {
    return fail(kExitParse, e.what());
  } catch (const IoError& e) {
    return fail(kExitIo, e.what());
  } catch (const ConfigError& e) {
    return fail(kExitConfig, e.what());
  } catch (const ValidationError& e) {
    return fail(kExitValidation, e.what());
  } catch (const std::exception& e) {
    return fail(kExitInternal, e.what());
  }
  return outcome;
}

}  // namespace emsnet
