#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "emsnet/accessibility.hpp"
#include "emsnet/errors.hpp"
#include "emsnet/io.hpp"
#include "emsnet/pipeline.hpp"

namespace {

using namespace emsnet;

// Options shared across the analysis subcommands, bound to a RunConfig with
// CLI-side units (tau in minutes, unit scale by name).
struct CliOptions {
  RunConfig config;
  double tau_minutes = 4.0;
  double curve_max_tau_minutes = 15.0;
  std::string unit_scale = "hectare";
  std::string category = "overall";
  std::string direction = "from";
  std::vector<std::string> classes{"street", "highway"};
};

double parse_unit_scale(const std::string& text) {
  if (text == "hectare" || text == "ha") return 1e4;
  if (text == "m2") return 1.0;
  if (text == "km2") return 1e6;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == nullptr || *end != '\0' || !(v > 0.0)) {
    throw ConfigError("unknown unit scale '" + text + "' (hectare, m2, km2, or square meters)");
  }
  return v;
}

void resolve(CliOptions& opts) {
  opts.config.tau_seconds = opts.tau_minutes * 60.0;
  opts.config.curve_max_tau_seconds = opts.curve_max_tau_minutes * 60.0;
  opts.config.unit_scale_m2 = parse_unit_scale(opts.unit_scale);

  const auto category = facility_category_from_name(opts.category);
  if (!category) {
    throw ConfigError("unknown category '" + opts.category + "'");
  }
  opts.config.category = *category;

  if (opts.direction == "from") {
    opts.config.direction = FieldDirection::kFromFacilities;
  } else if (opts.direction == "to") {
    opts.config.direction = FieldDirection::kToFacilities;
  } else if (opts.direction == "any") {
    opts.config.direction = FieldDirection::kAnyDirection;
  } else {
    throw ConfigError("unknown direction '" + opts.direction + "' (from, to, any)");
  }

  opts.config.intersection_classes.clear();
  for (const std::string& name : opts.classes) {
    const auto rc = road_class_from_name(name);
    if (!rc) {
      throw ConfigError("unknown road class '" + name + "'");
    }
    opts.config.intersection_classes.push_back(*rc);
  }
  opts.config.validate();
}

void add_model_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--alpha", opts.config.alpha,
                  "Intersection delay factor, seconds * unit-scale area");
  cmd->add_option("--radius", opts.config.radius_m, "Density disk radius in meters");
  cmd->add_option("--unit-scale", opts.unit_scale, "Density area unit: hectare, m2, km2, or m^2");
  cmd->add_option("--rounding-grid", opts.config.rounding_grid_m,
                  "Endpoint quantization grid in meters");
  cmd->add_option("--classes", opts.classes, "Road classes counted as intersections");
  cmd->add_option("--threads", opts.config.threads, "Worker threads for independent stages");
}

void add_facility_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--category", opts.category, "Facility category: ems_station, hospital, overall");
  cmd->add_option("--max-snap", opts.config.max_snap_m, "Facility snap distance limit in meters");
  cmd->add_option("--direction", opts.direction,
                  "Traversal: from (facility->node), to (node->facility), any (ignore oneway)");
}

RoadNetwork load_network(const std::string& nodes_path, const std::string& edges_path) {
  return RoadNetwork::build(io::parse_nodes_csv(io::read_file(nodes_path), nodes_path),
                            io::parse_edges_csv(io::read_file(edges_path), edges_path));
}

DensityField compute_density(const RoadNetwork& network, const CliOptions& opts,
                             IntersectionSet* intersections_out = nullptr) {
  IntersectionSet intersections = derive_intersections(
      network, opts.config.intersection_classes, opts.config.rounding_grid_m);
  DensityField density = density_field(network, intersections, opts.config.radius_m,
                                       opts.config.unit_scale_m2, opts.config.threads);
  if (intersections_out != nullptr) {
    *intersections_out = std::move(intersections);
  }
  return density;
}

FacilitySet load_facilities(const RoadNetwork& network, const std::string& path,
                            const CliOptions& opts, std::vector<std::string>* warnings) {
  const FacilitySet set = snap_facilities(
      network, io::parse_facilities_geojson(io::read_file(path), path), opts.config.max_snap_m);
  if (warnings != nullptr) {
    for (const ExcludedFacility& ex : set.excluded) {
      warnings->push_back("facility '" + ex.id + "' excluded: nearest node is " +
                          io::format_double(ex.nearest_distance_m) + " m away");
    }
  }
  return set;
}

TravelTimeField compute_field(const RoadNetwork& network, const FacilitySet& facilities,
                              const CliOptions& opts) {
  const DensityField density = compute_density(network, opts);
  const EdgeTimes times = adjusted_times(baseline_times(network),
                                         edge_delays(network, density, opts.config.alpha));
  return travel_time_field(network, times, facilities, opts.config.category,
                           opts.config.direction);
}

PopulationWeights compute_weights(const RoadNetwork& network, const std::string& tracts_path,
                                  const std::string& boundary_path, const CliOptions& opts) {
  const auto tracts = io::parse_tracts_geojson(io::read_file(tracts_path), tracts_path);
  const Polygon boundary =
      boundary_path.empty()
          ? default_boundary(network, opts.config.boundary_buffer_m)
          : io::parse_boundary_geojson(io::read_file(boundary_path), boundary_path);
  const unsigned threads = opts.config.threads;
  return assign_population(voronoi_partition(network, boundary, threads), tracts, threads);
}

// Joins a field CSV and a weights CSV on node_id for the standalone coverage
// and vulnerability commands.
void join_field_weights(const std::vector<io::FieldRow>& field_rows,
                        const std::vector<io::WeightRow>& weight_rows,
                        std::vector<double>& seconds, std::vector<double>& persons) {
  std::unordered_map<std::string, double> by_id;
  by_id.reserve(weight_rows.size());
  for (const io::WeightRow& w : weight_rows) {
    by_id[w.node_id] = w.persons;
  }
  seconds.clear();
  persons.clear();
  for (const io::FieldRow& row : field_rows) {
    const auto it = by_id.find(row.node_id);
    seconds.push_back(row.seconds);
    persons.push_back(it == by_id.end() ? 0.0 : it->second);
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Intersection-aware network accessibility engine"};
  CliOptions opts;

  // grid
  auto* grid = app.add_subcommand("grid", "Generate a synthetic lattice network");
  std::size_t rows = 5, cols = 5;
  double spacing = 200.0;
  double speed_mps = 25.0 * kMphToMps;
  std::optional<double> speed_mph;
  std::string nodes_out = "nodes.csv", edges_out = "edges.csv";
  grid->add_option("--rows", rows, "Lattice rows (>= 2)");
  grid->add_option("--cols", cols, "Lattice columns (>= 2)");
  grid->add_option("--spacing", spacing, "Edge length in meters");
  grid->add_option("--speed-mps", speed_mps, "Speed limit in m/s");
  grid->add_option("--speed-mph", speed_mph, "Speed limit in mph (overrides --speed-mps)");
  grid->add_option("--nodes-out", nodes_out, "Output node CSV");
  grid->add_option("--edges-out", edges_out, "Output edge CSV");
  grid->callback([&] {
    const RoadNetwork net =
        generate_grid(rows, cols, spacing, speed_mph ? *speed_mph * kMphToMps : speed_mps);
    io::write_file(nodes_out, io::emit_nodes_csv(net.node_records()));
    io::write_file(edges_out, io::emit_edges_csv(net.edge_records()));
    std::cout << "wrote " << net.node_count() << " nodes, " << net.edge_count() << " edges\n";
  });

  // density
  auto* density_cmd = app.add_subcommand("density", "Intersection density field per node");
  std::string nodes_path, edges_path, out_path, intersections_out;
  density_cmd->add_option("--nodes", nodes_path, "Node CSV")->required();
  density_cmd->add_option("--edges", edges_path, "Edge CSV")->required();
  density_cmd->add_option("--out", out_path, "Output density CSV")->required();
  density_cmd->add_option("--intersections-out", intersections_out,
                          "Optional derived-intersections GeoJSON");
  add_model_options(density_cmd, opts);
  density_cmd->callback([&] {
    resolve(opts);
    const RoadNetwork net = load_network(nodes_path, edges_path);
    IntersectionSet intersections;
    const DensityField density = compute_density(net, opts, &intersections);
    io::write_file(out_path, io::emit_density_csv(net, density));
    if (!intersections_out.empty()) {
      io::write_file(intersections_out, io::emit_intersections_geojson(intersections));
    }
    std::cout << intersections.points.size() << " intersections over " << net.node_count()
              << " nodes\n";
  });

  // travel-time
  auto* tt = app.add_subcommand("travel-time", "Adjusted travel-time field to nearest facility");
  std::string facilities_path;
  tt->add_option("--nodes", nodes_path, "Node CSV")->required();
  tt->add_option("--edges", edges_path, "Edge CSV")->required();
  tt->add_option("--facilities", facilities_path, "Facility GeoJSON")->required();
  tt->add_option("--out", out_path, "Output field CSV")->required();
  add_model_options(tt, opts);
  add_facility_options(tt, opts);
  tt->callback([&] {
    resolve(opts);
    const RoadNetwork net = load_network(nodes_path, edges_path);
    std::vector<std::string> warnings;
    const FacilitySet facilities = load_facilities(net, facilities_path, opts, &warnings);
    for (const std::string& w : warnings) {
      std::cerr << "warning: " << w << "\n";
    }
    const TravelTimeField field = compute_field(net, facilities, opts);
    io::write_file(out_path, io::emit_field_csv(net, field));
  });

  // population
  auto* pop = app.add_subcommand("population", "Voronoi-census population weights per node");
  std::string tracts_path, boundary_path;
  pop->add_option("--nodes", nodes_path, "Node CSV")->required();
  pop->add_option("--edges", edges_path, "Edge CSV")->required();
  pop->add_option("--tracts", tracts_path, "Census tract GeoJSON")->required();
  pop->add_option("--boundary", boundary_path, "Study boundary GeoJSON (default: buffered hull)");
  pop->add_option("--buffer", opts.config.boundary_buffer_m,
                  "Hull buffer in meters for the default boundary");
  pop->add_option("--threads", opts.config.threads, "Worker threads for independent stages");
  pop->add_option("--out", out_path, "Output weights CSV")->required();
  pop->callback([&] {
    opts.config.validate();
    const RoadNetwork net = load_network(nodes_path, edges_path);
    const PopulationWeights weights = compute_weights(net, tracts_path, boundary_path, opts);
    io::write_file(out_path, io::emit_weights_csv(net, weights));
    std::cout << "assigned " << io::format_double(weights.total_assigned) << " persons ("
              << io::format_double(weights.unassigned) << " unassigned)\n";
  });

  // coverage
  auto* cov = app.add_subcommand("coverage", "Population coverage curve over tau");
  std::string field_path, weights_path;
  cov->add_option("--field", field_path, "Field CSV from travel-time")->required();
  cov->add_option("--weights", weights_path, "Weights CSV from population")->required();
  cov->add_option("--out", out_path, "Output curve CSV")->required();
  cov->add_option("--curve-max-min", opts.curve_max_tau_minutes, "Curve domain end in minutes");
  cov->add_option("--curve-step-s", opts.config.curve_step_seconds, "Curve step in seconds");
  cov->callback([&] {
    resolve(opts);
    const auto field_rows = io::parse_field_csv(io::read_file(field_path), field_path);
    const auto weight_rows = io::parse_weights_csv(io::read_file(weights_path), weights_path);
    TravelTimeField field;
    PopulationWeights weights;
    join_field_weights(field_rows, weight_rows, field.seconds, weights.weights);
    for (const double w : weights.weights) {
      weights.total_assigned += w;
    }
    const CoverageCurve curve = coverage_curve(
        field, weights,
        default_tau_samples(opts.config.curve_max_tau_seconds, opts.config.curve_step_seconds));
    io::write_file(out_path, io::emit_curve_csv(curve));
  });

  // vulnerable
  auto* vuln = app.add_subcommand("vulnerable", "Clusters of nodes beyond the tau benchmark");
  vuln->add_option("--nodes", nodes_path, "Node CSV")->required();
  vuln->add_option("--edges", edges_path, "Edge CSV")->required();
  vuln->add_option("--field", field_path, "Field CSV from travel-time")->required();
  vuln->add_option("--weights", weights_path, "Weights CSV from population")->required();
  vuln->add_option("--out", out_path, "Output cluster GeoJSON")->required();
  vuln->add_option("--tau-min", opts.tau_minutes, "Benchmark tau in minutes");
  vuln->add_option("--min-population", opts.config.min_cluster_population,
                   "Cluster reporting floor in persons");
  vuln->callback([&] {
    resolve(opts);
    const RoadNetwork net = load_network(nodes_path, edges_path);
    const auto field_rows = io::parse_field_csv(io::read_file(field_path), field_path);
    const auto weight_rows = io::parse_weights_csv(io::read_file(weights_path), weights_path);
    if (field_rows.size() != net.node_count()) {
      throw ValidationError("field file does not cover the network's nodes");
    }
    std::unordered_map<std::string, NodeIndex> index_by_id;
    index_by_id.reserve(net.node_count());
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      index_by_id[net.node(v).id] = v;
    }
    TravelTimeField field;
    field.seconds.assign(net.node_count(), kUnreachable);
    PopulationWeights weights;
    weights.weights.assign(net.node_count(), 0.0);
    for (const io::FieldRow& row : field_rows) {
      const auto it = index_by_id.find(row.node_id);
      if (it == index_by_id.end()) {
        throw ValidationError("field row names unknown node '" + row.node_id + "'");
      }
      field.seconds[it->second] = row.seconds;
    }
    for (const io::WeightRow& row : weight_rows) {
      const auto it = index_by_id.find(row.node_id);
      if (it != index_by_id.end()) {
        weights.weights[it->second] = row.persons;
        weights.total_assigned += row.persons;
      }
    }
    const VulnerabilityReport report = vulnerability_report(
        net, field, weights, opts.config.tau_seconds, opts.config.min_cluster_population);
    io::write_file(out_path, io::emit_vulnerability_geojson(net, field, weights, report));
    std::cout << report.clusters.size() << " cluster(s), "
              << io::format_double(report.total_underserved) << " persons underserved\n";
  });

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Actual-to-simulated travel time ratio table");
  std::string trips_path, simulated_summary_path, simulated_field_path, json_out;
  cal->add_option("--trips", trips_path, "Trip CSV (dispatch_ts, arrival_ts)")->required();
  cal->add_option("--simulated-summary", simulated_summary_path,
                  "Simulated percentile summary CSV");
  cal->add_option("--simulated-field", simulated_field_path,
                  "Field CSV to summarize as the simulated side");
  cal->add_option("--out", out_path, "Output ratio CSV")->required();
  cal->add_option("--json-out", json_out, "Optional structured report path");
  cal->callback([&] {
    io::Warnings warnings;
    const auto trips = io::parse_trips_csv(io::read_file(trips_path), trips_path, &warnings);
    for (const std::string& w : warnings.messages) {
      std::cerr << "warning: " << w << "\n";
    }
    const PercentileSummary actual = percentile_summary(trip_durations(trips));
    PercentileSummary simulated;
    if (!simulated_summary_path.empty()) {
      simulated = io::parse_summary_csv(io::read_file(simulated_summary_path),
                                        simulated_summary_path);
    } else if (!simulated_field_path.empty()) {
      std::vector<double> times;
      for (const io::FieldRow& row :
           io::parse_field_csv(io::read_file(simulated_field_path), simulated_field_path)) {
        if (is_reachable(row.seconds)) {
          times.push_back(row.seconds);
        }
      }
      simulated = percentile_summary(std::move(times));
    } else {
      throw ConfigError("calibrate needs --simulated-summary or --simulated-field");
    }
    const RatioTable table = ratio_table(actual, simulated);
    io::write_file(out_path, io::emit_ratio_csv(table));
    if (!json_out.empty()) {
      io::write_file(json_out, io::emit_ratio_json(table));
    }
  });

  // scenario
  auto* scen = app.add_subcommand("scenario", "Coverage before/after scaling alpha");
  scen->add_option("--nodes", nodes_path, "Node CSV")->required();
  scen->add_option("--edges", edges_path, "Edge CSV")->required();
  scen->add_option("--facilities", facilities_path, "Facility GeoJSON")->required();
  scen->add_option("--tracts", tracts_path, "Census tract GeoJSON")->required();
  scen->add_option("--boundary", boundary_path, "Study boundary GeoJSON");
  scen->add_option("--scale", opts.config.alpha_scale, "Alpha multiplier in (0, 1]");
  scen->add_option("--out", out_path, "Output scenario CSV")->required();
  scen->add_option("--curve-max-min", opts.curve_max_tau_minutes, "Curve domain end in minutes");
  scen->add_option("--curve-step-s", opts.config.curve_step_seconds, "Curve step in seconds");
  add_model_options(scen, opts);
  add_facility_options(scen, opts);
  scen->callback([&] {
    resolve(opts);
    const RoadNetwork net = load_network(nodes_path, edges_path);
    const FacilitySet facilities = load_facilities(net, facilities_path, opts, nullptr);
    const DensityField density = compute_density(net, opts);
    const PopulationWeights weights = compute_weights(net, tracts_path, boundary_path, opts);
    const ScenarioResult result = scenario_alpha_scale(
        net, density, facilities, opts.config.category, weights,
        default_tau_samples(opts.config.curve_max_tau_seconds, opts.config.curve_step_seconds),
        opts.config.alpha, opts.config.alpha_scale, opts.config.direction,
        opts.config.threads > 1);
    io::write_file(out_path, io::emit_scenario_csv(result));
  });

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Full run: all artifacts plus the manifest");
  PipelineInputs inputs;
  std::string out_dir = "out";
  pipe->add_option("--nodes", inputs.nodes_path, "Node CSV")->required();
  pipe->add_option("--edges", inputs.edges_path, "Edge CSV")->required();
  pipe->add_option("--facilities", inputs.facilities_path, "Facility GeoJSON")->required();
  pipe->add_option("--tracts", inputs.tracts_path, "Census tract GeoJSON")->required();
  pipe->add_option("--boundary", inputs.boundary_path, "Study boundary GeoJSON");
  pipe->add_option("--trips", inputs.trips_path, "Trip CSV enabling the calibration artifact");
  pipe->add_option("--out-dir", out_dir, "Artifact directory");
  pipe->add_option("--tau-min", opts.tau_minutes, "Benchmark tau in minutes");
  pipe->add_option("--min-population", opts.config.min_cluster_population,
                   "Cluster reporting floor in persons");
  pipe->add_option("--curve-max-min", opts.curve_max_tau_minutes, "Curve domain end in minutes");
  pipe->add_option("--curve-step-s", opts.config.curve_step_seconds, "Curve step in seconds");
  pipe->add_option("--buffer", opts.config.boundary_buffer_m,
                   "Hull buffer in meters for the default boundary");
  pipe->add_option("--scale", opts.config.alpha_scale, "Scenario alpha multiplier");
  pipe->add_option("--crs", opts.config.crs, "Projection note recorded in the manifest");
  pipe->add_flag("--scenario", opts.config.run_scenario, "Also write the alpha-scaling scenario");
  bool print_summary = false;
  pipe->add_flag("--summary", print_summary, "Print a run recap to stdout");
  add_model_options(pipe, opts);
  add_facility_options(pipe, opts);
  pipe->callback([&] {
    resolve(opts);
    const PipelineOutcome outcome = run_pipeline(opts.config, inputs, out_dir);
    for (const std::string& w : outcome.warnings) {
      std::cerr << "warning: " << w << "\n";
    }
    if (outcome.exit_code != kExitOk) {
      std::cerr << "error: " << outcome.error << "\n";
      std::exit(outcome.exit_code);
    }
    if (print_summary) {
      std::cout << outcome.summary;
    }
    std::cout << "wrote " << outcome.artifacts.size() << " artifact(s) to " << out_dir << "\n";
  });

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
