#include "emsnet/accessibility.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "emsnet/errors.hpp"

namespace emsnet {

bool is_accessible(double seconds, double tau_seconds) {
  return is_reachable(seconds) && seconds <= tau_seconds;
}

std::vector<double> default_tau_samples(double max_tau, double step) {
  std::vector<double> taus;
  for (double t = 0.0; t < max_tau; t += step) {
    taus.push_back(t);
  }
  taus.push_back(max_tau);
  return taus;
}

CoverageCurve coverage_curve(const TravelTimeField& field, const PopulationWeights& weights,
                             const std::vector<double>& taus) {
  if (weights.weights.size() != field.seconds.size()) {
    throw ValidationError("population weights and travel-time field cover different node sets");
  }
  if (!(weights.total_assigned > 0.0)) {
    throw ValidationError("coverage curve requires a positive total population");
  }
  if (taus.empty() || !std::is_sorted(taus.begin(), taus.end())) {
    throw ValidationError("tau samples must be nonempty and ascending");
  }

  CoverageCurve curve;
  curve.category = field.category;
  curve.alpha = field.alpha;
  curve.taus = taus;
  curve.total_population = weights.total_assigned;
  curve.fractions.reserve(taus.size());

  // Accumulate in node order for every tau. A fixed summation order keeps
  // coverage exactly monotone under accessible-set inclusion (larger tau or
  // smaller alpha can only add non-negative addends at fixed positions), so
  // the documented monotonicity properties hold to the last ulp.
  for (const double tau : taus) {
    double covered = 0.0;
    for (std::size_t v = 0; v < field.seconds.size(); ++v) {
      if (is_accessible(field.seconds[v], tau)) {
        covered += weights.weights[v];
      }
    }
    curve.fractions.push_back(covered / weights.total_assigned);
  }
  return curve;
}

VulnerabilityReport vulnerability_report(const RoadNetwork& network, const TravelTimeField& field,
                                         const PopulationWeights& weights, double tau_seconds,
                                         double min_population) {
  if (tau_seconds < 0.0) {
    throw ValidationError("tau must be >= 0");
  }
  if (field.seconds.size() != network.node_count() ||
      weights.weights.size() != network.node_count()) {
    throw ValidationError("field or weights do not cover the network's node set");
  }

  VulnerabilityReport report;
  report.tau_seconds = tau_seconds;

  std::vector<bool> inaccessible(network.node_count());
  for (NodeIndex v = 0; v < network.node_count(); ++v) {
    inaccessible[v] = !is_accessible(field.seconds[v], tau_seconds);
    if (!inaccessible[v]) {
      report.accessible_population += weights.weights[v];
    }
  }

  // Connected components of the subgraph induced by inaccessible nodes,
  // treating every edge as undirected.
  std::vector<std::uint32_t> component(network.node_count(),
                                       std::numeric_limits<std::uint32_t>::max());
  std::uint32_t component_count = 0;
  std::vector<NodeIndex> stack;
  for (NodeIndex start = 0; start < network.node_count(); ++start) {
    if (!inaccessible[start] || component[start] != std::numeric_limits<std::uint32_t>::max()) {
      continue;
    }
    const std::uint32_t id = component_count++;
    component[start] = id;
    stack.assign(1, start);
    while (!stack.empty()) {
      const NodeIndex u = stack.back();
      stack.pop_back();
      auto visit = [&](const std::vector<RoadNetwork::Incidence>& incidences) {
        for (const RoadNetwork::Incidence& inc : incidences) {
          const NodeIndex w = inc.neighbor;
          if (inaccessible[w] && component[w] == std::numeric_limits<std::uint32_t>::max()) {
            component[w] = id;
            stack.push_back(w);
          }
        }
      };
      visit(network.outgoing(u));
      visit(network.incoming(u));
    }
  }

  std::vector<VulnerableCluster> clusters(component_count);
  for (NodeIndex v = 0; v < network.node_count(); ++v) {
    if (!inaccessible[v]) {
      continue;
    }
    VulnerableCluster& c = clusters[component[v]];
    c.node_ids.push_back(v);
    c.population += weights.weights[v];
  }
  for (VulnerableCluster& c : clusters) {
    std::sort(c.node_ids.begin(), c.node_ids.end());
    double max_time = 0.0;
    double finite_sum = 0.0;
    std::size_t finite_count = 0;
    for (const NodeIndex v : c.node_ids) {
      const double t = field.seconds[v];
      max_time = std::max(max_time, t);
      if (is_reachable(t)) {
        finite_sum += t;
        ++finite_count;
      }
    }
    c.max_time_seconds = max_time;
    c.mean_time_seconds = finite_count > 0 ? finite_sum / static_cast<double>(finite_count)
                                           : kUnreachable;
  }

  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const VulnerableCluster& a, const VulnerableCluster& b) {
                     if (a.population != b.population) {
                       return a.population > b.population;
                     }
                     return a.node_ids.front() < b.node_ids.front();
                   });

  for (VulnerableCluster& c : clusters) {
    if (c.population < min_population) {
      report.filtered_population += c.population;
      continue;
    }
    c.cluster_id = static_cast<std::uint32_t>(report.clusters.size());
    report.total_underserved += c.population;
    report.clusters.push_back(std::move(c));
  }
  return report;
}

ScenarioResult scenario_alpha_scale(const RoadNetwork& network, const DensityField& density,
                                    const FacilitySet& facilities, FacilityCategory category,
                                    const PopulationWeights& weights,
                                    const std::vector<double>& taus, double base_alpha,
                                    double scale, FieldDirection direction, bool parallel) {
  if (!(scale > 0.0) || scale > 1.0) {
    throw ValidationError("scenario scale must be in (0, 1]");
  }

  auto run = [&](double alpha) {
    const EdgeTimes times = adjusted_times(baseline_times(network),
                                           edge_delays(network, density, alpha));
    const TravelTimeField field =
        travel_time_field(network, times, facilities, category, direction);
    return coverage_curve(field, weights, taus);
  };

  ScenarioResult result;
  result.alpha_before = base_alpha;
  result.alpha_after = base_alpha * scale;
  if (parallel) {
    auto after = std::async(std::launch::async, run, result.alpha_after);
    result.before = run(result.alpha_before);
    result.after = after.get();
  } else {
    result.before = run(result.alpha_before);
    result.after = run(result.alpha_after);
  }

  result.coverage_delta.resize(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    result.coverage_delta[i] = result.after.fractions[i] - result.before.fractions[i];
  }
  return result;
}

}  // namespace emsnet
