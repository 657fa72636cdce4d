#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emsnet/network.hpp"
#include "emsnet/population.hpp"
#include "emsnet/travel_time.hpp"

namespace emsnet {

// Benchmark accessibility thresholds in seconds.
inline constexpr double kDefaultTauSeconds = 240.0;          // 4 min response standard
inline constexpr double kHospitalTauSeconds = 330.0;         // 5.5 min hospital preset
inline constexpr double kDefaultCurveMaxTauSeconds = 900.0;  // curve sampling domain
inline constexpr double kDefaultCurveStepSeconds = 15.0;

// A node is accessible when its field time is finite and <= tau (boundary
// inclusive).
bool is_accessible(double seconds, double tau_seconds);

// Population fraction accessible as a step function of tau.
struct CoverageCurve {
  FacilityCategory category = FacilityCategory::kOverall;
  std::vector<double> taus;       // seconds, ascending
  std::vector<double> fractions;  // covered population fraction per tau
  double total_population = 0.0;
  double alpha = 0.0;
};

// Inclusive range [0, max_tau] step `step`; the final sample is max_tau even
// when the step does not divide it.
std::vector<double> default_tau_samples(double max_tau = kDefaultCurveMaxTauSeconds,
                                        double step = kDefaultCurveStepSeconds);

// fraction(tau) = assigned population on accessible nodes / total assigned.
// Requires a positive population total and ascending taus.
CoverageCurve coverage_curve(const TravelTimeField& field, const PopulationWeights& weights,
                             const std::vector<double>& taus);

// Maximal connected cluster of inaccessible nodes with its population.
struct VulnerableCluster {
  std::uint32_t cluster_id = 0;
  std::vector<NodeIndex> node_ids;   // sorted
  double population = 0.0;
  double max_time_seconds = 0.0;     // kUnreachable when a node is disconnected
  double mean_time_seconds = 0.0;    // over finite node times only
};

struct VulnerabilityReport {
  double tau_seconds = 0.0;
  std::vector<VulnerableCluster> clusters;  // population-descending
  double total_underserved = 0.0;           // sum over reported clusters
  double filtered_population = 0.0;         // clusters below the reporting floor
  double accessible_population = 0.0;
};

// Groups inaccessible nodes into connected components of the road graph
// (edge direction ignored for clustering), drops components below
// `min_population` from the report, and sorts by population descending.
VulnerabilityReport vulnerability_report(const RoadNetwork& network, const TravelTimeField& field,
                                         const PopulationWeights& weights, double tau_seconds,
                                         double min_population = 100.0);

struct ScenarioResult {
  CoverageCurve before;
  CoverageCurve after;
  std::vector<double> coverage_delta;  // after - before, per tau sample
  double alpha_before = 0.0;
  double alpha_after = 0.0;
};

// Recomputes delays, fields, and coverage at alpha and alpha*scale, modeling
// citywide signal preemption as a multiplicative reduction of the
// intersection delay factor. scale must be in (0, 1].
ScenarioResult scenario_alpha_scale(const RoadNetwork& network, const DensityField& density,
                                    const FacilitySet& facilities, FacilityCategory category,
                                    const PopulationWeights& weights,
                                    const std::vector<double>& taus, double base_alpha,
                                    double scale,
                                    FieldDirection direction = FieldDirection::kFromFacilities,
                                    bool parallel = false);

}  // namespace emsnet
