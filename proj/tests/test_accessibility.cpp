#include <cmath>
#include <vector>

#include "doctest.h"
#include "emsnet/accessibility.hpp"
#include "emsnet/errors.hpp"
#include "support/fixtures.hpp"

using namespace emsnet;
using emsnet::testing::facilities_at_nodes;
using emsnet::testing::path_network;

namespace {

PopulationWeights uniform_weights(std::size_t nodes, double each) {
  PopulationWeights w;
  w.weights.assign(nodes, each);
  w.total_assigned = each * static_cast<double>(nodes);
  return w;
}

TravelTimeField field_of(std::vector<double> seconds, double alpha = 0.0) {
  TravelTimeField f;
  f.seconds = std::move(seconds);
  f.alpha = alpha;
  return f;
}

}  // namespace

TEST_CASE("accessibility predicate is boundary-inclusive and rejects unreachable") {
  CHECK(is_accessible(239.0, 240.0));
  CHECK(is_accessible(240.0, 240.0));
  CHECK_FALSE(is_accessible(240.0001, 240.0));
  CHECK_FALSE(is_accessible(kUnreachable, 240.0));
  CHECK_FALSE(is_accessible(kUnreachable, 1e18));
}

TEST_CASE("coverage curve basics") {
  SUBCASE("tau 0 counts only zero-time nodes, which carry no population here") {
    // Facility nodes have time 0 but weight 0.
    const auto field = field_of({0.0, 60.0, 120.0});
    PopulationWeights w;
    w.weights = {0.0, 500.0, 500.0};
    w.total_assigned = 1000.0;
    const CoverageCurve curve = coverage_curve(field, w, {0.0});
    CHECK(curve.fractions[0] == 0.0);
  }
  SUBCASE("saturates at 1 when everything is reachable") {
    const auto field = field_of({0.0, 60.0, 120.0});
    const CoverageCurve curve = coverage_curve(field, uniform_weights(3, 10.0), {500.0});
    CHECK(curve.fractions[0] == doctest::Approx(1.0));
  }
  SUBCASE("five-node path with a facility at one end covers 3/5 at 120 s") {
    const auto field = field_of({0.0, 60.0, 120.0, 180.0, 240.0});
    const CoverageCurve curve = coverage_curve(field, uniform_weights(5, 1.0), {120.0});
    CHECK(curve.fractions[0] == doctest::Approx(0.6));
  }
  SUBCASE("zero population total is rejected") {
    const auto field = field_of({0.0});
    CHECK_THROWS_AS(coverage_curve(field, uniform_weights(1, 0.0), {60.0}), ValidationError);
  }
  SUBCASE("unsorted taus are rejected") {
    const auto field = field_of({0.0});
    CHECK_THROWS_AS(coverage_curve(field, uniform_weights(1, 1.0), {60.0, 30.0}),
                    ValidationError);
  }
  SUBCASE("unreachable nodes never count, no matter the tau") {
    const auto field = field_of({0.0, kUnreachable});
    const CoverageCurve curve = coverage_curve(field, uniform_weights(2, 1.0), {1e15});
    CHECK(curve.fractions[0] == doctest::Approx(0.5));
  }
}

TEST_CASE("coverage curve is non-decreasing in tau and non-increasing in alpha") {
  const RoadNetwork net = generate_random_planar(40, 8, {0, 0, 2500, 2500});
  const IntersectionSet set = derive_intersections(net, {RoadClass::kStreet}, 1.0);
  const DensityField density = density_field(net, set, 600.0, 1e4);
  const FacilitySet fs = facilities_at_nodes(net, {{"n0", FacilityKind::kEmsStation},
                                                   {"n17", FacilityKind::kHospital}});
  const PopulationWeights weights = uniform_weights(net.node_count(), 25.0);
  const std::vector<double> taus = default_tau_samples(900.0, 15.0);

  std::vector<CoverageCurve> curves;
  for (const double alpha : {0.0, 5.0, 10.0, 15.0}) {
    const EdgeTimes times =
        adjusted_times(baseline_times(net), edge_delays(net, density, alpha));
    curves.push_back(coverage_curve(
        travel_time_field(net, times, fs, FacilityCategory::kOverall), weights, taus));
  }
  for (const CoverageCurve& curve : curves) {
    for (std::size_t i = 1; i < curve.fractions.size(); ++i) {
      CHECK(curve.fractions[i] >= curve.fractions[i - 1]);
    }
    for (const double f : curve.fractions) {
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
  }
  for (std::size_t a = 1; a < curves.size(); ++a) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
      CHECK(curves[a].fractions[i] <= curves[a - 1].fractions[i]);
    }
  }
}

TEST_CASE("vulnerability report") {
  SUBCASE("all accessible yields an empty report") {
    const RoadNetwork net = path_network(4, 100.0, 10.0);  // 10 s edges
    const auto field = field_of({0.0, 10.0, 20.0, 30.0});
    const VulnerabilityReport report =
        vulnerability_report(net, field, uniform_weights(4, 10.0), 240.0, 0.0);
    CHECK(report.clusters.empty());
    CHECK(report.total_underserved == 0.0);
    CHECK(report.accessible_population == doctest::Approx(40.0));
  }
  SUBCASE("tail of a path forms one cluster") {
    const RoadNetwork net = path_network(4, 600.0, 10.0);  // 60 s edges
    const auto field = field_of({0.0, 60.0, 120.0, 180.0});
    const VulnerabilityReport report =
        vulnerability_report(net, field, uniform_weights(4, 10.0), 60.0, 0.0);
    REQUIRE(report.clusters.size() == 1);
    CHECK(report.clusters[0].node_ids == std::vector<NodeIndex>{2, 3});
    CHECK(report.clusters[0].population == doctest::Approx(20.0));
    CHECK(report.clusters[0].max_time_seconds == doctest::Approx(180.0));
    CHECK(report.clusters[0].mean_time_seconds == doctest::Approx(150.0));
    CHECK(report.total_underserved == doctest::Approx(20.0));
  }
  SUBCASE("two pockets separated by accessible nodes form two clusters") {
    // Path of 7; facility in the middle. Ends are slow.
    const RoadNetwork net = path_network(7, 600.0, 10.0);
    const auto field = field_of({180.0, 120.0, 60.0, 0.0, 60.0, 120.0, 180.0});
    const VulnerabilityReport report =
        vulnerability_report(net, field, uniform_weights(7, 10.0), 120.0, 0.0);
    REQUIRE(report.clusters.size() == 2);
    CHECK(report.clusters[0].node_ids.size() == 1);
    CHECK(report.clusters[1].node_ids.size() == 1);
    CHECK(report.total_underserved == doctest::Approx(20.0));
  }
  SUBCASE("min population filters reporting but not membership or totals") {
    const RoadNetwork net = path_network(5, 600.0, 10.0);
    const auto field = field_of({0.0, 300.0, 300.0, 0.0, 400.0});
    PopulationWeights w;
    w.weights = {100.0, 30.0, 40.0, 100.0, 500.0};
    w.total_assigned = 770.0;
    const VulnerabilityReport all =
        vulnerability_report(net, field, w, 240.0, 0.0);
    REQUIRE(all.clusters.size() == 2);
    // Sorted by population descending: {n4: 500} then {n1, n2: 70}.
    CHECK(all.clusters[0].population == doctest::Approx(500.0));
    CHECK(all.clusters[1].population == doctest::Approx(70.0));

    const VulnerabilityReport filtered =
        vulnerability_report(net, field, w, 240.0, 100.0);
    REQUIRE(filtered.clusters.size() == 1);
    CHECK(filtered.clusters[0].population == doctest::Approx(500.0));
    CHECK(filtered.filtered_population == doctest::Approx(70.0));
    // Totals identity.
    CHECK(filtered.total_underserved + filtered.accessible_population +
              filtered.filtered_population ==
          doctest::Approx(w.total_assigned).epsilon(1e-9));
  }
  SUBCASE("unreachable nodes join clusters and mark the max time") {
    const RoadNetwork net = path_network(3, 600.0, 10.0);
    const auto field = field_of({0.0, 300.0, kUnreachable});
    const VulnerabilityReport report =
        vulnerability_report(net, field, uniform_weights(3, 1.0), 240.0, 0.0);
    REQUIRE(report.clusters.size() == 1);
    CHECK(report.clusters[0].node_ids.size() == 2);
    CHECK_FALSE(is_reachable(report.clusters[0].max_time_seconds));
    CHECK(report.clusters[0].mean_time_seconds == doctest::Approx(300.0));
  }
}

TEST_CASE("clusters partition the inaccessible set regardless of the floor") {
  const RoadNetwork net = generate_random_planar(60, 4, {0, 0, 3000, 3000});
  const IntersectionSet set = derive_intersections(net, {RoadClass::kStreet}, 1.0);
  const DensityField density = density_field(net, set, 600.0, 1e4);
  const EdgeTimes times = adjusted_times(baseline_times(net), edge_delays(net, density, 15.0));
  const FacilitySet fs = facilities_at_nodes(net, {{"n0", FacilityKind::kEmsStation}});
  const TravelTimeField field = travel_time_field(net, times, fs, FacilityCategory::kOverall);
  const PopulationWeights weights = uniform_weights(net.node_count(), 3.0);

  const double tau = 120.0;
  const VulnerabilityReport unfiltered =
      vulnerability_report(net, field, weights, tau, 0.0);
  std::vector<bool> seen(net.node_count(), false);
  std::size_t clustered = 0;
  for (const VulnerableCluster& c : unfiltered.clusters) {
    for (const NodeIndex v : c.node_ids) {
      CHECK_FALSE(seen[v]);
      seen[v] = true;
      CHECK_FALSE(is_accessible(field.seconds[v], tau));
      ++clustered;
    }
  }
  std::size_t inaccessible = 0;
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    if (!is_accessible(field.seconds[v], tau)) {
      ++inaccessible;
    }
  }
  CHECK(clustered == inaccessible);

  // Raising the floor only drops whole clusters from the report.
  const VulnerabilityReport filtered = vulnerability_report(net, field, weights, tau, 10.0);
  for (const VulnerableCluster& c : filtered.clusters) {
    bool found = false;
    for (const VulnerableCluster& u : unfiltered.clusters) {
      if (u.node_ids == c.node_ids) {
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("alpha scaling scenario") {
  const RoadNetwork net = generate_random_planar(45, 10, {0, 0, 2500, 2500});
  const IntersectionSet set = derive_intersections(net, {RoadClass::kStreet}, 1.0);
  const DensityField density = density_field(net, set, 600.0, 1e4);
  const FacilitySet fs = facilities_at_nodes(net, {{"n3", FacilityKind::kEmsStation}});
  const PopulationWeights weights = uniform_weights(net.node_count(), 5.0);
  const std::vector<double> taus = default_tau_samples(600.0, 30.0);

  SUBCASE("scale 1 is the identity") {
    const ScenarioResult r = scenario_alpha_scale(net, density, fs, FacilityCategory::kOverall,
                                                  weights, taus, 15.0, 1.0);
    CHECK(r.before.fractions == r.after.fractions);
    for (const double d : r.coverage_delta) {
      CHECK(d == 0.0);
    }
  }
  SUBCASE("halving alpha never hurts coverage") {
    const ScenarioResult r = scenario_alpha_scale(net, density, fs, FacilityCategory::kOverall,
                                                  weights, taus, 15.0, 0.5);
    for (std::size_t i = 0; i < taus.size(); ++i) {
      CHECK(r.after.fractions[i] >= r.before.fractions[i]);
    }
    CHECK(r.alpha_after == doctest::Approx(7.5));
  }
  SUBCASE("zero alpha baseline is scale-invariant") {
    const ScenarioResult r = scenario_alpha_scale(net, density, fs, FacilityCategory::kOverall,
                                                  weights, taus, 0.0, 0.25);
    CHECK(r.before.fractions == r.after.fractions);
  }
  SUBCASE("out-of-range scale is rejected") {
    CHECK_THROWS_AS(scenario_alpha_scale(net, density, fs, FacilityCategory::kOverall, weights,
                                         taus, 15.0, 0.0),
                    ValidationError);
    CHECK_THROWS_AS(scenario_alpha_scale(net, density, fs, FacilityCategory::kOverall, weights,
                                         taus, 15.0, 1.5),
                    ValidationError);
  }
  SUBCASE("parallel execution matches sequential") {
    const ScenarioResult seq = scenario_alpha_scale(net, density, fs, FacilityCategory::kOverall,
                                                    weights, taus, 15.0, 0.5,
                                                    FieldDirection::kFromFacilities, false);
    const ScenarioResult par = scenario_alpha_scale(net, density, fs, FacilityCategory::kOverall,
                                                    weights, taus, 15.0, 0.5,
                                                    FieldDirection::kFromFacilities, true);
    CHECK(seq.before.fractions == par.before.fractions);
    CHECK(seq.after.fractions == par.after.fractions);
  }
}
