#include <cmath>
#include <vector>

#include "doctest.h"
#include "emsnet/errors.hpp"
#include "emsnet/travel_time.hpp"
#include "support/fixtures.hpp"

using namespace emsnet;
using emsnet::testing::bellman_ford_field;
using emsnet::testing::facilities_at_nodes;
using emsnet::testing::path_network;

namespace {

DensityField uniform_density(const RoadNetwork& net, double value, double unit_scale = 1e4) {
  DensityField field;
  field.radius_m = 800.0;
  field.unit_scale_m2 = unit_scale;
  field.values.assign(net.node_count(), value);
  return field;
}

EdgeTimes times_for(const RoadNetwork& net, const DensityField& density, double alpha) {
  return adjusted_times(baseline_times(net), edge_delays(net, density, alpha));
}

}  // namespace

TEST_CASE("baseline times are length over speed") {
  const std::vector<NodeRecord> nodes{{"a", 0, 0}, {"b", 1, 0}, {"c", 2, 0}};
  const std::vector<EdgeRecord> edges{
      {"city_block", "a", "b", 402.336, 25.0 * kMphToMps, RoadClass::kStreet, false},
      {"mile_at_55", "b", "c", 1609.344, 55.0 * kMphToMps, RoadClass::kHighway, false}};
  const RoadNetwork net = RoadNetwork::build(nodes, edges);
  const std::vector<double> t = baseline_times(net);
  CHECK(t[0] == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(t[1] == doctest::Approx(65.4545454545).epsilon(1e-9));

  const RoadNetwork grid = generate_grid(3, 3, 200.0, 10.0);
  for (const double tt : baseline_times(grid)) {
    CHECK(tt == doctest::Approx(20.0).epsilon(1e-12));
  }
}

TEST_CASE("edge delays average the endpoint densities") {
  const RoadNetwork net = path_network(2, 100.0, 10.0);

  SUBCASE("alpha zero kills every delay") {
    const EdgeDelays d = edge_delays(net, uniform_density(net, 3.7), 0.0);
    CHECK(d.seconds[0] == 0.0);
  }
  SUBCASE("symmetric average") {
    const EdgeDelays d = edge_delays(net, uniform_density(net, 0.5), 15.0);
    CHECK(d.seconds[0] == doctest::Approx(7.5).epsilon(1e-12));
  }
  SUBCASE("one-sided average") {
    DensityField density = uniform_density(net, 0.0);
    density.values[0] = 1.0;
    const EdgeDelays d = edge_delays(net, density, 15.0);
    CHECK(d.seconds[0] == doctest::Approx(7.5).epsilon(1e-12));
  }
  SUBCASE("mismatched node sets are rejected") {
    const RoadNetwork bigger = path_network(5, 100.0, 10.0);
    CHECK_THROWS_AS(edge_delays(bigger, uniform_density(net, 1.0), 15.0), ValidationError);
  }
}

TEST_CASE("adjusted times are the componentwise sum and record alpha") {
  const RoadNetwork net = generate_grid(2, 3, 200.0, 10.0);
  SUBCASE("sum") {
    const EdgeTimes t = times_for(net, uniform_density(net, 0.5), 15.0);
    for (std::size_t e = 0; e < t.adjusted.size(); ++e) {
      CHECK(t.adjusted[e] == doctest::Approx(20.0 + 7.5).epsilon(1e-12));
      CHECK(t.adjusted[e] == t.baseline[e] + t.delay[e]);
    }
    CHECK(t.alpha == 15.0);
  }
  SUBCASE("zero delays reduce to the baseline") {
    const EdgeTimes t = times_for(net, uniform_density(net, 0.5), 0.0);
    CHECK(t.adjusted == t.baseline);
  }
  SUBCASE("key mismatch is rejected") {
    EdgeDelays delays{std::vector<double>(net.edge_count() + 1, 1.0), 15.0};
    CHECK_THROWS_AS(adjusted_times(baseline_times(net), delays), ValidationError);
  }
}

TEST_CASE("uniform lattice density makes interior edge times equal") {
  const RoadNetwork net = generate_grid(7, 7, 150.0, 10.0);
  const IntersectionSet set = derive_intersections(net, {RoadClass::kStreet}, 1.0);
  const DensityField density = density_field(net, set, 2.0 * 150.0, 1e4);
  const EdgeTimes times = times_for(net, density, 10.0);

  // Interior nodes are at least radius away from the hull of the lattice.
  const Bounds bb = net.bounds();
  auto interior = [&](NodeIndex v) {
    const Point p = net.position(v);
    return p.x - bb.min_x >= 300.0 && bb.max_x - p.x >= 300.0 && p.y - bb.min_y >= 300.0 &&
           bb.max_y - p.y >= 300.0;
  };
  double reference = -1.0;
  std::size_t checked = 0;
  for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
    if (!interior(net.edge(e).from) || !interior(net.edge(e).to)) {
      continue;
    }
    if (reference < 0.0) {
      reference = times.adjusted[e];
    }
    CHECK(times.adjusted[e] == doctest::Approx(reference).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("facility snapping") {
  const RoadNetwork net = path_network(3, 200.0, 10.0);  // nodes at x = 0, 200, 400

  SUBCASE("coincident point snaps at distance zero") {
    const FacilitySet set =
        snap_facilities(net, {{"f", FacilityKind::kEmsStation, 200.0, 0.0}}, 500.0);
    REQUIRE(set.facilities.size() == 1);
    CHECK(set.facilities[0].snapped_node == *net.find_node("n1"));
    CHECK(set.facilities[0].snap_distance_m == 0.0);
  }
  SUBCASE("equidistant tie goes to the smaller node id") {
    const FacilitySet set =
        snap_facilities(net, {{"f", FacilityKind::kEmsStation, 100.0, 0.0}}, 500.0);
    REQUIRE(set.facilities.size() == 1);
    CHECK(net.node(set.facilities[0].snapped_node).id == "n0");
  }
  SUBCASE("beyond the snap limit is excluded with a report") {
    const FacilitySet set =
        snap_facilities(net, {{"far", FacilityKind::kHospital, 0.0, 600.0}}, 500.0);
    CHECK(set.facilities.empty());
    REQUIRE(set.excluded.size() == 1);
    CHECK(set.excluded[0].id == "far");
    CHECK(set.excluded[0].nearest_distance_m == doctest::Approx(600.0));
  }
}

TEST_CASE("field on a path graph") {
  const RoadNetwork net = path_network(3, 600.0, 10.0);  // 60 s per edge
  const EdgeTimes times = times_for(net, uniform_density(net, 0.0), 0.0);

  SUBCASE("single facility at one end") {
    const FacilitySet fs = facilities_at_nodes(net, {{"n0", FacilityKind::kEmsStation}});
    const TravelTimeField field =
        travel_time_field(net, times, fs, FacilityCategory::kEmsStation);
    CHECK(field.seconds[0] == 0.0);
    CHECK(field.seconds[1] == doctest::Approx(60.0));
    CHECK(field.seconds[2] == doctest::Approx(120.0));
  }
  SUBCASE("two facilities take the minimum") {
    const FacilitySet fs = facilities_at_nodes(
        net, {{"n0", FacilityKind::kEmsStation}, {"n2", FacilityKind::kHospital}});
    const TravelTimeField field = travel_time_field(net, times, fs, FacilityCategory::kOverall);
    CHECK(field.seconds[1] == doctest::Approx(60.0));
  }
  SUBCASE("empty category is rejected by name") {
    const FacilitySet fs = facilities_at_nodes(net, {{"n0", FacilityKind::kEmsStation}});
    CHECK_THROWS_WITH_AS(travel_time_field(net, times, fs, FacilityCategory::kHospital),
                         "no facilities in category 'hospital'", ValidationError);
  }
}

TEST_CASE("disconnected nodes are marked unreachable") {
  const std::vector<NodeRecord> nodes{{"a", 0, 0}, {"b", 100, 0}, {"c", 5000, 0}, {"d", 5100, 0}};
  const std::vector<EdgeRecord> edges{{"e1", "a", "b", 100.0, 10.0, RoadClass::kStreet, false},
                                      {"e2", "c", "d", 100.0, 10.0, RoadClass::kStreet, false}};
  const RoadNetwork net = RoadNetwork::build(nodes, edges);
  const EdgeTimes times = times_for(net, uniform_density(net, 0.0), 0.0);
  const FacilitySet fs = facilities_at_nodes(net, {{"a", FacilityKind::kEmsStation}});
  const TravelTimeField field = travel_time_field(net, times, fs, FacilityCategory::kOverall);
  CHECK(is_reachable(field.seconds[1]));
  CHECK_FALSE(is_reachable(field.seconds[2]));
  CHECK_FALSE(is_reachable(field.seconds[3]));
}

TEST_CASE("oneway edges are honored and the direction modes differ") {
  // a -> b oneway; facility at b. Response direction cannot reach a.
  const std::vector<NodeRecord> nodes{{"a", 0, 0}, {"b", 100, 0}};
  const std::vector<EdgeRecord> edges{{"e", "a", "b", 100.0, 10.0, RoadClass::kStreet, true}};
  const RoadNetwork net = RoadNetwork::build(nodes, edges);
  const EdgeTimes times = times_for(net, uniform_density(net, 0.0), 0.0);
  const FacilitySet fs = facilities_at_nodes(net, {{"b", FacilityKind::kEmsStation}});

  const TravelTimeField from = travel_time_field(net, times, fs, FacilityCategory::kOverall,
                                                 FieldDirection::kFromFacilities);
  CHECK_FALSE(is_reachable(from.seconds[*net.find_node("a")]));

  const TravelTimeField to = travel_time_field(net, times, fs, FacilityCategory::kOverall,
                                               FieldDirection::kToFacilities);
  CHECK(to.seconds[*net.find_node("a")] == doctest::Approx(10.0));

  const TravelTimeField any = travel_time_field(net, times, fs, FacilityCategory::kOverall,
                                                FieldDirection::kAnyDirection);
  CHECK(any.seconds[*net.find_node("a")] == doctest::Approx(10.0));
}

TEST_CASE("field properties on seeded random networks") {
  for (const std::uint64_t seed : {1ull, 2ull, 3ull, 17ull, 99ull}) {
    const RoadNetwork net = generate_random_planar(50, seed, {0, 0, 2000, 2000});
    const IntersectionSet set = derive_intersections(net, {RoadClass::kStreet}, 1.0);
    const DensityField density = density_field(net, set, 500.0, 1e4);

    FacilitySet fs;
    SplitMix64 rng(seed * 31 + 7);
    for (int f = 0; f < 3; ++f) {
      const NodeIndex v = static_cast<NodeIndex>(rng.next_below(net.node_count()));
      const Point p = net.position(v);
      fs.facilities.push_back({"f" + std::to_string(f), FacilityKind::kEmsStation, p.x, p.y, v,
                               0.0});
    }
    std::vector<NodeIndex> sources;
    for (const Facility& f : fs.facilities) {
      sources.push_back(f.snapped_node);
    }

    const EdgeTimes t0 = times_for(net, density, 0.0);
    const EdgeTimes t1 = times_for(net, density, 7.5);
    const EdgeTimes t2 = times_for(net, density, 15.0);
    const TravelTimeField f0 = travel_time_field(net, t0, fs, FacilityCategory::kOverall);
    const TravelTimeField f1 = travel_time_field(net, t1, fs, FacilityCategory::kOverall);
    const TravelTimeField f2 = travel_time_field(net, t2, fs, FacilityCategory::kOverall);

    // alpha = 0 reduces to the baseline field exactly.
    EdgeTimes baseline_only;
    baseline_only.baseline = baseline_times(net);
    baseline_only.delay.assign(net.edge_count(), 0.0);
    baseline_only.adjusted = baseline_only.baseline;
    const TravelTimeField fb =
        travel_time_field(net, baseline_only, fs, FacilityCategory::kOverall);
    CHECK(f0.seconds == fb.seconds);

    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      // Monotone in alpha.
      CHECK(f0.seconds[v] <= f1.seconds[v]);
      CHECK(f1.seconds[v] <= f2.seconds[v]);
    }

    // Relaxation fixed point for the alpha = 15 field.
    for (EdgeIndex e = 0; e < net.edge_count(); ++e) {
      const RoadNetwork::Edge& edge = net.edge(e);
      if (is_reachable(f2.seconds[edge.from])) {
        CHECK(f2.seconds[edge.to] <= f2.seconds[edge.from] + t2.adjusted[e] + 1e-9);
      }
      if (!edge.oneway && is_reachable(f2.seconds[edge.to])) {
        CHECK(f2.seconds[edge.from] <= f2.seconds[edge.to] + t2.adjusted[e] + 1e-9);
      }
    }
    std::vector<bool> is_source(net.node_count(), false);
    for (const NodeIndex s : sources) {
      is_source[s] = true;
    }
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      if (is_source[v] || !is_reachable(f2.seconds[v])) {
        continue;
      }
      bool tight = false;
      for (const RoadNetwork::Incidence& inc : net.incoming(v)) {
        if (is_reachable(f2.seconds[inc.neighbor]) &&
            f2.seconds[inc.neighbor] + t2.adjusted[inc.edge] == f2.seconds[v]) {
          tight = true;
          break;
        }
      }
      CHECK(tight);
    }

    // Multi-source equals the min over single-source fields, exactly.
    std::vector<double> min_single(net.node_count(), kUnreachable);
    for (const Facility& f : fs.facilities) {
      FacilitySet single;
      single.facilities.push_back(f);
      const TravelTimeField sf = travel_time_field(net, t2, single, FacilityCategory::kOverall);
      for (NodeIndex v = 0; v < net.node_count(); ++v) {
        min_single[v] = std::min(min_single[v], sf.seconds[v]);
      }
    }
    CHECK(f2.seconds == min_single);

    // Brute-force relaxation oracle agrees exactly.
    CHECK(f2.seconds == bellman_ford_field(net, t2.adjusted, sources));

    // Direction symmetry on a fully bidirectional network.
    const TravelTimeField reversed = travel_time_field(net, t2, fs, FacilityCategory::kOverall,
                                                       FieldDirection::kToFacilities);
    CHECK(f2.seconds == reversed.seconds);
  }
}
