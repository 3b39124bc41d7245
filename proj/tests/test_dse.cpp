#include <random>

#include <doctest.h>

#include "stacklaw/dse.hpp"
#include "support.hpp"

using namespace stacklaw;
using testsupport::base_point;

TEST_CASE("evaluate composes the closed-form chain") {
  const DesignPoint point = base_point();
  const EvaluationResult r = evaluate(point);
  CHECK(r.miss_ratio == 0.02);
  CHECK(r.offered_load == 0.01);  // 4 threads * 0.125 * 0.02
  CHECK(r.service_time == 32.0);
  CHECK(r.utilization == 0.32);
  REQUIRE(r.queuing_wait.has_value());
  CHECK(*r.queuing_wait == doctest::Approx(0.32 * 32.0 / (2.0 * 0.68)));
  CHECK(*r.miss_penalty == 100.0 + *r.queuing_wait + 32.0);
  CHECK(*r.cpi == 1.0 + 0.02 * *r.miss_penalty);
  CHECK(*r.throughput == 4.0 / *r.cpi);
  CHECK(r.max_temp_c == 65.0);
  CHECK(r.layer_max_temp_c == std::vector<double>{60.0, 65.0});
  CHECK(r.total_power_w == 100.0);
  CHECK(r.usable_area_mm2 == 200.0);
  CHECK(!r.flags.any());
}

TEST_CASE("a near-perfect cache leaves CPI at the base") {
  DesignPoint point = base_point();
  point.locality.m0 = 1e-7;
  point.cache_levels.back().capacity = 1ull << 62;
  const EvaluationResult r = evaluate(point);
  CHECK(*r.cpi == doctest::Approx(point.core.base_cpi).epsilon(1e-9));
  CHECK(*r.throughput ==
        doctest::Approx(point.threads / point.core.base_cpi).epsilon(1e-9));
  CHECK(r.utilization < 1e-6);
}

TEST_CASE("doubling threads doubles utilization exactly") {
  DesignPoint point = base_point();
  const double rho = evaluate(point).utilization;
  point.threads *= 2;
  CHECK(evaluate(point).utilization == 2.0 * rho);
}

TEST_CASE("halving bandwidth and quadrupling capacity keeps rho, term by term") {
  DesignPoint point = base_point();
  const EvaluationResult before = evaluate(point);
  point.bus.cycles_per_bus_clock *= 2;   // B/2
  point.cache_levels.back().capacity *= 4; // 4C
  const EvaluationResult after = evaluate(point);

  CHECK(testsupport::approx_rel(after.utilization, before.utilization, 1e-12));
  CHECK(after.miss_ratio == doctest::Approx(before.miss_ratio / 2).epsilon(1e-12));
  CHECK(after.service_time == 2.0 * before.service_time);
  // the M/D/1 wait scales with the service time at fixed rho
  CHECK(testsupport::approx_rel(*after.queuing_wait, 2.0 * *before.queuing_wait,
                                1e-12));
  // the leading-edge term is untouched
  CHECK(testsupport::approx_rel(
      *after.miss_penalty - *before.miss_penalty,
      (*after.queuing_wait - *before.queuing_wait) +
          (after.service_time - before.service_time),
      1e-12));
}

TEST_CASE("evaluate is deterministic") {
  const DesignPoint point = base_point();
  CHECK(evaluate(point) == evaluate(point));
}

TEST_CASE("saturation is flagged, not thrown") {
  DesignPoint point = base_point();
  point.core.accesses_per_cycle_per_thread = 1.0;
  point.threads = 64; // rho = 64 * 1.0 * 0.02 * 32 = 40.96
  const EvaluationResult r = evaluate(point);
  CHECK(r.flags.bus_saturated);
  CHECK(r.utilization > 1.0);
  CHECK(!r.queuing_wait);
  CHECK(!r.cpi);
  CHECK(!r.throughput);
}

TEST_CASE("throughput falls as the miss ratio grows") {
  DesignPoint point = base_point();
  double last = *evaluate(point).throughput;
  for (double m0 : {0.05, 0.06, 0.08}) {
    point.locality.m0 = m0;
    const auto r = evaluate(point);
    REQUIRE(r.throughput.has_value());
    CHECK(*r.throughput < last);
    last = *r.throughput;
  }
}

TEST_CASE("constraint flags: thermal, cube, area") {
  DesignPoint point = base_point();
  CHECK(evaluate(point, {.t_max_c = 64.0}).flags.thermal_infeasible);
  CHECK(!evaluate(point, {.t_max_c = 65.0}).flags.thermal_infeasible);
  CHECK(evaluate(point, {.area_max_mm2 = 99.0}).flags.area_exceeded);
  CHECK(!evaluate(point, {.area_max_mm2 = 100.0}).flags.area_exceeded);

  point.geometry.x_mm = 0.05; // 2 layers x 50 um = 0.1 mm high
  point.geometry.tsv_fraction = 0.0;
  CHECK(evaluate(point).flags.cube_violated);
}

TEST_CASE("sweep enumerates the cross product in lexicographic order") {
  SweepSpec spec;
  spec.base = base_point();
  spec.parameters = {
      {"threads", {1, 2}},
      {"capacity", {1 << 20, 2 << 20, 4 << 20}},
  };
  CHECK(sweep_size(spec) == 6);
  const auto rows = sweep(spec);
  REQUIRE(rows.size() == 6);
  // "capacity" sorts before "threads", so capacity varies slowest
  const std::vector<std::vector<double>> expected = {
      {1 << 20, 1}, {1 << 20, 2}, {2 << 20, 1},
      {2 << 20, 2}, {4 << 20, 1}, {4 << 20, 2},
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].index == i);
    CHECK(rows[i].values == expected[i]);
  }
}

TEST_CASE("a sweep with single-value lists is the base point") {
  SweepSpec spec;
  spec.base = base_point();
  spec.parameters = {{"threads", {4}}};
  const auto rows = sweep(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].point == spec.base);
  CHECK(rows[0].result == evaluate(spec.base));
}

TEST_CASE("sweeping capacity shows the miss-rate power law") {
  SweepSpec spec;
  spec.base = base_point();
  spec.parameters = {{"capacity", {1 << 20, 4 << 20}}};
  const auto rows = sweep(spec);
  CHECK(rows[1].result.miss_ratio == rows[0].result.miss_ratio / 2.0);
}

TEST_CASE("sweep refuses oversized cross products with the count") {
  SweepSpec spec;
  spec.base = base_point();
  spec.parameters = {{"threads", {1, 2, 3}}, {"capacity", {1 << 20, 2 << 20}}};
  spec.max_points = 5;
  CHECK_THROWS_WITH_AS(sweep(spec), doctest::Contains("6"), ConfigError);
}

TEST_CASE("sweep rejects unknown parameters and empty lists") {
  SweepSpec spec;
  spec.base = base_point();
  spec.parameters = {{"frequency", {1.0}}};
  CHECK_THROWS_AS(sweep(spec), ConfigError);
  spec.parameters = {{"threads", {}}};
  CHECK_THROWS_AS(sweep(spec), ConfigError);
}

TEST_CASE("parallel sweep output is identical to sequential") {
  SweepSpec spec;
  spec.base = base_point();
  spec.parameters = {
      {"threads", {1, 2, 4, 8}},
      {"capacity", {1 << 20, 2 << 20, 4 << 20}},
      {"leading_edge", {0, 50, 100}},
  };
  const auto sequential = sweep(spec, 1);
  const auto parallel = sweep(spec, 8);
  CHECK(sequential == parallel);
}

TEST_CASE("sweeping the layer count resizes the thermal stack") {
  SweepSpec spec;
  spec.base = base_point();
  spec.parameters = {{"layers", {1, 2, 4}}};
  const auto rows = sweep(spec);
  CHECK(rows[0].point.thermal.layer_count() == 1);
  CHECK(rows[0].result.total_power_w == 50.0);
  CHECK(rows[2].point.thermal.layer_count() == 4);
  CHECK(rows[2].result.total_power_w == 200.0);
}

namespace {

SweepRow synthetic_row(std::uint64_t index, double throughput, double power,
                       double temp) {
  SweepRow row;
  row.index = index;
  row.result.throughput = throughput;
  row.result.cpi = 1.0;
  row.result.total_power_w = power;
  row.result.max_temp_c = temp;
  return row;
}

} // namespace

TEST_CASE("pareto keeps exactly the non-dominated points") {
  const std::vector<Objective> objectives = {
      {"throughput", Direction::Maximize}, {"total_power", Direction::Minimize}};

  SUBCASE("single point survives") {
    const std::vector<SweepRow> rows = {synthetic_row(0, 1.0, 10.0, 50.0)};
    CHECK(pareto(rows, objectives).size() == 1);
  }

  SUBCASE("a dominating point removes the dominated one") {
    const std::vector<SweepRow> rows = {synthetic_row(0, 2.0, 5.0, 50.0),
                                        synthetic_row(1, 1.0, 10.0, 50.0)};
    const auto frontier = pareto(rows, objectives);
    REQUIRE(frontier.size() == 1);
    CHECK(frontier[0].index == 0);
  }

  SUBCASE("mutually non-dominated equals are all kept in input order") {
    const std::vector<SweepRow> rows = {synthetic_row(0, 1.0, 10.0, 50.0),
                                        synthetic_row(1, 1.0, 10.0, 50.0),
                                        synthetic_row(2, 2.0, 20.0, 50.0)};
    const auto frontier = pareto(rows, objectives);
    REQUIRE(frontier.size() == 3);
    CHECK(frontier[0].index == 0);
    CHECK(frontier[1].index == 1);
    CHECK(frontier[2].index == 2);
  }

  SUBCASE("flagged points are excluded before filtering") {
    std::vector<SweepRow> rows = {synthetic_row(0, 2.0, 5.0, 50.0),
                                  synthetic_row(1, 1.0, 10.0, 50.0)};
    rows[0].result.flags.thermal_infeasible = true;
    const auto frontier = pareto(rows, objectives);
    REQUIRE(frontier.size() == 1);
    CHECK(frontier[0].index == 1);
  }
}

TEST_CASE("pareto matches a brute-force oracle on random sets") {
  const std::vector<Objective> objectives = {
      {"throughput", Direction::Maximize},
      {"total_power", Direction::Minimize},
      {"max_temp", Direction::Minimize}};
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SweepRow> rows;
    for (std::uint64_t i = 0; i < 100; ++i)
      rows.push_back(synthetic_row(i, dist(rng), dist(rng), dist(rng)));

    // brute-force double loop, written against the raw fields
    std::vector<std::uint64_t> expected;
    for (const auto& a : rows) {
      bool dominated = false;
      for (const auto& b : rows) {
        const bool weakly_better = *b.result.throughput >= *a.result.throughput &&
                                   b.result.total_power_w <= a.result.total_power_w &&
                                   b.result.max_temp_c <= a.result.max_temp_c;
        const bool strictly = *b.result.throughput > *a.result.throughput ||
                              b.result.total_power_w < a.result.total_power_w ||
                              b.result.max_temp_c < a.result.max_temp_c;
        if (weakly_better && strictly) {
          dominated = true;
          break;
        }
      }
      if (!dominated) expected.push_back(a.index);
    }

    const auto frontier = pareto(rows, objectives);
    REQUIRE(frontier.size() == expected.size());
    for (std::size_t i = 0; i < frontier.size(); ++i)
      CHECK(frontier[i].index == expected[i]);

    // the frontier is its own frontier
    CHECK(pareto(frontier, objectives) == frontier);
  }
}

TEST_CASE("pareto rejects unknown metrics") {
  const std::vector<SweepRow> rows = {synthetic_row(0, 1.0, 10.0, 50.0)};
  CHECK_THROWS_AS(pareto(rows, {{"speed", Direction::Maximize}}), ConfigError);
  CHECK_THROWS_AS(pareto(rows, {}), ConfigError);
}

TEST_CASE("composition comparison: identical assignments give zero delta") {
  DesignPoint point = base_point();
  point.geometry.layers = 2;
  // uniform maps, core layer carrying exactly half the power
  point.thermal.layers = {{TileGrid(2, 2, 2.5), 0.1}, {TileGrid(2, 2, 2.5), 0.1}};
  const auto cmp = compare_compositions(point);
  CHECK(cmp.max_temp_delta_c == 0.0);
  CHECK(cmp.overlap_delta == 0.0);
  CHECK(cmp.homogeneous == cmp.functional);
}

TEST_CASE("composition comparison: replication aligns hotspots") {
  DesignPoint point = base_point();
  point.geometry.layers = 2;
  TileGrid core(2, 2, 0.0);
  core.at(0, 0) = 8.0; // single hotspot
  TileGrid cache(2, 2, 0.0);
  cache.at(1, 1) = 8.0; // disjoint tile
  point.thermal.layers = {{core, 0.1}, {cache, 0.1}};
  const auto cmp = compare_compositions(point);
  // aligned duplicates reach G, the disjoint split G/2
  CHECK(cmp.homogeneous_overlap == 4.0);
  CHECK(cmp.functional_overlap == 2.0);
  CHECK(cmp.homogeneous_overlap > cmp.functional_overlap);
}

TEST_CASE("composition comparison: functional split runs cooler") {
  DesignPoint point = base_point();
  point.geometry.layers = 2;
  TileGrid core(2, 2, 0.0);
  core.at(0, 0) = 80.0;
  point.thermal.layers = {{core, 0.05}, {TileGrid(2, 2, 5.0), 0.05}};
  const auto cmp = compare_compositions(point);
  CHECK(cmp.homogeneous.max_temp_c > cmp.functional.max_temp_c);
  CHECK(cmp.max_temp_delta_c > 0.0);
}

TEST_CASE("composition comparison preconditions") {
  DesignPoint point = base_point();
  point.geometry.layers = 1;
  point.thermal.layers.resize(1);
  point.assignment.cache_levels = {0};
  CHECK_THROWS_AS(compare_compositions(point), ConfigError);

  DesignPoint shared = base_point();
  shared.assignment.cache_levels = {0}; // cache on the core layer
  CHECK_THROWS_AS(compare_compositions(shared), ConfigError);
}

TEST_CASE("advise: capacity for thread doubling") {
  const Advisory a =
      advise(base_point(), AdviceQuestion::CapacityForThreadDoubling);
  CHECK(*a.value == 8.0);
}

TEST_CASE("advise: bandwidth headroom is linear in threads") {
  DesignPoint point = base_point();
  point.threads = 1;
  point.core.accesses_per_cycle_per_thread = 0.5;
  point.locality.m0 = 0.0625;
  point.bus = {.width = 16, .cycles_per_bus_clock = 2, .leading_edge = 0.0};
  // rho = 1 * 0.5 * 0.03125 * 16 = 0.25
  CHECK(evaluate(point).utilization == 0.25);
  const Advisory a = advise(point, AdviceQuestion::BandwidthHeadroom, {},
                            {.rho_max = 0.5});
  CHECK(*a.value == 2.0);
}

TEST_CASE("advise: growth direction at the breakeven point") {
  DesignPoint point = base_point();
  point.geometry.x_mm = 10.0;
  point.geometry.layers = 5;
  const LayerThermal top = point.thermal.layers.back();
  point.thermal.layers.resize(5, top);
  point.assignment.cache_levels = {1};
  const Advisory a =
      advise(point, AdviceQuestion::GrowthDirection, 1.0);
  CHECK(*a.growth == GrowthAdvice::Indifferent);
  CHECK_THROWS_AS(advise(point, AdviceQuestion::GrowthDirection, {}),
                  ConfigError);
}
