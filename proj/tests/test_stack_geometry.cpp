#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "stacklaw/stack_geometry.hpp"

using namespace stacklaw;

TEST_CASE("growth advice, approximate form") {
  CHECK(growth_advice(10.0, 4, 1.0, GrowthMode::Approximate) ==
        GrowthAdvice::AddLayer);
  CHECK(growth_advice(10.0, 5, 1.0, GrowthMode::Approximate) ==
        GrowthAdvice::Indifferent);
  CHECK(growth_advice(10.0, 6, 1.0, GrowthMode::Approximate) ==
        GrowthAdvice::GrowFootprint);
}

TEST_CASE("growth advice, exact form keeps the delta^2 term") {
  // 100 vs 5 * (20 + 1) = 105
  CHECK(growth_advice(10.0, 5, 1.0, GrowthMode::Exact) ==
        GrowthAdvice::GrowFootprint);
  CHECK(growth_advice(10.0, 4, 1.0, GrowthMode::Exact) == GrowthAdvice::AddLayer);
}

TEST_CASE("growth advice rejects degenerate stacks") {
  CHECK_THROWS_AS(growth_advice(0.0, 4, 1.0, GrowthMode::Exact), DomainError);
  CHECK_THROWS_AS(growth_advice(10.0, 0, 1.0, GrowthMode::Exact), DomainError);
  CHECK_THROWS_AS(growth_advice(10.0, 4, 0.0, GrowthMode::Exact), DomainError);
}

TEST_CASE("approximate and exact growth advice agree away from the boundary") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> x_dist(0.5, 50.0);
  std::uniform_real_distribution<double> d_dist(0.001, 5.0);
  std::uniform_int_distribution<std::uint32_t> n_dist(1, 64);
  int disagreements = 0;
  for (int i = 0; i < 5000; ++i) {
    const double x = x_dist(rng), d = d_dist(rng);
    const std::uint32_t n = n_dist(rng);
    const auto approx = growth_advice(x, n, d, GrowthMode::Approximate);
    const auto exact = growth_advice(x, n, d, GrowthMode::Exact);
    if (approx != exact) {
      ++disagreements;
      // the dropped term must be able to flip the sign
      CHECK(std::abs(x * x - 2.0 * n * d * x) <= n * d * d);
    }
  }
  CHECK(disagreements < 5000); // sanity: the modes mostly agree
}

TEST_CASE("growth advice symmetry between n and delta") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> x_dist(0.5, 50.0);
  std::uniform_real_distribution<double> d_dist(0.001, 5.0);
  std::uniform_int_distribution<std::uint32_t> n_dist(1, 64);
  for (int i = 0; i < 2000; ++i) {
    const double x = x_dist(rng), d = d_dist(rng);
    const std::uint32_t n = n_dist(rng);
    const bool add =
        growth_advice(x, n, d, GrowthMode::Approximate) == GrowthAdvice::AddLayer;
    CHECK(add == (d < x / (2.0 * n)));
  }
}

TEST_CASE("TSV budget covers worst-case DC draw") {
  const TsvSpec tsv{.diameter_um = 5.0, .pitch_um = 10.0,
                    .current_limit_a = 0.1, .cell_area_um2 = 100.0};
  const TsvBudget budget = tsv_area_budget(400.0, 1.0, tsv, 100.0);
  CHECK(budget.tsv_count == 4000);
  CHECK(budget.fraction == doctest::Approx(0.004).epsilon(1e-12));
  CHECK(budget.feasible);

  const TsvBudget idle = tsv_area_budget(0.0, 1.0, tsv, 100.0);
  CHECK(idle.tsv_count == 0);
  CHECK(idle.fraction == 0.0);
  CHECK(idle.feasible);
}

TEST_CASE("TSV budget feasibility boundary is 1/e inclusive") {
  const double inv_e = 1.0 / std::numbers::e;
  TsvSpec tsv{.diameter_um = 5.0, .pitch_um = 10.0, .current_limit_a = 0.1,
              .cell_area_um2 = inv_e * 1e6};
  // one TSV on a 1 mm^2 layer: fraction is exactly 1/e
  const TsvBudget at_limit = tsv_area_budget(0.05, 1.0, tsv, 1.0);
  CHECK(at_limit.tsv_count == 1);
  CHECK(at_limit.fraction == inv_e);
  CHECK(at_limit.feasible);

  tsv.cell_area_um2 = (inv_e + 1e-9) * 1e6;
  CHECK(!tsv_area_budget(0.05, 1.0, tsv, 1.0).feasible);
}

TEST_CASE("TSV budget distinguishes impossible from infeasible") {
  const TsvSpec tsv{.diameter_um = 5.0, .pitch_um = 10.0,
                    .current_limit_a = 0.1, .cell_area_um2 = 100.0};
  CHECK_THROWS_AS(tsv_area_budget(2e6, 1.0, tsv, 100.0), GeometryError);
  CHECK(!tsv_area_budget(5e4, 1.0, tsv, 100.0).feasible); // 1/e < 0.5 < 1
}

TEST_CASE("TSV budget fraction is monotone in its inputs") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> power(0.0, 500.0);
  std::uniform_real_distribution<double> volts(0.8, 1.2);
  std::uniform_real_distribution<double> amps(0.05, 0.2);
  const TsvSpec tsv{.diameter_um = 5.0, .pitch_um = 10.0,
                    .current_limit_a = 0.1, .cell_area_um2 = 100.0};
  for (int i = 0; i < 500; ++i) {
    double p1 = power(rng), p2 = power(rng);
    if (p1 > p2) std::swap(p1, p2);
    const double v = volts(rng);
    CHECK(tsv_area_budget(p1, v, tsv, 100.0).fraction <=
          tsv_area_budget(p2, v, tsv, 100.0).fraction);

    double v1 = volts(rng), v2 = volts(rng);
    if (v1 > v2) std::swap(v1, v2);
    const double p = power(rng);
    CHECK(tsv_area_budget(p, v1, tsv, 100.0).fraction >=
          tsv_area_budget(p, v2, tsv, 100.0).fraction);

    TsvSpec weak = tsv, strong = tsv;
    weak.current_limit_a = std::min(amps(rng), amps(rng));
    strong.current_limit_a = std::max(weak.current_limit_a, amps(rng));
    CHECK(tsv_area_budget(p, v, weak, 100.0).fraction >=
          tsv_area_budget(p, v, strong, 100.0).fraction);
  }
}

TEST_CASE("TsvSpec invariants") {
  CHECK_THROWS_AS(tsv_area_budget(1.0, 1.0,
                                  TsvSpec{.diameter_um = 10.0, .pitch_um = 5.0,
                                          .current_limit_a = 0.1,
                                          .cell_area_um2 = 100.0},
                                  100.0),
                  DomainError);
  CHECK_THROWS_AS(tsv_area_budget(1.0, 1.0,
                                  TsvSpec{.diameter_um = 10.0, .pitch_um = 20.0,
                                          .current_limit_a = 0.1,
                                          .cell_area_um2 = 50.0},
                                  100.0),
                  DomainError);
}

TEST_CASE("a stack should stop before it is higher than a cube") {
  CHECK(cube_check({.x_mm = 10.0, .layers = 4, .thickness_um = 50.0}));
  CHECK(!cube_check({.x_mm = 0.1, .layers = 4, .thickness_um = 50.0}));
  // boundary: exactly a cube is still acceptable
  CHECK(cube_check({.x_mm = 0.2, .layers = 4, .thickness_um = 50.0}));
}

TEST_CASE("interconnect density on a square grid") {
  CHECK(interconnect_density(50.0) == 400.0);
  CHECK(interconnect_density(1000.0) == 1.0);
  // 100,000 per cm^2 needs a pitch no coarser than ~31.6 um
  CHECK(interconnect_density(31.6) >= 1000.0);
  CHECK_THROWS_AS(interconnect_density(0.0), DomainError);
}

TEST_CASE("halving the pitch quadruples the density") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> pitch(1.0, 500.0);
  for (int i = 0; i < 200; ++i) {
    const double p = pitch(rng);
    CHECK(interconnect_density(p / 2.0) == 4.0 * interconnect_density(p));
  }
}

TEST_CASE("usable area nets out the TSV share") {
  CHECK(usable_area({.x_mm = 10.0, .layers = 4, .thickness_um = 50.0,
                     .tsv_fraction = 0.0}) == 400.0);
  CHECK(usable_area({.x_mm = 10.0, .layers = 4, .thickness_um = 50.0,
                     .tsv_fraction = 1.0}) == 0.0);
  CHECK(usable_area({.x_mm = 10.0, .layers = 4, .thickness_um = 50.0,
                     .tsv_fraction = 0.25}) == 300.0);
}

TEST_CASE("usable area monotonicity") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> x_dist(1.0, 30.0);
  std::uniform_real_distribution<double> f_dist(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> n_dist(1, 16);
  for (int i = 0; i < 200; ++i) {
    StackGeometry g{.x_mm = x_dist(rng), .layers = n_dist(rng),
                    .thickness_um = 50.0, .tsv_fraction = f_dist(rng)};
    StackGeometry taller = g;
    taller.layers = g.layers + 1;
    CHECK(usable_area(taller) >= usable_area(g));
    StackGeometry denser = g;
    denser.tsv_fraction = std::min(1.0, g.tsv_fraction + 0.1);
    CHECK(usable_area(denser) <= usable_area(g));
  }
}
