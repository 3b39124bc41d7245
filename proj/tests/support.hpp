#pragma once

// Builders and RNG helpers shared by the unit and acceptance suites.

#include <random>

#include "stacklaw/dse.hpp"

namespace testsupport {

using namespace stacklaw;

/// Two stacked layers, 50 W each behind a 0.2 K/W sink at 40 degC ambient:
/// layer temperatures 60 and 65 degC.
inline ThermalStack two_layer_stack() {
  ThermalStack stack;
  stack.r_sink = 0.2;
  stack.ambient_c = 40.0;
  stack.layers.push_back({TileGrid(1, 1, 50.0), 0.1});
  stack.layers.push_back({TileGrid(1, 1, 50.0), 0.1});
  return stack;
}

/// A complete valid point: 4 MiB last level against a 1 MiB / 4% anchor
/// (miss 2%), 128 B lines over a 16 B x 4-cycle bus (TE 32), four threads
/// at 1/8 access per cycle (rho 0.32), on the two-layer stack above.
inline DesignPoint base_point() {
  DesignPoint point;
  point.threads = 4;
  point.core = {.base_cpi = 1.0,
                .refs_per_instr = 1.0,
                .accesses_per_cycle_per_thread = 0.125};
  point.cache_levels = {{.capacity = 4u << 20, .line_size = 128, .associativity = 8}};
  point.locality = {.c0 = 1u << 20, .m0 = 0.04, .alpha = 0.5};
  point.bus = {.width = 16, .cycles_per_bus_clock = 4, .leading_edge = 100.0};
  point.geometry = {.x_mm = 10.0, .layers = 2, .thickness_um = 50.0,
                    .tsv_fraction = 0.0};
  point.power = PowerDelivery{
      .tsv = {.diameter_um = 5.0, .pitch_um = 10.0, .current_limit_a = 0.1,
              .cell_area_um2 = 100.0},
      .supply_voltage_v = 1.0};
  point.thermal = two_layer_stack();
  point.assignment = {.cores = 0, .cache_levels = {1}};
  return point;
}

inline ThermalStack random_stack(std::mt19937_64& rng, std::size_t max_layers = 8,
                                 std::size_t max_dim = 16) {
  std::uniform_int_distribution<std::size_t> layer_count(1, max_layers);
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_real_distribution<double> power(0.0, 5.0);
  std::uniform_real_distribution<double> resistance(0.01, 0.5);
  std::uniform_real_distribution<double> ambient(20.0, 50.0);

  ThermalStack stack;
  stack.r_sink = resistance(rng);
  stack.ambient_c = ambient(rng);
  const std::size_t rows = dim(rng);
  const std::size_t cols = dim(rng);
  const std::size_t layers = layer_count(rng);
  for (std::size_t i = 0; i < layers; ++i) {
    LayerThermal layer{TileGrid(rows, cols), resistance(rng)};
    for (double& p : layer.power_w.values) p = power(rng);
    stack.layers.push_back(std::move(layer));
  }
  return stack;
}

inline bool approx_rel(double actual, double expected, double tol) {
  const double diff = std::abs(actual - expected);
  const double scale = std::max(std::abs(actual), std::abs(expected));
  return diff <= tol * std::max(scale, 1e-300);
}

} // namespace testsupport
