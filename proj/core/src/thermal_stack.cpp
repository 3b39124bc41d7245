#include "stacklaw/thermal_stack.hpp"

#include <algorithm>

namespace stacklaw {

double TileGrid::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

void LayerThermal::validate() const {
  if (power_w.rows < 1 || power_w.cols < 1)
    throw DomainError("LayerThermal.power_w must be at least 1x1");
  if (power_w.values.size() != power_w.tiles())
    throw DomainError("LayerThermal.power_w has inconsistent dimensions");
  for (double p : power_w.values)
    if (!(p >= 0.0))
      throw DomainError("LayerThermal.power_w entries must be >= 0");
  if (!(r_above > 0.0))
    throw DomainError("LayerThermal.r_above must be positive");
}

void ThermalStack::validate() const {
  if (layers.empty())
    throw DomainError("ThermalStack needs at least one layer");
  if (!(r_sink > 0.0))
    throw DomainError("ThermalStack.r_sink must be positive");
  for (const auto& layer : layers) layer.validate();
  const auto& first = layers.front().power_w;
  for (const auto& layer : layers)
    if (layer.power_w.rows != first.rows || layer.power_w.cols != first.cols)
      throw ConfigError("ThermalStack: all layers must share grid dimensions");
}

double ThermalStack::total_power() const {
  double sum = 0.0;
  for (const auto& layer : layers) sum += layer.power_w.total();
  return sum;
}

std::vector<TileGrid> layer_temperatures(const ThermalStack& stack) {
  stack.validate();
  const std::size_t n = stack.layers.size();
  const std::size_t rows = stack.layers.front().power_w.rows;
  const std::size_t cols = stack.layers.front().power_w.cols;
  const std::size_t tiles = rows * cols;
  // Whole-layer K/W over a 1/G slice of the area: per-tile columns see G
  // times the layer resistance, which reproduces the aggregate model for
  // uniform maps.
  const double scale = static_cast<double>(tiles);

  std::vector<TileGrid> temps(n, TileGrid(rows, cols));
  std::vector<double> heat(n); // heat crossing the interface below each layer
  for (std::size_t t = 0; t < tiles; ++t) {
    double q = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      q += stack.layers[i].power_w.values[t];
      heat[i] = q;
    }
    double temp = stack.ambient_c + stack.r_sink * scale * heat[0];
    temps[0].values[t] = temp;
    for (std::size_t i = 1; i < n; ++i) {
      temp += stack.layers[i].r_above * scale * heat[i];
      temps[i].values[t] = temp;
    }
  }
  return temps;
}

TileGrid sink_heat(const ThermalStack& stack) {
  stack.validate();
  TileGrid heat(stack.layers.front().power_w.rows,
                stack.layers.front().power_w.cols);
  for (const auto& layer : stack.layers)
    for (std::size_t t = 0; t < heat.values.size(); ++t)
      heat.values[t] += layer.power_w.values[t];
  return heat;
}

double hotspot_overlap_index(const ThermalStack& stack) {
  const TileGrid columns = sink_heat(stack);
  const double total = columns.total();
  if (!(total > 0.0))
    throw DomainError("hotspot_overlap_index: undefined for zero total power");
  const double max =
      *std::max_element(columns.values.begin(), columns.values.end());
  const double mean = total / static_cast<double>(columns.tiles());
  return max / mean;
}

ThermalVerdict thermal_feasible(const ThermalStack& stack, double t_max_c) {
  const auto temps = layer_temperatures(stack);
  ThermalVerdict verdict{.feasible = true,
                         .worst_layer = 0,
                         .worst_tile = 0,
                         .worst_temp_c = temps[0].values[0]};
  for (std::size_t i = 0; i < temps.size(); ++i)
    for (std::size_t t = 0; t < temps[i].values.size(); ++t)
      if (temps[i].values[t] > verdict.worst_temp_c) {
        verdict.worst_temp_c = temps[i].values[t];
        verdict.worst_layer = i;
        verdict.worst_tile = t;
      }
  verdict.feasible = verdict.worst_temp_c <= t_max_c;
  return verdict;
}

double stacked_power_density(std::span<const LayerThermal> layers,
                             double footprint_mm2) {
  if (!(footprint_mm2 > 0.0))
    throw DomainError("stacked_power_density: footprint must be positive");
  double total = 0.0;
  for (const auto& layer : layers) total += layer.power_w.total();
  return total / footprint_mm2;
}

} // namespace stacklaw
