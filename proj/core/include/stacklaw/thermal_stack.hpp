#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stacklaw/errors.hpp"

namespace stacklaw {

/// Row-major grid of per-tile values (powers in W, temperatures in degC).
struct TileGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  TileGrid() = default;
  TileGrid(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  std::size_t tiles() const { return rows * cols; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double total() const;

  bool operator==(const TileGrid&) const = default;
};

/// One die in the stack: its tile power map and the thermal resistance of
/// the interface between it and the next layer toward the heat path exit
/// (BEOL included). Whole-layer K/W; normalized per tile internally.
struct LayerThermal {
  TileGrid power_w;
  double r_above = 0.0; ///< K/W, whole layer

  void validate() const;
  bool operator==(const LayerThermal&) const = default;
};

/// Ordered stack, index 0 nearest the heatsink. Heat flows only vertically
/// per tile column; resistances accumulate along the removal path.
struct ThermalStack {
  std::vector<LayerThermal> layers;
  double r_sink = 0.0;    ///< sink + spreader, K/W
  double ambient_c = 25.0;

  std::size_t layer_count() const { return layers.size(); }
  double total_power() const;

  void validate() const;
  bool operator==(const ThermalStack&) const = default;
};

/// Per-layer, per-tile temperatures under the 1D series-resistance model:
/// the heat crossing the interface below layer i in a column is the sum of
/// that column's powers at layers >= i. No lateral spreading, so hotspots
/// are over- rather than under-predicted. Whole-layer resistances scale by
/// the tile count so that a uniform map reproduces the aggregate model.
std::vector<TileGrid> layer_temperatures(const ThermalStack& stack);

/// Heat entering the sink per tile column; equals the column power sums.
TileGrid sink_heat(const ThermalStack& stack);

/// max / mean of column-summed power over tiles. 1 iff the stacked power
/// is uniform; G (the tile count) when everything lands on one column.
double hotspot_overlap_index(const ThermalStack& stack);

struct ThermalVerdict {
  bool feasible = true;       ///< max temperature <= t_max (inclusive)
  std::size_t worst_layer = 0;
  std::size_t worst_tile = 0; ///< row-major index
  double worst_temp_c = 0.0;

  bool operator==(const ThermalVerdict&) const = default;
};

/// Hottest tile in the stack vs a limit. Ties resolve to the lowest layer
/// index, then row-major tile order.
ThermalVerdict thermal_feasible(const ThermalStack& stack, double t_max_c);

/// Total stack power over the shared footprint, W/mm^2.
double stacked_power_density(std::span<const LayerThermal> layers,
                             double footprint_mm2);

} // namespace stacklaw
