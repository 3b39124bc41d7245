#pragma once

#include <cstdint>
#include <numbers>

#include "stacklaw/errors.hpp"

namespace stacklaw {

/// Default ceiling on the layer-area fraction spent on TSVs. Treated as a
/// configurable threshold; feasibility is boundary-inclusive.
inline constexpr double kDefaultTsvFractionLimit = 1.0 / std::numbers::e;

/// Physical shape of a stack: square layers of edge x, n of them, each t
/// thick, with a fraction of each layer's area given over to TSVs.
struct StackGeometry {
  double x_mm = 0.0;          ///< layer edge length
  std::uint32_t layers = 1;   ///< n
  double thickness_um = 0.0;  ///< per-layer thickness t
  double tsv_fraction = 0.0;  ///< in [0, 1]

  double footprint_mm2() const { return x_mm * x_mm; }

  void validate() const;
  bool operator==(const StackGeometry&) const = default;
};

struct TsvSpec {
  double diameter_um = 0.0;
  double pitch_um = 0.0;       ///< >= diameter
  double current_limit_a = 0.0; ///< per TSV
  double cell_area_um2 = 0.0;  ///< layer area consumed per TSV, >= diameter^2

  void validate() const;
  bool operator==(const TsvSpec&) const = default;
};

enum class GrowthAdvice { AddLayer, GrowFootprint, Indifferent };

enum class GrowthMode {
  Approximate, ///< n vs x/(2*delta); drops the n*delta^2 term
  Exact        ///< x^2 vs n*(2*delta*x + delta^2)
};

const char* to_string(GrowthAdvice advice);

/// Which direction yields more usable circuit area: another layer of x^2,
/// or growing every layer's edge by delta.
GrowthAdvice growth_advice(double x_mm, std::uint32_t layers, double delta_mm,
                           GrowthMode mode = GrowthMode::Exact);

struct TsvBudget {
  double fraction = 0.0;       ///< of one layer's area
  std::uint64_t tsv_count = 0; ///< power-delivery TSVs required
  bool feasible = true;        ///< fraction <= limit (inclusive)

  bool operator==(const TsvBudget&) const = default;
};

/// Power-delivery TSV budget: count = ceil(P / (V * I_limit)) at worst-case
/// DC draw, no derating (fold derating into current_limit_a). Throws
/// GeometryError when the TSVs would not fit on the layer at all
/// (fraction > 1), which is stronger than mere infeasibility.
TsvBudget tsv_area_budget(double total_power_w, double supply_voltage_v,
                          const TsvSpec& tsv, double layer_area_mm2,
                          double fraction_limit = kDefaultTsvFractionLimit);

/// True while the stack is no taller than it is wide: n * t <= x.
bool cube_check(const StackGeometry& geom);

/// Vertical connections per mm^2 on a square grid of the given pitch.
double interconnect_density(double pitch_um);

/// Circuit area across all layers net of the TSV share: n * x^2 * (1 - f).
double usable_area(const StackGeometry& geom);

} // namespace stacklaw
