#include "stacklaw/stack_geometry.hpp"

#include <cmath>

namespace stacklaw {

void StackGeometry::validate() const {
  if (!(x_mm > 0.0))
    throw DomainError("StackGeometry.x_mm must be positive");
  if (layers < 1)
    throw DomainError("StackGeometry.layers must be >= 1");
  if (!(thickness_um > 0.0))
    throw DomainError("StackGeometry.thickness_um must be positive");
  if (!(tsv_fraction >= 0.0 && tsv_fraction <= 1.0))
    throw DomainError("StackGeometry.tsv_fraction must be in [0, 1]");
}

void TsvSpec::validate() const {
  if (!(diameter_um > 0.0))
    throw DomainError("TsvSpec.diameter_um must be positive");
  if (!(pitch_um >= diameter_um))
    throw DomainError("TsvSpec.pitch_um must be >= diameter_um");
  if (!(current_limit_a > 0.0))
    throw DomainError("TsvSpec.current_limit_a must be positive");
  if (!(cell_area_um2 >= diameter_um * diameter_um))
    throw DomainError("TsvSpec.cell_area_um2 must be >= diameter_um^2");
}

const char* to_string(GrowthAdvice advice) {
  switch (advice) {
    case GrowthAdvice::AddLayer: return "AddLayer";
    case GrowthAdvice::GrowFootprint: return "GrowFootprint";
    case GrowthAdvice::Indifferent: return "Indifferent";
  }
  return "?";
}

GrowthAdvice growth_advice(double x_mm, std::uint32_t layers, double delta_mm,
                           GrowthMode mode) {
  if (!(x_mm > 0.0))
    throw DomainError("growth_advice: x must be positive");
  if (layers < 1)
    throw DomainError("growth_advice: layer count must be >= 1");
  if (!(delta_mm > 0.0))
    throw DomainError("growth_advice: delta must be positive");

  const double n = static_cast<double>(layers);
  if (mode == GrowthMode::Approximate) {
    const double breakeven = x_mm / (2.0 * delta_mm);
    if (n < breakeven) return GrowthAdvice::AddLayer;
    if (n > breakeven) return GrowthAdvice::GrowFootprint;
    return GrowthAdvice::Indifferent;
  }
  const double layer_gain = x_mm * x_mm;
  const double footprint_gain =
      n * (2.0 * delta_mm * x_mm + delta_mm * delta_mm);
  if (layer_gain > footprint_gain) return GrowthAdvice::AddLayer;
  if (layer_gain < footprint_gain) return GrowthAdvice::GrowFootprint;
  return GrowthAdvice::Indifferent;
}

TsvBudget tsv_area_budget(double total_power_w, double supply_voltage_v,
                          const TsvSpec& tsv, double layer_area_mm2,
                          double fraction_limit) {
  tsv.validate();
  if (!(total_power_w >= 0.0))
    throw DomainError("tsv_area_budget: power must be >= 0");
  if (!(supply_voltage_v > 0.0))
    throw DomainError("tsv_area_budget: supply voltage must be positive");
  if (!(layer_area_mm2 > 0.0))
    throw DomainError("tsv_area_budget: layer area must be positive");
  if (!(fraction_limit > 0.0 && fraction_limit <= 1.0))
    throw DomainError("tsv_area_budget: fraction limit must be in (0, 1]");

  // Worst-case DC draw, one rail: I = P / V.
  const double count =
      std::ceil(total_power_w / (supply_voltage_v * tsv.current_limit_a));
  const double fraction = count * tsv.cell_area_um2 / (layer_area_mm2 * 1e6);
  if (fraction > 1.0)
    throw GeometryError("tsv_area_budget: required TSVs exceed the layer area");
  return TsvBudget{
      .fraction = fraction,
      .tsv_count = static_cast<std::uint64_t>(count),
      .feasible = fraction <= fraction_limit,
  };
}

bool cube_check(const StackGeometry& geom) {
  geom.validate();
  const double height_mm =
      static_cast<double>(geom.layers) * geom.thickness_um / 1000.0;
  return height_mm <= geom.x_mm;
}

double interconnect_density(double pitch_um) {
  if (!(pitch_um > 0.0))
    throw DomainError("interconnect_density: pitch must be positive");
  const double per_mm = 1000.0 / pitch_um;
  return per_mm * per_mm;
}

double usable_area(const StackGeometry& geom) {
  geom.validate();
  return static_cast<double>(geom.layers) * geom.x_mm * geom.x_mm *
         (1.0 - geom.tsv_fraction);
}

} // namespace stacklaw
