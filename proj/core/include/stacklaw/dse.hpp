#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stacklaw/bus_bandwidth.hpp"
#include "stacklaw/cache_locality.hpp"
#include "stacklaw/stack_geometry.hpp"
#include "stacklaw/thermal_stack.hpp"

namespace stacklaw {

/// Per-thread core behavior feeding the CPI composition.
struct CoreModel {
  double base_cpi = 1.0;       ///< cycles/instruction with a perfect last level
  double refs_per_instr = 1.0; ///< references per instruction
  double accesses_per_cycle_per_thread = 1.0;

  void validate() const;
  bool operator==(const CoreModel&) const = default;
};

/// Which stack layer holds each component. cache_levels[i] is the layer of
/// cache level i.
struct LayerAssignment {
  std::uint32_t cores = 0;
  std::vector<std::uint32_t> cache_levels;

  bool operator==(const LayerAssignment&) const = default;
};

/// TSV electrical parameters plus the rail they deliver.
struct PowerDelivery {
  TsvSpec tsv;
  double supply_voltage_v = 1.0;

  void validate() const;
  bool operator==(const PowerDelivery&) const = default;
};

/// A complete candidate system. The last cache level is the last on-stack
/// level; only its misses cross the off-stack bus.
struct DesignPoint {
  std::uint32_t threads = 1;
  CoreModel core;
  std::vector<CacheLevelSpec> cache_levels; ///< ordered, innermost first
  LocalityModel locality;                   ///< for the last level
  BusSpec bus;
  StackGeometry geometry;
  std::optional<PowerDelivery> power;
  ThermalStack thermal;
  LayerAssignment assignment;

  const CacheLevelSpec& last_level() const { return cache_levels.back(); }

  void validate() const;
  bool operator==(const DesignPoint&) const = default;
};

/// Feasibility limits checked during evaluation. Absent limits never fail.
struct Constraints {
  std::optional<double> t_max_c;
  std::optional<double> rho_max;
  std::optional<double> area_max_mm2; ///< footprint bound, x^2 <= area_max

  bool operator==(const Constraints&) const = default;
};

struct FeasibilityFlags {
  bool bus_saturated = false;
  bool thermal_infeasible = false;
  bool cube_violated = false;
  bool tsv_infeasible = false;
  bool area_exceeded = false;

  bool any() const {
    return bus_saturated || thermal_infeasible || cube_violated ||
           tsv_infeasible || area_exceeded;
  }
  bool operator==(const FeasibilityFlags&) const = default;
};

/// Everything evaluate() derives from a DesignPoint. Queue-dependent
/// metrics are absent when the bus is saturated; throughput is positive
/// iff the bus is stable.
struct EvaluationResult {
  double miss_ratio = 0.0;
  double offered_load = 0.0;  ///< misses per cycle
  double service_time = 0.0;  ///< trailing edge, cycles
  double utilization = 0.0;   ///< rho
  std::optional<double> queuing_wait; ///< cycles
  std::optional<double> miss_penalty; ///< cycles
  std::optional<double> cpi;
  std::optional<double> throughput;   ///< threads / CPI, fixed-frequency units
  std::vector<double> layer_max_temp_c;
  double max_temp_c = 0.0;
  double total_power_w = 0.0;
  double power_density_w_mm2 = 0.0;
  double usable_area_mm2 = 0.0;
  double tsv_fraction = 0.0; ///< budgeted when power delivery is given
  std::optional<double> hotspot_overlap;
  FeasibilityFlags flags;

  /// Queuing discipline behind queuing_wait. Fixed for now; the field keeps
  /// the data contract stable if alternates (e.g. M/M/1) are added.
  static constexpr const char* queue_model = "M/D/1";

  bool operator==(const EvaluationResult&) const = default;
};

EvaluationResult evaluate(const DesignPoint& point,
                          const Constraints& constraints = {});

/// One swept parameter: a config-schema name and the values it takes.
struct SweepParameter {
  std::string name;
  std::vector<double> values;

  bool operator==(const SweepParameter&) const = default;
};

struct SweepSpec {
  DesignPoint base;
  std::vector<SweepParameter> parameters; ///< stored sorted by name
  Constraints constraints;
  std::uint64_t max_points = 1'000'000;

  bool operator==(const SweepSpec&) const = default;
};

/// Names acceptable in SweepParameter::name.
std::span<const std::string_view> sweepable_parameters();

/// Cross-product size; what sweep() will enumerate.
std::uint64_t sweep_size(const SweepSpec& spec);

struct SweepRow {
  std::uint64_t index = 0;           ///< enumeration index
  std::vector<double> values;        ///< one per parameter, sorted-name order
  DesignPoint point;
  EvaluationResult result;

  bool operator==(const SweepRow&) const = default;
};

/// Evaluate the full cross product. Parameters enumerate in lexicographic
/// name order, last name fastest; output is ordered by enumeration index
/// regardless of the worker count. Refuses (ConfigError) cross products
/// above spec.max_points.
std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned jobs = 1);

enum class Direction { Minimize, Maximize };

struct Objective {
  std::string metric;
  Direction direction = Direction::Minimize;

  bool operator==(const Objective&) const = default;
};

/// Scalar metric lookup for Pareto filtering and reports. Throws
/// ConfigError for unknown names; absent (saturation-voided) metrics come
/// back empty.
std::optional<double> metric_value(const EvaluationResult& result,
                                   std::string_view name);

std::span<const std::string_view> metric_names();

/// Non-dominated subset under the given objectives. Flagged-infeasible rows
/// are excluded first; survivors keep their input order, and mutually
/// non-dominated equals are all retained.
std::vector<SweepRow> pareto(const std::vector<SweepRow>& rows,
                             const std::vector<Objective>& objectives);

/// Homogeneous-vs-functional composition of the same components.
struct CompositionComparison {
  EvaluationResult homogeneous; ///< every layer a full-system replica
  EvaluationResult functional;  ///< cores on their layer, cache on the rest
  double homogeneous_overlap = 0.0;
  double functional_overlap = 0.0;
  double max_temp_delta_c = 0.0; ///< homogeneous - functional
  double overlap_delta = 0.0;    ///< homogeneous - functional
};

/// Rebuild the point's stack two ways at equal total power and compare.
/// The functional stack is the point's own (cores and cache on the layers
/// the assignment names). The homogeneous stack replicates the core
/// layer's map shape on every layer, so per-replica hotspots align
/// vertically. Requires >= 2 layers and disjoint core/cache layers.
CompositionComparison compare_compositions(const DesignPoint& point,
                                           const Constraints& constraints = {});

enum class AdviceQuestion {
  GrowthDirection,          ///< add a layer or grow the footprint?
  CapacityForThreadDoubling,///< total capacity multiplier for 2x threads
  BandwidthHeadroom         ///< thread multiplier before rho_max
};

struct Advisory {
  AdviceQuestion question;
  std::optional<GrowthAdvice> growth;
  std::optional<double> value; ///< capacity factor or thread multiplier
  std::string text;
};

/// One-question advisory over an evaluated point. GrowthDirection needs the
/// caller's footprint increment delta_mm and answers in the approximate
/// (n vs x/2delta) form unless mode says otherwise.
Advisory advise(const DesignPoint& point, AdviceQuestion question,
                std::optional<double> delta_mm = {},
                const Constraints& constraints = {},
                GrowthMode mode = GrowthMode::Approximate);

} // namespace stacklaw
