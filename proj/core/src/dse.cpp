#include "stacklaw/dse.hpp"

#include "stacklaw/scaling_laws.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <thread>

namespace stacklaw {

void CoreModel::validate() const {
  if (!(base_cpi > 0.0))
    throw DomainError("CoreModel.base_cpi must be positive");
  if (!(refs_per_instr >= 0.0))
    throw DomainError("CoreModel.refs_per_instr must be >= 0");
  if (!(accesses_per_cycle_per_thread > 0.0))
    throw DomainError("CoreModel.accesses_per_cycle_per_thread must be positive");
}

void PowerDelivery::validate() const {
  tsv.validate();
  if (!(supply_voltage_v > 0.0))
    throw DomainError("PowerDelivery.supply_voltage_v must be positive");
}

void DesignPoint::validate() const {
  if (threads < 1) throw DomainError("DesignPoint.threads must be >= 1");
  core.validate();
  if (cache_levels.empty())
    throw DomainError("DesignPoint needs at least one cache level");
  for (const auto& level : cache_levels) level.validate();
  locality.validate();
  bus.validate();
  geometry.validate();
  if (power) power->validate();
  thermal.validate();
  if (thermal.layer_count() != geometry.layers)
    throw ConfigError("DesignPoint: thermal layer count must equal geometry.n");
  if (assignment.cores >= geometry.layers)
    throw ConfigError("DesignPoint: layer_assignment.cores is out of range");
  if (assignment.cache_levels.size() != cache_levels.size())
    throw ConfigError(
        "DesignPoint: layer_assignment.cache_levels must name a layer per "
        "cache level");
  for (std::uint32_t idx : assignment.cache_levels)
    if (idx >= geometry.layers)
      throw ConfigError(
          "DesignPoint: layer_assignment.cache_levels entry is out of range");
}

namespace {

struct RawTsvBudget {
  double fraction;
  bool feasible;
};

// Same arithmetic as tsv_area_budget, but impossible fractions (> 1) come
// back flagged instead of thrown so sweeps can retain the point.
RawTsvBudget raw_tsv_budget(double total_power_w, const PowerDelivery& pd,
                            double layer_area_mm2) {
  const double count = std::ceil(
      total_power_w / (pd.supply_voltage_v * pd.tsv.current_limit_a));
  const double fraction =
      count * pd.tsv.cell_area_um2 / (layer_area_mm2 * 1e6);
  return {fraction, fraction <= kDefaultTsvFractionLimit};
}

} // namespace

EvaluationResult evaluate(const DesignPoint& point,
                          const Constraints& constraints) {
  point.validate();
  EvaluationResult r;

  const CacheLevelSpec& last = point.last_level();
  r.miss_ratio = miss_rate(static_cast<double>(last.capacity), point.locality);
  r.offered_load = offered_load(TrafficModel{
      .threads = point.threads,
      .accesses_per_cycle_per_thread = point.core.accesses_per_cycle_per_thread,
      .miss_ratio = r.miss_ratio,
  });
  r.service_time =
      static_cast<double>(trailing_edge(last.line_size, point.bus));
  const BusState bus = utilization(r.offered_load, r.service_time);
  r.utilization = bus.utilization;
  r.flags.bus_saturated = bus.saturated;
  if (!bus.saturated) {
    const double wait = queuing_delay(bus.utilization, bus.service_time);
    r.queuing_wait = wait;
    r.miss_penalty = miss_penalty(point.bus, last.line_size, wait);
    r.cpi = point.core.base_cpi +
            point.core.refs_per_instr * r.miss_ratio * *r.miss_penalty;
    r.throughput = static_cast<double>(point.threads) / *r.cpi;
  }

  const auto temps = layer_temperatures(point.thermal);
  r.layer_max_temp_c.reserve(temps.size());
  for (const auto& grid : temps)
    r.layer_max_temp_c.push_back(
        *std::max_element(grid.values.begin(), grid.values.end()));
  r.max_temp_c =
      *std::max_element(r.layer_max_temp_c.begin(), r.layer_max_temp_c.end());
  if (constraints.t_max_c)
    r.flags.thermal_infeasible = r.max_temp_c > *constraints.t_max_c;

  r.total_power_w = point.thermal.total_power();
  r.power_density_w_mm2 =
      stacked_power_density(point.thermal.layers, point.geometry.footprint_mm2());
  r.usable_area_mm2 = usable_area(point.geometry);
  r.flags.cube_violated = !cube_check(point.geometry);

  r.tsv_fraction = point.geometry.tsv_fraction;
  if (point.power) {
    const RawTsvBudget budget = raw_tsv_budget(r.total_power_w, *point.power,
                                               point.geometry.footprint_mm2());
    r.tsv_fraction = budget.fraction;
    r.flags.tsv_infeasible = !budget.feasible;
  } else {
    r.flags.tsv_infeasible =
        point.geometry.tsv_fraction > kDefaultTsvFractionLimit;
  }

  if (constraints.area_max_mm2)
    r.flags.area_exceeded =
        point.geometry.footprint_mm2() > *constraints.area_max_mm2;

  if (r.total_power_w > 0.0)
    r.hotspot_overlap = hotspot_overlap_index(point.thermal);
  return r;
}

namespace {

constexpr std::array<std::string_view, 11> kSweepNames = {
    "alpha",       "associativity",      "base_cpi",
    "bus_width",   "capacity",           "cycles_per_bus_clock",
    "layers",      "leading_edge",       "line_size",
    "threads",     "tsv_fraction",
};

std::uint64_t as_count(const std::string& param, double v,
                       std::uint64_t min_value) {
  if (!(v >= static_cast<double>(min_value)) || v != std::floor(v) ||
      v > 9.007199254740992e15)
    throw ConfigError("sweep." + param + ": values must be integers >= " +
                      std::to_string(min_value));
  return static_cast<std::uint64_t>(v);
}

std::uint32_t as_count32(const std::string& param, double v,
                         std::uint32_t min_value) {
  const std::uint64_t value = as_count(param, v, min_value);
  if (value > UINT32_MAX)
    throw ConfigError("sweep." + param + ": value is out of range");
  return static_cast<std::uint32_t>(value);
}

void apply_parameter(DesignPoint& point, const std::string& name, double v) {
  if (name == "alpha") {
    point.locality.alpha = v;
  } else if (name == "associativity") {
    point.cache_levels.back().associativity = as_count32(name, v, 1);
  } else if (name == "base_cpi") {
    point.core.base_cpi = v;
  } else if (name == "bus_width") {
    point.bus.width = as_count(name, v, 1);
  } else if (name == "capacity") {
    point.cache_levels.back().capacity = as_count(name, v, 1);
  } else if (name == "cycles_per_bus_clock") {
    point.bus.cycles_per_bus_clock = as_count32(name, v, 1);
  } else if (name == "layers") {
    const std::uint32_t n = as_count32(name, v, 1);
    point.geometry.layers = n;
    // Grow by replicating the top layer, shrink by truncation, and keep
    // component assignments inside the new stack.
    if (!point.thermal.layers.empty()) {
      while (point.thermal.layers.size() < n)
        point.thermal.layers.push_back(point.thermal.layers.back());
      point.thermal.layers.resize(n);
    }
    point.assignment.cores = std::min(point.assignment.cores, n - 1);
    for (auto& idx : point.assignment.cache_levels) idx = std::min(idx, n - 1);
  } else if (name == "leading_edge") {
    point.bus.leading_edge = v;
  } else if (name == "line_size") {
    point.cache_levels.back().line_size = as_count(name, v, 1);
  } else if (name == "threads") {
    point.threads = as_count32(name, v, 1);
  } else if (name == "tsv_fraction") {
    point.geometry.tsv_fraction = v;
  } else {
    throw ConfigError("sweep." + name + ": unknown sweep parameter");
  }
}

std::vector<SweepParameter> sorted_parameters(const SweepSpec& spec) {
  std::vector<SweepParameter> params = spec.parameters;
  std::sort(params.begin(), params.end(),
            [](const SweepParameter& a, const SweepParameter& b) {
              return a.name < b.name;
            });
  for (const auto& p : params) {
    if (std::find(kSweepNames.begin(), kSweepNames.end(), p.name) ==
        kSweepNames.end())
      throw ConfigError("sweep." + p.name + ": unknown sweep parameter");
    if (p.values.empty())
      throw ConfigError("sweep." + p.name + ": value list must be non-empty");
  }
  return params;
}

SweepRow make_row(const SweepSpec& spec,
                  const std::vector<SweepParameter>& params,
                  std::uint64_t index) {
  SweepRow row;
  row.index = index;
  row.point = spec.base;
  row.values.resize(params.size());
  std::uint64_t rest = index;
  for (std::size_t j = params.size(); j-- > 0;) {
    const auto radix = static_cast<std::uint64_t>(params[j].values.size());
    row.values[j] = params[j].values[rest % radix];
    rest /= radix;
  }
  for (std::size_t j = 0; j < params.size(); ++j)
    apply_parameter(row.point, params[j].name, row.values[j]);
  try {
    row.point.validate();
  } catch (const Error& e) {
    throw ConfigError("sweep: point " + std::to_string(index) +
                      " is invalid: " + e.what());
  }
  row.result = evaluate(row.point, spec.constraints);
  return row;
}

} // namespace

std::span<const std::string_view> sweepable_parameters() { return kSweepNames; }

std::uint64_t sweep_size(const SweepSpec& spec) {
  const auto params = sorted_parameters(spec);
  std::uint64_t total = 1;
  for (const auto& p : params) {
    const auto radix = static_cast<std::uint64_t>(p.values.size());
    if (total > UINT64_MAX / radix)
      throw ConfigError("sweep: cross product overflows");
    total *= radix;
  }
  return total;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned jobs) {
  const auto params = sorted_parameters(spec);
  const std::uint64_t total = sweep_size(spec);
  if (total > spec.max_points)
    throw ConfigError("sweep: cross product has " + std::to_string(total) +
                      " points, above the cap of " +
                      std::to_string(spec.max_points));

  std::vector<SweepRow> rows(total);
  if (jobs <= 1) {
    for (std::uint64_t i = 0; i < total; ++i)
      rows[i] = make_row(spec, params, i);
    return rows;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        rows[i] = make_row(spec, params, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = std::min<std::uint64_t>(jobs, total);
  pool.reserve(count);
  for (unsigned j = 0; j < count; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

namespace {

constexpr std::array<std::string_view, 14> kMetricNames = {
    "cpi",          "hotspot_overlap", "max_temp",     "miss_penalty",
    "miss_ratio",   "offered_load",    "power_density", "queuing_wait",
    "service_time", "throughput",      "total_power",  "tsv_fraction",
    "usable_area",  "utilization",
};

} // namespace

std::span<const std::string_view> metric_names() { return kMetricNames; }

std::optional<double> metric_value(const EvaluationResult& result,
                                   std::string_view name) {
  if (name == "miss_ratio") return result.miss_ratio;
  if (name == "offered_load") return result.offered_load;
  if (name == "service_time") return result.service_time;
  if (name == "utilization") return result.utilization;
  if (name == "queuing_wait") return result.queuing_wait;
  if (name == "miss_penalty") return result.miss_penalty;
  if (name == "cpi") return result.cpi;
  if (name == "throughput") return result.throughput;
  if (name == "max_temp") return result.max_temp_c;
  if (name == "total_power") return result.total_power_w;
  if (name == "power_density") return result.power_density_w_mm2;
  if (name == "usable_area") return result.usable_area_mm2;
  if (name == "tsv_fraction") return result.tsv_fraction;
  if (name == "hotspot_overlap") return result.hotspot_overlap;
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

namespace {

// true when a is at least as good as b in every objective and strictly
// better in at least one
bool dominates(const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<Objective>& objectives) {
  bool strict = false;
  for (std::size_t k = 0; k < objectives.size(); ++k) {
    const double va = objectives[k].direction == Direction::Minimize ? a[k] : -a[k];
    const double vb = objectives[k].direction == Direction::Minimize ? b[k] : -b[k];
    if (va > vb) return false;
    if (va < vb) strict = true;
  }
  return strict;
}

} // namespace

std::vector<SweepRow> pareto(const std::vector<SweepRow>& rows,
                             const std::vector<Objective>& objectives) {
  if (objectives.empty())
    throw ConfigError("pareto: at least one objective is required");
  for (const auto& obj : objectives)
    if (std::find(kMetricNames.begin(), kMetricNames.end(), obj.metric) ==
        kMetricNames.end())
      throw ConfigError("unknown metric '" + obj.metric + "'");

  std::vector<const SweepRow*> feasible;
  std::vector<std::vector<double>> scores;
  for (const auto& row : rows) {
    if (row.result.flags.any()) continue;
    std::vector<double> score(objectives.size());
    for (std::size_t k = 0; k < objectives.size(); ++k) {
      const auto v = metric_value(row.result, objectives[k].metric);
      if (!v)
        throw ConfigError("pareto: metric '" + objectives[k].metric +
                          "' is undefined for point " +
                          std::to_string(row.index));
      score[k] = *v;
    }
    feasible.push_back(&row);
    scores.push_back(std::move(score));
  }

  std::vector<SweepRow> frontier;
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < feasible.size() && !dominated; ++j)
      if (j != i && dominates(scores[j], scores[i], objectives))
        dominated = true;
    if (!dominated) frontier.push_back(*feasible[i]);
  }
  return frontier;
}

CompositionComparison compare_compositions(const DesignPoint& point,
                                           const Constraints& constraints) {
  point.validate();
  const std::size_t n = point.thermal.layer_count();
  if (n < 2)
    throw ConfigError("compare_compositions: needs at least 2 layers");
  for (std::uint32_t idx : point.assignment.cache_levels)
    if (idx == point.assignment.cores)
      throw ConfigError(
          "compare_compositions: core and cache layers must be disjoint");

  const TileGrid& core_map =
      point.thermal.layers[point.assignment.cores].power_w;
  const double core_power = core_map.total();
  if (!(core_power > 0.0))
    throw ConfigError("compare_compositions: core layer must dissipate power");
  const double total_power = point.thermal.total_power();

  // Every layer becomes a replica of the same 2D system, so the replica
  // hotspots (the core-layer layout) line up vertically. Total power and
  // the interface resistances stay those of the configured stack.
  DesignPoint homogeneous = point;
  const double layer_power = total_power / static_cast<double>(n);
  for (auto& layer : homogeneous.thermal.layers) {
    layer.power_w = core_map;
    for (double& p : layer.power_w.values) p *= layer_power / core_power;
  }

  CompositionComparison cmp{
      .homogeneous = evaluate(homogeneous, constraints),
      .functional = evaluate(point, constraints),
      .homogeneous_overlap = hotspot_overlap_index(homogeneous.thermal),
      .functional_overlap = hotspot_overlap_index(point.thermal),
  };
  cmp.max_temp_delta_c = cmp.homogeneous.max_temp_c - cmp.functional.max_temp_c;
  cmp.overlap_delta = cmp.homogeneous_overlap - cmp.functional_overlap;
  return cmp;
}

Advisory advise(const DesignPoint& point, AdviceQuestion question,
                std::optional<double> delta_mm, const Constraints& constraints,
                GrowthMode mode) {
  point.validate();
  Advisory advisory{.question = question};
  switch (question) {
    case AdviceQuestion::GrowthDirection: {
      if (!delta_mm)
        throw ConfigError("advise: growth-direction needs a footprint delta");
      const GrowthAdvice g =
          growth_advice(point.geometry.x_mm, point.geometry.layers, *delta_mm,
                        mode);
      advisory.growth = g;
      advisory.text = to_string(g);
      return advisory;
    }
    case AdviceQuestion::CapacityForThreadDoubling: {
      advisory.value = capacity_factor(ScalingQuery{
          .thread_factor = 2.0,
          .bandwidth_factor = 1.0,
          .alpha = point.locality.alpha,
      });
      advisory.text = "total cache capacity multiplier for doubled threads";
      return advisory;
    }
    case AdviceQuestion::BandwidthHeadroom: {
      const EvaluationResult r = evaluate(point, constraints);
      const double rho_max = constraints.rho_max.value_or(1.0);
      advisory.value = r.utilization > 0.0
                           ? rho_max / r.utilization
                           : std::numeric_limits<double>::infinity();
      advisory.text = "thread multiplier holding bus utilization within limit";
      return advisory;
    }
  }
  throw ConfigError("advise: unknown question");
}

} // namespace stacklaw
