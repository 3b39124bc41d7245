#pragma once

namespace stacklaw {

/// "Multiply threads by k under bandwidth scaled by b" question, with the
/// workload's miss-rate root exponent.
struct ScalingQuery {
  double thread_factor = 1.0;    ///< k > 0
  double bandwidth_factor = 1.0; ///< b > 0
  double alpha = 0.5;            ///< in (0, 1]

  void validate() const;
  bool operator==(const ScalingQuery&) const = default;
};

/// Total cache capacity multiplier: k replicated systems, each running at
/// b/k of the original bandwidth, each needing (k/b)^(1/alpha) times the
/// capacity to shed the lost bandwidth. k=2, b=1, alpha=1/2 gives 8.
double capacity_factor(const ScalingQuery& query);

/// Per-system capacity multiplier compensating a bandwidth multiplier b:
/// (1/b)^(1/alpha). Halving bandwidth at alpha=1/2 quadruples capacity.
double capacity_for_bandwidth(double bandwidth_factor, double alpha);

/// Processor-vs-memory improvement gap after the given number of years.
/// Default rates: processors 60%/yr, memory 10%/yr (the boundary of the
/// "under 10%" range).
double memory_wall_gap(double years, double cpu_rate = 0.60,
                       double mem_rate = 0.10);

/// Wire-limited speedup from folding a planar design into a stack:
/// sqrt(layers).
double wire_performance_factor(double layers);

/// Planar-to-vertical interconnect length ratio; planar runs are mm-scale,
/// vertical vias um-scale.
double wire_length_ratio(double planar_mm, double vertical_um);

} // namespace stacklaw
