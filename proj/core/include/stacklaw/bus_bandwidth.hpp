#pragma once

#include <cstdint>

#include "stacklaw/cache_locality.hpp"

namespace stacklaw {

/// Aggregate reference stream hitting the last on-stack cache level.
struct TrafficModel {
  std::uint32_t threads = 1;
  double accesses_per_cycle_per_thread = 0.0; ///< references per cycle
  double miss_ratio = 0.0;                    ///< misses per reference, <= 1

  void validate() const;
  bool operator==(const TrafficModel&) const = default;
};

/// Bus operating point. A stable bus has rho < 1; rho >= 1 is carried only
/// together with the saturated flag.
struct BusState {
  double utilization = 0.0;  ///< rho
  double service_time = 0.0; ///< trailing edge, processor cycles
  bool saturated = false;

  bool operator==(const BusState&) const = default;
};

/// Miss arrival rate in misses per processor cycle.
double offered_load(const TrafficModel& traffic);

/// rho = lambda * TE. Never throws: saturation is a flagged state.
BusState utilization(double offered_load, double service_time);

/// M/D/1 expected wait: W = rho * TE / (2 * (1 - rho)).
/// Throws SaturationError at rho >= 1; the design point is infeasible.
double queuing_delay(double rho, double service_time);

/// Total miss penalty: leading edge + queue wait + trailing edge.
double miss_penalty(const BusSpec& bus, std::uint64_t line_size_bytes,
                    double wait);

} // namespace stacklaw
