#pragma once

#include <cstdint>

#include "stacklaw/errors.hpp"

namespace stacklaw {

/// Miss-rate power law anchored at a measured reference point:
/// m(C) = min(1, m0 * (C / c0)^(-alpha)).
struct LocalityModel {
  double c0 = 0.0;    ///< reference capacity, bytes
  double m0 = 0.0;    ///< miss ratio observed at c0, in (0, 1]
  double alpha = 0.5; ///< root exponent, in (0, 1]; 1/2 fits many workloads

  void validate() const;
  bool operator==(const LocalityModel&) const = default;
};

/// Capacity / line / associativity geometry of one cache level.
/// congruence_classes() = capacity / (line_size * associativity).
struct CacheLevelSpec {
  std::uint64_t capacity = 0;  ///< bytes, power of 2
  std::uint64_t line_size = 0; ///< bytes, power of 2, divides capacity
  std::uint32_t associativity = 1;

  std::uint64_t congruence_classes() const {
    return capacity / (line_size * associativity);
  }

  void validate() const;
  bool operator==(const CacheLevelSpec&) const = default;
};

/// Off-stack bus timing. Width is payload bytes moved per bus clock, so
/// delivered bandwidth is width / cycles_per_bus_clock bytes per processor
/// cycle.
struct BusSpec {
  std::uint64_t width = 0;            ///< bytes per bus clock
  std::uint32_t cycles_per_bus_clock = 1; ///< processor cycles per bus clock
  double leading_edge = 0.0;          ///< processor cycles, miss to first packet

  void validate() const;
  bool operator==(const BusSpec&) const = default;
};

/// Miss ratio at the given capacity. Clamped to 1: the power law diverges
/// at tiny capacities and a ratio above 1 is meaningless.
double miss_rate(double capacity_bytes, const LocalityModel& model);

/// Trailing edge: processor cycles to move a full line over the bus.
/// Partial last packets occupy a whole bus clock.
std::uint64_t trailing_edge(std::uint64_t line_size_bytes, const BusSpec& bus);

struct DirectoryStats {
  std::uint64_t entries = 0; ///< one per line: capacity / line_size
  std::uint64_t congruence_classes = 0;

  bool operator==(const DirectoryStats&) const = default;
};

DirectoryStats directory_stats(const CacheLevelSpec& level);

/// Factor by which x-y bus dislocation generality shrinks when a stacked
/// hierarchy is partitioned per bit position and per congruence class.
std::uint64_t dislocation_factor(std::uint64_t line_bits,
                                 std::uint64_t congruence_classes);

} // namespace stacklaw
