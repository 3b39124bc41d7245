#include "stacklaw/cache_locality.hpp"

#include <bit>
#include <cmath>

namespace stacklaw {

void LocalityModel::validate() const {
  if (!(c0 > 0.0))
    throw DomainError("LocalityModel.c0 must be positive");
  if (!(m0 > 0.0 && m0 <= 1.0))
    throw DomainError("LocalityModel.m0 must be in (0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("LocalityModel.alpha must be in (0, 1]");
}

void CacheLevelSpec::validate() const {
  if (capacity == 0 || !std::has_single_bit(capacity))
    throw DomainError("CacheLevelSpec.capacity must be a power of 2");
  if (line_size == 0 || !std::has_single_bit(line_size))
    throw DomainError("CacheLevelSpec.line_size must be a power of 2");
  if (line_size > capacity)
    throw DomainError("CacheLevelSpec.line_size must not exceed capacity");
  if (associativity < 1)
    throw DomainError("CacheLevelSpec.associativity must be >= 1");
  const std::uint64_t lines = capacity / line_size;
  if (lines % associativity != 0 || lines / associativity == 0)
    throw DomainError(
        "CacheLevelSpec: capacity / (line_size * associativity) must be a "
        "whole number of congruence classes");
}

void BusSpec::validate() const {
  if (width == 0)
    throw DomainError("BusSpec.width must be positive");
  if (cycles_per_bus_clock < 1)
    throw DomainError("BusSpec.cycles_per_bus_clock must be >= 1");
  if (!(leading_edge >= 0.0))
    throw DomainError("BusSpec.leading_edge must be >= 0");
}

double miss_rate(double capacity_bytes, const LocalityModel& model) {
  model.validate();
  if (!(capacity_bytes > 0.0))
    throw DomainError("miss_rate: capacity must be positive");
  const double ratio = capacity_bytes / model.c0;
  return std::min(1.0, model.m0 * std::pow(ratio, -model.alpha));
}

std::uint64_t trailing_edge(std::uint64_t line_size_bytes, const BusSpec& bus) {
  bus.validate();
  if (line_size_bytes == 0)
    throw DomainError("trailing_edge: line_size must be positive");
  const std::uint64_t packets =
      (line_size_bytes + bus.width - 1) / bus.width; // partial packets round up
  return packets * bus.cycles_per_bus_clock;
}

DirectoryStats directory_stats(const CacheLevelSpec& level) {
  level.validate();
  return DirectoryStats{
      .entries = level.capacity / level.line_size,
      .congruence_classes = level.congruence_classes(),
  };
}

std::uint64_t dislocation_factor(std::uint64_t line_bits,
                                 std::uint64_t congruence_classes) {
  if (line_bits < 1 || congruence_classes < 1)
    throw DomainError("dislocation_factor: both partition counts must be >= 1");
  return line_bits * congruence_classes;
}

} // namespace stacklaw
