#include "stacklaw/scaling_laws.hpp"

#include <cmath>

#include "stacklaw/errors.hpp"

namespace stacklaw {

void ScalingQuery::validate() const {
  if (!(thread_factor > 0.0))
    throw DomainError("ScalingQuery.thread_factor must be positive");
  if (!(bandwidth_factor > 0.0))
    throw DomainError("ScalingQuery.bandwidth_factor must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("ScalingQuery.alpha must be in (0, 1]");
}

double capacity_factor(const ScalingQuery& query) {
  query.validate();
  const double per_copy =
      std::pow(query.thread_factor / query.bandwidth_factor, 1.0 / query.alpha);
  return query.thread_factor * per_copy;
}

double capacity_for_bandwidth(double bandwidth_factor, double alpha) {
  if (!(bandwidth_factor > 0.0))
    throw DomainError("capacity_for_bandwidth: bandwidth factor must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("capacity_for_bandwidth: alpha must be in (0, 1]");
  return std::pow(1.0 / bandwidth_factor, 1.0 / alpha);
}

double memory_wall_gap(double years, double cpu_rate, double mem_rate) {
  if (!(years >= 0.0))
    throw DomainError("memory_wall_gap: years must be >= 0");
  if (!(cpu_rate > -1.0) || !(mem_rate > -1.0))
    throw DomainError("memory_wall_gap: rates must exceed -1");
  return std::pow((1.0 + cpu_rate) / (1.0 + mem_rate), years);
}

double wire_performance_factor(double layers) {
  if (!(layers >= 1.0))
    throw DomainError("wire_performance_factor: layer count must be >= 1");
  return std::sqrt(layers);
}

double wire_length_ratio(double planar_mm, double vertical_um) {
  if (!(planar_mm > 0.0) || !(vertical_um > 0.0))
    throw DomainError("wire_length_ratio: lengths must be positive");
  return planar_mm * 1000.0 / vertical_um;
}

} // namespace stacklaw
