#include "stacklaw/bus_bandwidth.hpp"

namespace stacklaw {

void TrafficModel::validate() const {
  if (threads < 1)
    throw DomainError("TrafficModel.threads must be >= 1");
  if (!(accesses_per_cycle_per_thread > 0.0))
    throw DomainError("TrafficModel.accesses_per_cycle_per_thread must be positive");
  if (!(miss_ratio >= 0.0 && miss_ratio <= 1.0))
    throw DomainError("TrafficModel.miss_ratio must be in [0, 1]");
}

double offered_load(const TrafficModel& traffic) {
  traffic.validate();
  return static_cast<double>(traffic.threads) *
         traffic.accesses_per_cycle_per_thread * traffic.miss_ratio;
}

BusState utilization(double offered_load, double service_time) {
  if (!(offered_load >= 0.0))
    throw DomainError("utilization: offered load must be >= 0");
  if (!(service_time >= 0.0))
    throw DomainError("utilization: service time must be >= 0");
  const double rho = offered_load * service_time;
  return BusState{
      .utilization = rho,
      .service_time = service_time,
      .saturated = rho >= 1.0,
  };
}

double queuing_delay(double rho, double service_time) {
  if (!(rho >= 0.0))
    throw DomainError("queuing_delay: utilization must be >= 0");
  if (rho >= 1.0)
    throw SaturationError("queuing_delay: bus saturated (rho >= 1)");
  if (!(service_time >= 0.0))
    throw DomainError("queuing_delay: service time must be >= 0");
  return rho * service_time / (2.0 * (1.0 - rho));
}

double miss_penalty(const BusSpec& bus, std::uint64_t line_size_bytes,
                    double wait) {
  if (!(wait >= 0.0))
    throw DomainError("miss_penalty: wait must be >= 0");
  return bus.leading_edge + wait +
         static_cast<double>(trailing_edge(line_size_bytes, bus));
}

} // namespace stacklaw
