#include "eebundle/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eeb {

EnergyParams EnergyParams::for_link(double capacity_bps, double mean_packet_bytes, double t_sleep, double t_wake,
                                    double sigma_off) {
  if (!(capacity_bps > 0.0) || !(mean_packet_bytes > 0.0))
    throw std::invalid_argument("energy: capacity and packet size must be > 0");
  EnergyParams p;
  p.mu = capacity_bps / (8.0 * mean_packet_bytes);
  p.t_sleep = t_sleep;
  p.t_wake = t_wake;
  p.sigma_off = sigma_off;
  p.validate();
  return p;
}

void EnergyParams::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("energy: mu must be > 0");
  if (!(t_sleep >= 0.0) || !(t_wake >= 0.0)) throw std::invalid_argument("energy: transition times must be >= 0");
  if (!(sigma_off > 0.0) || sigma_off > 1.0) throw std::invalid_argument("energy: sigma_off must be in (0, 1]");
}

double expected_toff(double rho, const EnergyParams& params) {
  if (!(rho > 0.0) || rho > 1.0) throw std::invalid_argument("expected_toff: rho must be in (0, 1]");
  const double lambda = params.mu * rho;
  return std::exp(-lambda * params.t_sleep) / lambda;
}

double sigma(double rho, const EnergyParams& params) {
  if (!(rho >= 0.0) || rho > 1.0) throw std::invalid_argument("sigma: rho must be in [0, 1]");
  if (rho == 0.0) return params.sigma_off;
  if (rho == 1.0) return 1.0;
  const double toff = expected_toff(rho, params);
  return 1.0 - (1.0 - params.sigma_off) * (1.0 - rho) * toff / (toff + params.t_sleep + params.t_wake);
}

std::vector<double> waterfill(double total_load, const BundleConfig& bundle) {
  bundle.validate();
  if (!(total_load >= 0.0)) throw std::invalid_argument("waterfill: load must be >= 0");
  if (total_load > bundle.total_capacity()) throw std::invalid_argument("waterfill: load exceeds bundle capacity");
  std::vector<double> loads(static_cast<std::size_t>(bundle.n_ports), 0.0);
  double left = total_load;
  for (auto& l : loads) {
    if (left <= 0.0) break;
    l = left >= bundle.port_capacity ? bundle.port_capacity : left;
    left -= l;
  }
  return loads;
}

double mean_sigma(std::span<const double> port_loads, double port_capacity, const EnergyParams& params) {
  if (port_loads.empty()) throw std::invalid_argument("mean_sigma: no ports");
  double sum = 0.0;
  for (double l : port_loads) sum += sigma(std::min(l / port_capacity, 1.0), params);
  return sum / static_cast<double>(port_loads.size());
}

double bundle_lower_bound(double total_load, const BundleConfig& bundle, const EnergyParams& params) {
  const auto loads = waterfill(total_load, bundle);
  return mean_sigma(loads, bundle.port_capacity, params);
}

double measured_consumption(const ModeTimes& times, double sigma_off) {
  for (double s : times.seconds)
    if (!(s >= 0.0)) throw std::invalid_argument("measured_consumption: negative mode time");
  const double total = times.total();
  if (!(total > 0.0)) throw std::invalid_argument("measured_consumption: zero total time");
  const double full = times[LinkMode::kActive] + times[LinkMode::kGoingToSleep] + times[LinkMode::kWaking];
  return (full + sigma_off * times[LinkMode::kLpi]) / total;
}

}  // namespace eeb
