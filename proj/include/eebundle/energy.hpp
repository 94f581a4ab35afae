#pragma once

// Analytic consumption model of an 802.3az link in frame transmission mode,
// water-filling allocation, and the bundle's lower-bound consumption.

#include <span>
#include <vector>

#include "eebundle/types.hpp"

namespace eeb {

inline constexpr double kStdSleepTime = 2.28e-6;  // T_S, seconds
inline constexpr double kStdWakeTime = 4.48e-6;   // T_W, seconds (10GBASE-T)
inline constexpr double kStdSigmaOff = 0.1;

struct EnergyParams {
  double mu = 0.0;  // packets/second at full load, i.e. 1 / mean transmission time
  double t_sleep = kStdSleepTime;
  double t_wake = kStdWakeTime;
  double sigma_off = kStdSigmaOff;

  /// mu = capacity / (8 * mean packet bytes).
  static EnergyParams for_link(double capacity_bps, double mean_packet_bytes, double t_sleep = kStdSleepTime,
                               double t_wake = kStdWakeTime, double sigma_off = kStdSigmaOff);
  void validate() const;
};

/// Mean LPI residence per idle period under Poisson arrivals:
/// exp(-mu rho T_S) / (mu rho). Requires 0 < rho <= 1.
double expected_toff(double rho, const EnergyParams& params);

/// Normalized power of one link at load rho in [0, 1]:
///   1 - (1 - sigma_off) (1 - rho) E[T_off] / (E[T_off] + T_S + T_W)
/// with the rho -> 0 limit sigma_off.
double sigma(double rho, const EnergyParams& params);

/// Fills ports to capacity one at a time. Throws if the load exceeds the bundle.
std::vector<double> waterfill(double total_load, const BundleConfig& bundle);

/// Mean sigma over ports under the water-filling allocation.
double bundle_lower_bound(double total_load, const BundleConfig& bundle, const EnergyParams& params);

/// Mean sigma for an arbitrary per-port allocation (bits/s).
double mean_sigma(std::span<const double> port_loads, double port_capacity, const EnergyParams& params);

enum class LinkMode { kActive = 0, kGoingToSleep = 1, kLpi = 2, kWaking = 3 };
inline constexpr int kLinkModeCount = 4;

/// Time spent in each LinkMode, indexed by the enum value.
struct ModeTimes {
  double seconds[kLinkModeCount] = {0.0, 0.0, 0.0, 0.0};

  double& operator[](LinkMode m) { return seconds[static_cast<int>(m)]; }
  double operator[](LinkMode m) const { return seconds[static_cast<int>(m)]; }
  double total() const { return seconds[0] + seconds[1] + seconds[2] + seconds[3]; }
};

/// Time-averaged power: transitions draw full power, LPI draws sigma_off.
double measured_consumption(const ModeTimes& times, double sigma_off);

}  // namespace eeb
