#pragma once

// Experiment runner: trace -> flow keys -> periodic controller (estimate,
// schedule, install) -> bundle simulation -> per-interval and aggregate
// metrics.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eebundle/flowkey.hpp"
#include "eebundle/linksim.hpp"
#include "eebundle/scheduling.hpp"
#include "eebundle/traffic.hpp"

namespace eeb {

struct ExperimentConfig {
  std::optional<std::filesystem::path> trace_file;  // synthetic when empty
  TraceFormat trace_format = TraceFormat::kCsv;
  SyntheticProfile synthetic;
  double scale_factor = 1.0;
  MaskSpec mask;
  BundleConfig bundle{5, 1e9};
  SchedulerParams scheduler;
  double sampling_period = 0.5;  // seconds
  std::size_t buffer_size = 10000;  // packets
  double duration = 60.0;  // seconds
  std::uint64_t seed = 1;
  bool exclude_first_interval = true;
  double t_sleep = 10 * kStdSleepTime;
  double t_wake = 10 * kStdWakeTime;
  double sigma_off = kStdSigmaOff;

  /// 5 x 1 Gb/s bundle at 65% load with 1500 B packets: the 5 x 10 Gb/s
  /// setup slowed down tenfold. Transition times are stretched by the same
  /// factor so every link sees the same rho and the same sigma(rho).
  static ExperimentConfig desk_default();

  EeeTimings timings() const { return {t_sleep, t_wake, sigma_off, bundle.port_capacity}; }
  void validate() const;
};

/// Parses `key = value` lines (`#` comments) on top of desk_default().
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets one field by its config key. Throws std::invalid_argument for unknown
/// keys or bad values.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

struct IntervalRow {
  int index = 0;
  double start = 0.0;
  double end = 0.0;
  bool included = true;
  std::vector<double> port_energy;
  double energy_fraction = 0.0;  // mean over ports
  std::uint64_t offered = 0;
  std::uint64_t offered_bytes = 0;
  std::uint64_t loss_count = 0;
  std::uint64_t departed = 0;
  double sum_delay = 0.0;
  std::optional<double> mean_delay;
  double lower_bound = 0.0;
};

struct ExperimentReport {
  Algorithm algorithm = Algorithm::kConservative;
  double sampling_period = 0.0;
  std::size_t buffer_size = 0;
  std::vector<IntervalRow> intervals;
  double energy_fraction = 0.0;
  double loss_percent = 0.0;
  std::optional<double> mean_delay;  // seconds
  double lower_bound = 0.0;
  std::uint64_t offered = 0;
  std::uint64_t dropped = 0;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

enum class SweepAxis { kSamplingPeriod, kBufferSize, kMargin };

SweepAxis parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);
ExperimentConfig with_axis_value(ExperimentConfig config, SweepAxis axis, double value);

/// One independent run per value, evaluated concurrently, returned in input
/// order.
std::vector<ExperimentReport> sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values);

/// Lower bound for a measured offered rate, clamped to the bundle capacity.
double report_lower_bound(double offered_bps, double mean_packet_bytes, const ExperimentConfig& config);

// CSV output. Columns:
//   axis_value,algorithm,sampling_period_s,buffer_pkts,energy_fraction,
//   loss_percent,mean_delay_us,lower_bound
// An absent delay is an empty field. Reals are written with 9 significant
// digits.
inline constexpr std::string_view kCsvHeader =
    "axis_value,algorithm,sampling_period_s,buffer_pkts,energy_fraction,loss_percent,mean_delay_us,lower_bound";

/// Interval rows (axis_value = interval index) then one `aggregate` row.
void emit_csv(std::ostream& out, const ExperimentReport& report);
/// One aggregate row per sweep point, axis_value = the swept value.
void emit_csv(std::ostream& out, const std::vector<ExperimentReport>& reports, const std::vector<double>& values);
void emit_csv(const std::filesystem::path& path, const ExperimentReport& report);
void emit_csv(const std::filesystem::path& path, const std::vector<ExperimentReport>& reports,
              const std::vector<double>& values);

/// `interval,port,energy_fraction` rows for plotting per-port consumption.
void emit_port_csv(std::ostream& out, const ExperimentReport& report);

struct CsvRow {
  std::string axis_value;
  std::string algorithm;
  double sampling_period = 0.0;
  std::size_t buffer_size = 0;
  double energy_fraction = 0.0;
  double loss_percent = 0.0;
  std::optional<double> mean_delay_us;
  double lower_bound = 0.0;
};

std::vector<CsvRow> parse_report_csv(std::istream& in);

}  // namespace eeb
