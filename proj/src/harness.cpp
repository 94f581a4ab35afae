#include "eebundle/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <thread>

#include "eebundle/energy.hpp"
#include "eebundle/estimation.hpp"

namespace eeb {

namespace {

std::unique_ptr<PacketSource> open_source(const ExperimentConfig& config) {
  std::unique_ptr<PacketSource> src;
  if (config.trace_file) {
    src = std::make_unique<TraceReader>(*config.trace_file, config.trace_format);
  } else {
    SyntheticProfile profile = config.synthetic;
    profile.duration = config.duration * config.scale_factor;
    profile.seed = config.seed;
    src = std::make_unique<SyntheticSource>(profile);
  }
  if (config.scale_factor != 1.0) src = std::make_unique<ScaledSource>(std::move(src), config.scale_factor);
  return src;
}

// Interval end points k * period, plus a final partial interval if the
// duration is not a whole number of periods.
std::vector<double> interval_ends(double period, double duration) {
  std::vector<double> ends;
  for (long k = 1;; ++k) {
    const double t = static_cast<double>(k) * period;
    if (t > duration * (1.0 + 1e-12)) break;
    ends.push_back(std::min(t, duration));
  }
  if (ends.empty() || ends.back() < duration) ends.push_back(duration);
  return ends;
}

}  // namespace

double report_lower_bound(double offered_bps, double mean_packet_bytes, const ExperimentConfig& config) {
  const auto params = EnergyParams::for_link(config.bundle.port_capacity, mean_packet_bytes, config.t_sleep,
                                             config.t_wake, config.sigma_off);
  return bundle_lower_bound(std::clamp(offered_bps, 0.0, config.bundle.total_capacity()), config.bundle, params);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();

  const auto ends = interval_ends(config.sampling_period, config.duration);
  auto source = open_source(config);
  BundleSim sim(config.bundle.n_ports, config.timings(), config.buffer_size, config.seed ^ 0x5EEDB0D1E5ULL);
  std::mt19937_64 sched_rng(config.seed ^ 0xA55167ULL);
  FlowCounters counters;

  ExperimentReport report;
  report.algorithm = config.scheduler.algorithm;
  report.sampling_period = config.sampling_period;
  report.buffer_size = config.buffer_size;

  sim.checkpoint();
  std::size_t next = 0;
  double prev = 0.0;

  auto close_interval = [&](double t) {
    sim.run_until(t);
    sim.checkpoint();
    const auto links = sim.interval_metrics(prev, t);

    IntervalRow row;
    row.index = static_cast<int>(next);
    row.start = prev;
    row.end = t;
    row.included = !(config.exclude_first_interval && next == 0);
    for (const auto& m : links) {
      row.port_energy.push_back(m.energy_fraction);
      row.energy_fraction += m.energy_fraction;
      row.offered += m.packets_offered;
      row.offered_bytes += m.bytes_offered;
      row.loss_count += m.loss_count;
      row.departed += m.packets_sent;
      row.sum_delay += m.sum_delay;
    }
    row.energy_fraction /= static_cast<double>(links.size());
    if (row.departed > 0) row.mean_delay = row.sum_delay / static_cast<double>(row.departed);
    const double mean_bytes =
        row.offered > 0 ? static_cast<double>(row.offered_bytes) / static_cast<double>(row.offered) : 1500.0;
    row.lower_bound = report_lower_bound(static_cast<double>(row.offered_bytes) * 8.0 / (t - prev), mean_bytes, config);
    report.intervals.push_back(std::move(row));

    if (next + 1 < ends.size()) {
      const DemandMap demands = counters.estimate_rates(prev, t);
      sim.apply_assignment(schedule(demands, config.bundle, config.scheduler, sched_rng), t);
    }
    prev = t;
    ++next;
  };

  while (auto p = source->next()) {
    if (p->timestamp >= config.duration) break;
    while (next < ends.size() && ends[next] <= p->timestamp) close_interval(ends[next]);
    const FlowKey key = flow_key(*p, config.mask);
    counters.record_packet(key, p->size, p->timestamp);
    sim.offer_packet(*p, key);
  }
  while (next < ends.size()) close_interval(ends[next]);

  // Aggregates over included intervals.
  double energy_time = 0.0, time = 0.0, sum_delay = 0.0;
  std::uint64_t departed = 0, offered_bytes = 0;
  for (const auto& row : report.intervals) {
    if (!row.included) continue;
    const double len = row.end - row.start;
    energy_time += row.energy_fraction * len;
    time += len;
    report.offered += row.offered;
    report.dropped += row.loss_count;
    offered_bytes += row.offered_bytes;
    departed += row.departed;
    sum_delay += row.sum_delay;
  }
  if (time > 0.0) {
    report.energy_fraction = energy_time / time;
    const double mean_bytes =
        report.offered > 0 ? static_cast<double>(offered_bytes) / static_cast<double>(report.offered) : 1500.0;
    report.lower_bound = report_lower_bound(static_cast<double>(offered_bytes) * 8.0 / time, mean_bytes, config);
  }
  report.loss_percent =
      report.offered > 0 ? 100.0 * static_cast<double>(report.dropped) / static_cast<double>(report.offered) : 0.0;
  if (departed > 0) report.mean_delay = sum_delay / static_cast<double>(departed);
  return report;
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "sampling_period") return SweepAxis::kSamplingPeriod;
  if (name == "buffer_size") return SweepAxis::kBufferSize;
  if (name == "margin") return SweepAxis::kMargin;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kSamplingPeriod: return "sampling_period";
    case SweepAxis::kBufferSize: return "buffer_size";
    case SweepAxis::kMargin: return "margin";
  }
  return "?";
}

ExperimentConfig with_axis_value(ExperimentConfig config, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kSamplingPeriod: config.sampling_period = value; break;
    case SweepAxis::kBufferSize:
      if (!(value >= 1.0) || value != std::floor(value))
        throw std::invalid_argument("sweep: buffer_size values must be positive integers");
      config.buffer_size = static_cast<std::size_t>(value);
      break;
    case SweepAxis::kMargin: config.scheduler.margin = value; break;
  }
  return config;
}

std::vector<ExperimentReport> sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  std::vector<ExperimentConfig> configs;
  for (double v : values) {
    configs.push_back(with_axis_value(base, axis, v));
    configs.back().validate();
  }

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<ExperimentReport> out(configs.size());
  for (std::size_t begin = 0; begin < configs.size(); begin += workers) {
    const std::size_t end = std::min(configs.size(), begin + workers);
    std::vector<std::future<ExperimentReport>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, [&configs, i] { return run_experiment(configs[i]); }));
    for (std::size_t i = begin; i < end; ++i) out[i] = batch[i - begin].get();
  }
  return out;
}

}  // namespace eeb
