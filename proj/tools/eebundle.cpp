// Command-line front end: experiments, sweeps, and the analytic helpers.

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eebundle/energy.hpp"
#include "eebundle/flowkey.hpp"
#include "eebundle/harness.hpp"
#include "eebundle/traffic.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    double v = 0.0;
    auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size() || item.empty())
      throw std::invalid_argument("bad sweep value '" + std::string(item) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("--values is empty");
  return out;
}

// Writes to `path`, or stdout when empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

eeb::ExperimentConfig load(const std::string& config_path, const std::optional<std::uint64_t>& seed) {
  auto config = config_path.empty() ? eeb::ExperimentConfig::desk_default() : eeb::load_config(config_path);
  if (seed) config.seed = *seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware flow allocation over bundles of 802.3az links"};
  app.require_subcommand(1);

  std::string config_path, out_path, port_csv;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run one experiment and print per-interval and aggregate metrics");
  run->add_option("--config", config_path, "Key-value config file (desk defaults when omitted)");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_path, "CSV output path (stdout when omitted)");
  run->add_option("--port-csv", port_csv, "Also write per-port energy per interval");

  std::string axis_name, values_text;
  auto* sw = app.add_subcommand("sweep", "Run one experiment per value of a parameter");
  sw->add_option("--config", config_path, "Key-value config file (desk defaults when omitted)");
  sw->add_option("--axis", axis_name, "sampling_period | buffer_size | margin")->required();
  sw->add_option("--values", values_text, "Comma-separated values")->required();
  sw->add_option("--seed", seed, "Override the config seed");
  sw->add_option("--out", out_path, "CSV output path (stdout when omitted)");

  double capacity = 10e9, packet_bytes = 1500, t_sleep = eeb::kStdSleepTime, t_wake = eeb::kStdWakeTime,
         sigma_off = eeb::kStdSigmaOff, step = 0.01;
  auto add_link_options = [&](CLI::App* cmd) {
    cmd->add_option("--capacity", capacity, "Link capacity, bits/s")->capture_default_str();
    cmd->add_option("--packet-bytes", packet_bytes, "Mean packet size")->capture_default_str();
    cmd->add_option("--t-sleep", t_sleep, "Sleep transition, seconds")->capture_default_str();
    cmd->add_option("--t-wake", t_wake, "Wake transition, seconds")->capture_default_str();
    cmd->add_option("--sigma-off", sigma_off, "LPI power fraction")->capture_default_str();
  };
  auto* curve = app.add_subcommand("sigma-curve", "Print the analytic consumption curve as rho,sigma CSV");
  add_link_options(curve);
  curve->add_option("--step", step, "rho step")->capture_default_str();
  curve->add_option("--out", out_path, "CSV output path (stdout when omitted)");

  double offered_load = 32.5e9;
  int n_ports = 5;
  auto* bound = app.add_subcommand("lower-bound", "Water-filling allocation and its consumption");
  add_link_options(bound);
  bound->add_option("--load", offered_load, "Offered load, bits/s")->capture_default_str();
  bound->add_option("--ports", n_ports, "Ports in the bundle")->capture_default_str();

  std::string trace_path, field = "dst_ip";
  int offset = 0, length = 8;
  bool no_mac = false;
  auto* hist = app.add_subcommand("histogram", "Distribution of end-to-end flows over aggregated flows");
  hist->add_option("--trace", trace_path, "Trace file (synthetic from --config when omitted)");
  hist->add_option("--config", config_path, "Config for the synthetic workload");
  hist->add_option("--field", field, "dst_ip | src_ip")->capture_default_str();
  hist->add_option("--offset", offset, "Bit offset from the most significant bit")->capture_default_str();
  hist->add_option("--length", length, "Number of bits")->capture_default_str();
  hist->add_flag("--no-mac", no_mac, "Do not combine with the destination MAC");
  hist->add_option("--seed", seed, "Override the config seed");
  hist->add_option("--out", out_path, "CSV output path (stdout when omitted)");

  auto* gen = app.add_subcommand("generate", "Write the synthetic workload of a config as a trace file");
  gen->add_option("--config", config_path, "Config for the synthetic workload");
  gen->add_option("--seed", seed, "Override the config seed");
  gen->add_option("--out", out_path, "Trace output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = load(config_path, seed);
      const auto report = eeb::run_experiment(config);
      with_output(out_path, [&](std::ostream& o) { eeb::emit_csv(o, report); });
      if (!port_csv.empty()) with_output(port_csv, [&](std::ostream& o) { eeb::emit_port_csv(o, report); });
    } else if (*sw) {
      const auto config = load(config_path, seed);
      const auto axis = eeb::parse_sweep_axis(axis_name);
      const auto values = parse_values(values_text);
      const auto reports = eeb::sweep(config, axis, values);
      with_output(out_path, [&](std::ostream& o) { eeb::emit_csv(o, reports, values); });
    } else if (*curve) {
      if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("--step must be in (0, 1]");
      const auto params = eeb::EnergyParams::for_link(capacity, packet_bytes, t_sleep, t_wake, sigma_off);
      with_output(out_path, [&](std::ostream& o) {
        o << "rho,sigma\n";
        const long n = std::lround(1.0 / step);
        char buf[64];
        for (long i = 0; i <= n; ++i) {
          const double rho = std::min(1.0, static_cast<double>(i) * step);
          std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", rho, eeb::sigma(rho, params));
          o << buf;
        }
      });
    } else if (*bound) {
      const auto params = eeb::EnergyParams::for_link(capacity, packet_bytes, t_sleep, t_wake, sigma_off);
      const eeb::BundleConfig bundle{n_ports, capacity};
      const auto loads = eeb::waterfill(offered_load, bundle);
      std::cout << "port,load_bps,sigma\n";
      for (std::size_t i = 0; i < loads.size(); ++i)
        std::cout << i << ',' << loads[i] << ',' << eeb::sigma(loads[i] / capacity, params) << '\n';
      std::cout << "#lower_bound," << eeb::bundle_lower_bound(offered_load, bundle, params) << '\n';
    } else if (*hist) {
      eeb::MaskSpec spec{eeb::parse_mask_field(field), offset, length, !no_mac};
      spec.validate();
      eeb::FlowHistogram h;
      if (!trace_path.empty()) {
        eeb::TraceReader reader(trace_path);
        h = eeb::flow_distribution(reader, spec);
      } else {
        const auto config = load(config_path, seed);
        auto profile = config.synthetic;
        profile.seed = config.seed;
        eeb::SyntheticSource src(profile);
        h = eeb::flow_distribution(src, spec);
      }
      with_output(out_path, [&](std::ostream& o) { eeb::write_histogram_csv(o, h, spec.key_space()); });
    } else if (*gen) {
      const auto config = load(config_path, seed);
      auto profile = config.synthetic;
      profile.seed = config.seed;
      eeb::SyntheticSource src(profile);
      with_output(out_path, [&](std::ostream& o) {
        o << "# timestamp_seconds,src_ip,dst_ip,dst_mac,size_bytes\n";
        while (auto p = src.next()) o << eeb::format_trace_line(*p) << '\n';
      });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
