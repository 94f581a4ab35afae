#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>

#include "eebundle/harness.hpp"

namespace eeb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty())
    throw std::invalid_argument("config: '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty())
    throw std::invalid_argument("config: '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: '" + std::string(key) + "' expects true/false");
}

// "1500" or "64:0.4,576:0.2,1500:0.4"
std::vector<SizeBin> to_size_bins(std::string_view key, std::string_view v) {
  std::vector<SizeBin> bins;
  while (!v.empty()) {
    auto comma = v.find(',');
    std::string_view item = trim(v.substr(0, comma));
    auto colon = item.find(':');
    SizeBin b;
    b.bytes = to_int<std::uint32_t>(key, trim(item.substr(0, colon)));
    b.weight = colon == std::string_view::npos ? 1.0 : to_double(key, trim(item.substr(colon + 1)));
    bins.push_back(b);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (bins.empty()) throw std::invalid_argument("config: '" + std::string(key) + "' is empty");
  return bins;
}

}  // namespace

ExperimentConfig ExperimentConfig::desk_default() {
  ExperimentConfig c;
  c.bundle = {5, 1e9};
  c.synthetic.mean_aggregate_rate = 0.65 * c.bundle.total_capacity();
  c.synthetic.packet_sizes = {{1500, 1.0}};
  c.duration = 60.0;
  c.synthetic.duration = c.duration;
  c.scheduler.algorithm = Algorithm::kConservative;
  c.scheduler.margin = 0.2;
  c.scheduler.bound = 0.2 * c.bundle.port_capacity;
  return c;
}

void ExperimentConfig::validate() const {
  bundle.validate();
  mask.validate();
  timings().validate();
  if (!trace_file) synthetic.validate();
  if (!(scale_factor > 0.0)) throw std::invalid_argument("config: scale_factor must be > 0");
  if (!(sampling_period > 0.0)) throw std::invalid_argument("config: sampling_period must be > 0");
  if (!(duration > 0.0)) throw std::invalid_argument("config: duration must be > 0");
  if (exclude_first_interval && duration < 2.0 * sampling_period)
    throw std::invalid_argument("config: duration must cover at least two sampling periods");
  if (buffer_size < 1) throw std::invalid_argument("config: buffer_size must be >= 1");
  if (!(scheduler.margin >= 0.0)) throw std::invalid_argument("config: margin must be >= 0");
  if (!(scheduler.bound >= 0.0) || scheduler.bound > bundle.port_capacity)
    throw std::invalid_argument("config: bound must be within [0, port_capacity]");
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (key == "trace_file") {
    if (v.empty())
      c.trace_file.reset();
    else
      c.trace_file = std::filesystem::path(std::string(v));
  } else if (key == "trace_format") {
    c.trace_format = parse_trace_format(v);
  } else if (key == "scale_factor") {
    c.scale_factor = to_double(key, v);
  } else if (key == "synthetic_flows") {
    c.synthetic.n_end_to_end_flows = to_int<int>(key, v);
  } else if (key == "synthetic_rate_bps") {
    c.synthetic.mean_aggregate_rate = to_double(key, v);
  } else if (key == "synthetic_load") {
    // Fraction of the bundle capacity; resolved against the current bundle.
    c.synthetic.mean_aggregate_rate = to_double(key, v) * c.bundle.total_capacity();
  } else if (key == "synthetic_packet_sizes") {
    c.synthetic.packet_sizes = to_size_bins(key, v);
  } else if (key == "synthetic_zipf") {
    c.synthetic.dst_zipf_exponent = to_double(key, v);
  } else if (key == "synthetic_address_pool") {
    c.synthetic.address_pool_size = to_int<int>(key, v);
  } else if (key == "synthetic_macs") {
    c.synthetic.n_dst_macs = to_int<int>(key, v);
  } else if (key == "mask_field") {
    c.mask.field = parse_mask_field(v);
  } else if (key == "mask_offset_bits") {
    c.mask.offset_bits = to_int<int>(key, v);
  } else if (key == "mask_length_bits") {
    c.mask.length_bits = to_int<int>(key, v);
  } else if (key == "mask_combine_with_mac") {
    c.mask.combine_with_mac = to_bool(key, v);
  } else if (key == "n_ports") {
    c.bundle.n_ports = to_int<int>(key, v);
  } else if (key == "port_capacity_bps") {
    c.bundle.port_capacity = to_double(key, v);
  } else if (key == "algorithm") {
    c.scheduler.algorithm = parse_algorithm(v);
  } else if (key == "bound_bps") {
    c.scheduler.bound = to_double(key, v);
  } else if (key == "margin") {
    c.scheduler.margin = to_double(key, v);
  } else if (key == "sampling_period") {
    c.sampling_period = to_double(key, v);
  } else if (key == "buffer_size") {
    c.buffer_size = to_int<std::size_t>(key, v);
  } else if (key == "duration") {
    c.duration = to_double(key, v);
    c.synthetic.duration = c.duration;
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, v);
  } else if (key == "exclude_first_interval") {
    c.exclude_first_interval = to_bool(key, v);
  } else if (key == "t_sleep") {
    c.t_sleep = to_double(key, v);
  } else if (key == "t_wake") {
    c.t_wake = to_double(key, v);
  } else if (key == "sigma_off") {
    c.sigma_off = to_double(key, v);
  } else {
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c = ExperimentConfig::desk_default();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError("config: expected key = value", line_no);
    try {
      set_config_value(c, trim(s.substr(0, eq)), s.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  try {
    ExperimentConfig c = parse_config(in);
    if (c.trace_file && c.trace_file->is_relative()) c.trace_file = path.parent_path() / *c.trace_file;
    return c;
  } catch (const ParseError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace eeb
