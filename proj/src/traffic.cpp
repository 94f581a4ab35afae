#include "eebundle/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace eeb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out, int base = 10) {
  const char* end = s.data() + s.size();
  std::from_chars_result r;
  if constexpr (std::is_floating_point_v<T>) {
    r = std::from_chars(s.data(), end, out);
  } else {
    r = std::from_chars(s.data(), end, out, base);
  }
  return r.ec == std::errc() && r.ptr == end && !s.empty();
}

}  // namespace

TraceFormat parse_trace_format(std::string_view name) {
  if (name == "csv" || name == "text") return TraceFormat::kCsv;
  throw std::invalid_argument("unknown trace format '" + std::string(name) + "'");
}

std::uint32_t parse_ipv4(std::string_view text) {
  std::uint32_t addr = 0;
  int parts = 0;
  while (parts < 4) {
    auto dot = text.find('.');
    std::string_view octet = text.substr(0, dot);
    unsigned v = 0;
    if (!parse_number(octet, v) || v > 255 || octet.size() > 3)
      throw std::invalid_argument("bad IPv4 address");
    addr = (addr << 8) | v;
    ++parts;
    if (dot == std::string_view::npos) break;
    if (parts == 4) throw std::invalid_argument("bad IPv4 address");
    text.remove_prefix(dot + 1);
  }
  if (parts != 4) throw std::invalid_argument("bad IPv4 address");
  return addr;
}

std::string format_ipv4(std::uint32_t addr) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", addr >> 24, (addr >> 16) & 0xFF,
                (addr >> 8) & 0xFF, addr & 0xFF);
  return buf;
}

std::uint64_t parse_mac(std::string_view text) {
  std::uint64_t mac = 0;
  for (int i = 0; i < 6; ++i) {
    std::string_view byte = text.substr(0, 2);
    unsigned v = 0;
    if (byte.size() != 2 || !parse_number(byte, v, 16)) throw std::invalid_argument("bad MAC address");
    mac = (mac << 8) | v;
    text.remove_prefix(2);
    if (i < 5) {
      if (text.empty() || text.front() != ':') throw std::invalid_argument("bad MAC address");
      text.remove_prefix(1);
    }
  }
  if (!text.empty()) throw std::invalid_argument("bad MAC address");
  return mac;
}

std::string format_mac(std::uint64_t mac) {
  char buf[18];
  std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x",
                static_cast<unsigned>((mac >> 40) & 0xFF), static_cast<unsigned>((mac >> 32) & 0xFF),
                static_cast<unsigned>((mac >> 24) & 0xFF), static_cast<unsigned>((mac >> 16) & 0xFF),
                static_cast<unsigned>((mac >> 8) & 0xFF), static_cast<unsigned>(mac & 0xFF));
  return buf;
}

Packet parse_trace_line(std::string_view line, std::size_t line_no) {
  std::string_view fields[5];
  std::size_t n = 0;
  while (true) {
    auto comma = line.find(',');
    if (n == 5) throw ParseError("too many fields", line_no);
    fields[n++] = trim(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (n != 5) throw ParseError("expected 5 comma-separated fields, got " + std::to_string(n), line_no);

  Packet p;
  if (!parse_number(fields[0], p.timestamp) || !std::isfinite(p.timestamp))
    throw ParseError("bad timestamp '" + std::string(fields[0]) + "'", line_no);
  try {
    p.src_ip = parse_ipv4(fields[1]);
    p.dst_ip = parse_ipv4(fields[2]);
    p.dst_mac = parse_mac(fields[3]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_no);
  }
  if (!parse_number(fields[4], p.size)) throw ParseError("bad size '" + std::string(fields[4]) + "'", line_no);
  return p;
}

std::string format_trace_line(const Packet& p) {
  char ts[32];
  std::snprintf(ts, sizeof ts, "%.17g", p.timestamp);
  std::string out = ts;
  out += ',';
  out += format_ipv4(p.src_ip);
  out += ',';
  out += format_ipv4(p.dst_ip);
  out += ',';
  out += format_mac(p.dst_mac);
  out += ',';
  out += std::to_string(p.size);
  return out;
}

TraceReader::TraceReader(const std::filesystem::path& path, TraceFormat /*format*/)
    : path_(path), in_(path) {
  if (!in_) throw std::runtime_error("cannot open trace file '" + path.string() + "'");
}

std::optional<Packet> TraceReader::next() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    std::string_view s = trim(line_);
    if (s.empty() || s.front() == '#') continue;
    Packet p = parse_trace_line(s, line_no_);
    const std::string where = path_.string() + ":" + std::to_string(line_no_);
    if (p.timestamp < 0.0) throw ValidationError(where + ": negative timestamp");
    if (p.timestamp < last_ts_) throw ValidationError(where + ": timestamps not monotone");
    if (p.size < kMinPacketBytes || p.size > kMaxPacketBytes)
      throw ValidationError(where + ": packet size " + std::to_string(p.size) + " out of range");
    last_ts_ = p.timestamp;
    return p;
  }
  return std::nullopt;
}

std::vector<Packet> read_trace(const std::filesystem::path& path, TraceFormat format) {
  TraceReader reader(path, format);
  std::vector<Packet> out;
  while (auto p = reader.next()) out.push_back(*p);
  return out;
}

void write_trace(std::ostream& out, std::span<const Packet> packets) {
  out << "# timestamp_seconds,src_ip,dst_ip,dst_mac,size_bytes\n";
  for (const auto& p : packets) out << format_trace_line(p) << '\n';
}

void write_trace(const std::filesystem::path& path, std::span<const Packet> packets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file '" + path.string() + "'");
  write_trace(out, packets);
  if (!out) throw std::runtime_error("error writing trace file '" + path.string() + "'");
}

ScaledSource::ScaledSource(std::unique_ptr<PacketSource> inner, double factor)
    : inner_(std::move(inner)), factor_(factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be > 0");
}

std::optional<Packet> ScaledSource::next() {
  auto p = inner_->next();
  if (p) p->timestamp /= factor_;
  return p;
}

std::vector<Packet> scale_trace(std::span<const Packet> packets, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be > 0");
  std::vector<Packet> out(packets.begin(), packets.end());
  for (auto& p : out) p.timestamp /= factor;
  return out;
}

double SyntheticProfile::mean_packet_bytes() const {
  double w = 0.0, s = 0.0;
  for (const auto& b : packet_sizes) {
    w += b.weight;
    s += b.weight * b.bytes;
  }
  return s / w;
}

void SyntheticProfile::validate() const {
  if (n_end_to_end_flows < 1) throw std::invalid_argument("synthetic: n_end_to_end_flows must be >= 1");
  if (!(mean_aggregate_rate > 0.0)) throw std::invalid_argument("synthetic: mean_aggregate_rate must be > 0");
  if (!(dst_zipf_exponent >= 0.0)) throw std::invalid_argument("synthetic: zipf exponent must be >= 0");
  if (address_pool_size < 1) throw std::invalid_argument("synthetic: address_pool_size must be >= 1");
  if (n_dst_macs < 1) throw std::invalid_argument("synthetic: n_dst_macs must be >= 1");
  if (!(duration >= 0.0)) throw std::invalid_argument("synthetic: duration must be >= 0");
  if (packet_sizes.empty()) throw std::invalid_argument("synthetic: empty packet size distribution");
  double total = 0.0;
  for (const auto& b : packet_sizes) {
    if (b.bytes < kMinPacketBytes || b.bytes > kMaxPacketBytes)
      throw std::invalid_argument("synthetic: packet size out of range");
    if (!(b.weight >= 0.0)) throw std::invalid_argument("synthetic: negative size weight");
    total += b.weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("synthetic: size weights sum to zero");
}

namespace {

std::vector<double> normalized_cdf(const std::vector<double>& weights) {
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) cdf[i] = (acc += weights[i]);
  for (auto& c : cdf) c /= acc;
  cdf.back() = 1.0;
  return cdf;
}

}  // namespace

SyntheticSource::SyntheticSource(const SyntheticProfile& profile) : profile_(profile), rng_(profile.seed) {
  profile_.validate();

  std::vector<std::uint32_t> pool(static_cast<std::size_t>(profile_.address_pool_size));
  for (auto& a : pool) a = static_cast<std::uint32_t>(rng_() >> 32);
  std::vector<double> popularity(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    popularity[i] = std::pow(static_cast<double>(i + 1), -profile_.dst_zipf_exponent);
  const auto dst_cdf = normalized_cdf(popularity);

  std::vector<double> rates(static_cast<std::size_t>(profile_.n_end_to_end_flows));
  flows_.reserve(rates.size());
  for (auto& r : rates) {
    const std::size_t d = pick(dst_cdf);
    Flow f;
    f.src_ip = static_cast<std::uint32_t>(rng_() >> 32);
    f.dst_ip = pool[d];
    f.dst_mac = 0x020000000000ULL | static_cast<std::uint64_t>(d % profile_.n_dst_macs);
    flows_.push_back(f);
    r = -std::log(1.0 - uniform());
  }
  flow_cdf_ = normalized_cdf(rates);

  std::vector<double> size_w;
  for (const auto& b : profile_.packet_sizes) size_w.push_back(b.weight);
  size_cdf_ = normalized_cdf(size_w);

  packet_rate_ = profile_.mean_aggregate_rate / (8.0 * profile_.mean_packet_bytes());
}

double SyntheticSource::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::size_t SyntheticSource::pick(const std::vector<double>& cdf) {
  const double u = uniform();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::optional<Packet> SyntheticSource::next() {
  now_ += -std::log(1.0 - uniform()) / packet_rate_;
  if (now_ >= profile_.duration) {
    now_ = profile_.duration;
    return std::nullopt;
  }
  const Flow& f = flows_[pick(flow_cdf_)];
  Packet p;
  p.timestamp = now_;
  p.src_ip = f.src_ip;
  p.dst_ip = f.dst_ip;
  p.dst_mac = f.dst_mac;
  p.size = profile_.packet_sizes.size() == 1 ? profile_.packet_sizes.front().bytes
                                             : profile_.packet_sizes[pick(size_cdf_)].bytes;
  return p;
}

std::vector<Packet> generate_synthetic(const SyntheticProfile& profile) {
  SyntheticSource src(profile);
  std::vector<Packet> out;
  while (auto p = src.next()) out.push_back(*p);
  return out;
}

}  // namespace eeb
