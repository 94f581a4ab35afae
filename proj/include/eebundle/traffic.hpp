#pragma once

// Packet sources: text trace ingestion, rate rescaling and a synthetic
// generator standing in for a captured backbone trace.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eebundle/types.hpp"

namespace eeb {

enum class TraceFormat { kCsv };

TraceFormat parse_trace_format(std::string_view name);

/// Single-consumer pull stream of packets in timestamp order.
class PacketSource {
 public:
  virtual ~PacketSource() = default;
  virtual std::optional<Packet> next() = 0;
};

// Address helpers for the text format.
std::uint32_t parse_ipv4(std::string_view text);
std::string format_ipv4(std::uint32_t addr);
std::uint64_t parse_mac(std::string_view text);
std::string format_mac(std::uint64_t mac);

/// Parses one `timestamp,src,dst,mac,size` record. Throws ParseError with
/// `line_no` on malformed input.
Packet parse_trace_line(std::string_view line, std::size_t line_no);
std::string format_trace_line(const Packet& p);

/// Lazily reads a trace file. Comment (`#`) and blank lines are skipped.
/// Throws ParseError on a malformed line and ValidationError when timestamps
/// go backwards or a size is out of range.
class TraceReader final : public PacketSource {
 public:
  TraceReader(const std::filesystem::path& path, TraceFormat format = TraceFormat::kCsv);
  std::optional<Packet> next() override;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string line_;
  std::size_t line_no_ = 0;
  double last_ts_ = 0.0;
};

std::vector<Packet> read_trace(const std::filesystem::path& path,
                               TraceFormat format = TraceFormat::kCsv);
void write_trace(std::ostream& out, std::span<const Packet> packets);
void write_trace(const std::filesystem::path& path, std::span<const Packet> packets);

/// Divides every timestamp by `factor`; factor > 1 speeds the trace up.
class ScaledSource final : public PacketSource {
 public:
  ScaledSource(std::unique_ptr<PacketSource> inner, double factor);
  std::optional<Packet> next() override;

 private:
  std::unique_ptr<PacketSource> inner_;
  double factor_;
};

std::vector<Packet> scale_trace(std::span<const Packet> packets, double factor);

/// Replays an in-memory packet vector.
class VectorSource final : public PacketSource {
 public:
  explicit VectorSource(std::vector<Packet> packets) : packets_(std::move(packets)) {}
  std::optional<Packet> next() override {
    if (pos_ >= packets_.size()) return std::nullopt;
    return packets_[pos_++];
  }

 private:
  std::vector<Packet> packets_;
  std::size_t pos_ = 0;
};

struct SizeBin {
  std::uint32_t bytes = 1500;
  double weight = 1.0;
};

struct SyntheticProfile {
  int n_end_to_end_flows = 2000;
  double mean_aggregate_rate = 3.25e9;      // bits/second
  std::vector<SizeBin> packet_sizes{{1500, 1.0}};  // single bin = constant size
  double dst_zipf_exponent = 1.0;
  int address_pool_size = 1024;
  int n_dst_macs = 4;
  double duration = 60.0;  // seconds
  std::uint64_t seed = 1;

  double mean_packet_bytes() const;
  void validate() const;
};

/// Superposition of per-flow Poisson processes. Each end-to-end flow gets an
/// exponentially distributed share of the aggregate rate and a destination
/// drawn from a Zipf law over a fixed address pool. The merged stream is a
/// single Poisson process whose packets are attributed to flows in proportion
/// to their rates, which is distributionally identical and O(log n) per packet.
class SyntheticSource final : public PacketSource {
 public:
  explicit SyntheticSource(const SyntheticProfile& profile);
  std::optional<Packet> next() override;

 private:
  struct Flow {
    std::uint32_t src_ip;
    std::uint32_t dst_ip;
    std::uint64_t dst_mac;
  };

  double uniform();
  std::size_t pick(const std::vector<double>& cdf);

  SyntheticProfile profile_;
  std::mt19937_64 rng_;
  std::vector<Flow> flows_;
  std::vector<double> flow_cdf_;
  std::vector<double> size_cdf_;
  double packet_rate_ = 0.0;
  double now_ = 0.0;
};

std::vector<Packet> generate_synthetic(const SyntheticProfile& profile);

}  // namespace eeb
