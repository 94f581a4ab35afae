#pragma once

// Shared value types: packets, aggregated-flow keys and bundle geometry.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace eeb {

/// One trace record. Times are seconds, sizes are bytes on the wire.
struct Packet {
  double timestamp = 0.0;
  std::uint32_t src_ip = 0;
  std::uint32_t dst_ip = 0;
  std::uint64_t dst_mac = 0;  // low 48 bits
  std::uint32_t size = 0;

  friend bool operator==(const Packet&, const Packet&) = default;
};

inline constexpr std::uint32_t kMinPacketBytes = 64;
inline constexpr std::uint32_t kMaxPacketBytes = 9000;

/// Identity of an aggregated flow: optional destination MAC plus the masked
/// address bits. Ordered so containers keyed by it iterate deterministically.
struct FlowKey {
  bool has_mac = false;
  std::uint64_t mac = 0;
  std::uint32_t bits = 0;

  friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& k) const noexcept {
    std::uint64_t h = k.mac * 0x9E3779B97F4A7C15ULL;
    h ^= (static_cast<std::uint64_t>(k.bits) << 1) | (k.has_mac ? 1u : 0u);
    h *= 0xBF58476D1CE4E5B9ULL;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

/// Estimated rate per aggregated flow, bits/second.
using DemandMap = std::map<FlowKey, double>;

/// A homogeneous bundle of parallel links.
struct BundleConfig {
  int n_ports = 5;
  double port_capacity = 10e9;  // bits/second

  double total_capacity() const { return n_ports * port_capacity; }
  void validate() const {
    if (n_ports < 1) throw std::invalid_argument("bundle: n_ports must be >= 1");
    if (!(port_capacity > 0.0)) throw std::invalid_argument("bundle: port_capacity must be > 0");
  }
};

/// Raised for malformed input text (trace lines, config lines, CSV).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Raised when well-formed input violates a stream invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eeb
