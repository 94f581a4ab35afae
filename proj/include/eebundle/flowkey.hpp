#pragma once

// Aggregation of packets into flows by an IP bit mask, and the distribution
// of end-to-end (src, dst) pairs over the resulting aggregated flows.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "eebundle/traffic.hpp"
#include "eebundle/types.hpp"

namespace eeb {

enum class MaskField { kDstIp, kSrcIp };

MaskField parse_mask_field(std::string_view name);
std::string_view to_string(MaskField f);

/// Selects `length_bits` bits of an address, starting `offset_bits` from the
/// most significant bit. The default is the first octet of the destination
/// combined with the destination MAC.
struct MaskSpec {
  MaskField field = MaskField::kDstIp;
  int offset_bits = 0;
  int length_bits = 8;
  bool combine_with_mac = true;

  std::uint64_t key_space() const { return std::uint64_t{1} << length_bits; }
  void validate() const;
};

FlowKey flow_key(const Packet& packet, const MaskSpec& spec);

struct FlowHistogram {
  std::map<FlowKey, std::uint64_t> counts;
  std::uint64_t total_original_flows = 0;

  /// Adds another partial histogram built over a disjoint set of pairs.
  void merge(const FlowHistogram& other);
};

/// Counts distinct (src_ip, dst_ip) pairs per aggregated flow.
FlowHistogram flow_distribution(PacketSource& stream, const MaskSpec& spec);

/// Population variance of per-bucket pair counts over `key_space` buckets,
/// absent buckets counting as zero. Buckets are distinguished by their masked
/// bits only. Throws std::invalid_argument if an observed key does not fit.
double histogram_variance(const FlowHistogram& hist, std::uint64_t key_space);

/// Writes `key,count` rows followed by `#variance,<value>`.
void write_histogram_csv(std::ostream& out, const FlowHistogram& hist, std::uint64_t key_space);

}  // namespace eeb
