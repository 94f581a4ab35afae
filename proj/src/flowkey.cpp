#include "eebundle/flowkey.hpp"

#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>

namespace eeb {

MaskField parse_mask_field(std::string_view name) {
  if (name == "dst_ip") return MaskField::kDstIp;
  if (name == "src_ip") return MaskField::kSrcIp;
  throw std::invalid_argument("unknown mask field '" + std::string(name) + "'");
}

std::string_view to_string(MaskField f) { return f == MaskField::kDstIp ? "dst_ip" : "src_ip"; }

void MaskSpec::validate() const {
  if (offset_bits < 0 || offset_bits > 31) throw std::invalid_argument("mask: offset_bits must be in [0, 31]");
  if (length_bits < 1 || length_bits > 32) throw std::invalid_argument("mask: length_bits must be in [1, 32]");
  if (offset_bits + length_bits > 32) throw std::invalid_argument("mask: offset_bits + length_bits exceeds 32");
}

FlowKey flow_key(const Packet& packet, const MaskSpec& spec) {
  const std::uint32_t addr = spec.field == MaskField::kDstIp ? packet.dst_ip : packet.src_ip;
  const int shift = 32 - spec.offset_bits - spec.length_bits;
  const std::uint64_t mask = (std::uint64_t{1} << spec.length_bits) - 1;
  FlowKey k;
  k.bits = static_cast<std::uint32_t>((addr >> shift) & mask);
  if (spec.combine_with_mac) {
    k.has_mac = true;
    k.mac = packet.dst_mac & 0xFFFFFFFFFFFFULL;
  }
  return k;
}

void FlowHistogram::merge(const FlowHistogram& other) {
  for (const auto& [k, c] : other.counts) counts[k] += c;
  total_original_flows += other.total_original_flows;
}

FlowHistogram flow_distribution(PacketSource& stream, const MaskSpec& spec) {
  spec.validate();
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  FlowHistogram hist;
  while (auto p = stream.next()) {
    if (!seen.emplace(p->src_ip, p->dst_ip).second) continue;
    ++hist.counts[flow_key(*p, spec)];
    ++hist.total_original_flows;
  }
  return hist;
}

namespace {

std::map<std::uint32_t, std::uint64_t> counts_by_bits(const FlowHistogram& hist) {
  std::map<std::uint32_t, std::uint64_t> by_bits;
  for (const auto& [k, c] : hist.counts) by_bits[k.bits] += c;
  return by_bits;
}

}  // namespace

double histogram_variance(const FlowHistogram& hist, std::uint64_t key_space) {
  if (key_space == 0) throw std::invalid_argument("histogram_variance: key_space must be > 0");
  const auto by_bits = counts_by_bits(hist);
  if (!by_bits.empty() && by_bits.rbegin()->first >= key_space)
    throw std::invalid_argument("histogram_variance: key_space smaller than largest observed key");

  const double n = static_cast<double>(key_space);
  double sum = 0.0;
  for (const auto& [b, c] : by_bits) sum += static_cast<double>(c);
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& [b, c] : by_bits) {
    const double d = static_cast<double>(c) - mean;
    ss += d * d;
  }
  ss += (n - static_cast<double>(by_bits.size())) * mean * mean;
  return ss / n;
}

void write_histogram_csv(std::ostream& out, const FlowHistogram& hist, std::uint64_t key_space) {
  out << "key,count\n";
  for (const auto& [b, c] : counts_by_bits(hist)) out << b << ',' << c << '\n';
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", histogram_variance(hist, key_space));
  out << "#variance," << buf << '\n';
}

}  // namespace eeb
