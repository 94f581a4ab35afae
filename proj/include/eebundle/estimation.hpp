#pragma once

// Per-interval demand estimation from cumulative per-flow byte counters, the
// way a controller reads flow-rule counters from a switch.

#include <cstdint>
#include <unordered_map>

#include "eebundle/types.hpp"

namespace eeb {

class FlowCounters {
 public:
  struct Entry {
    std::uint64_t cumulative_bytes = 0;
    std::uint64_t last_cumulative = 0;
    double first_seen = 0.0;
    int idle_intervals = 0;
  };

  void record_packet(const FlowKey& key, std::uint32_t size, double now);

  /// Differences the counters against the previous poll and returns bits/s
  /// per flow. Flows first seen inside [interval_start, interval_end) are
  /// scaled by the part of the interval they were active. A flow with no
  /// traffic keeps a zero-rate entry for one interval and is evicted on the
  /// second consecutive idle poll.
  DemandMap estimate_rates(double interval_start, double interval_end);

  const std::unordered_map<FlowKey, Entry, FlowKeyHash>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<FlowKey, Entry, FlowKeyHash> entries_;
};

}  // namespace eeb
