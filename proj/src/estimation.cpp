#include "eebundle/estimation.hpp"

#include <stdexcept>
#include <vector>

namespace eeb {

void FlowCounters::record_packet(const FlowKey& key, std::uint32_t size, double now) {
  auto [it, inserted] = entries_.try_emplace(key);
  if (inserted) it->second.first_seen = now;
  it->second.cumulative_bytes += size;
}

DemandMap FlowCounters::estimate_rates(double interval_start, double interval_end) {
  if (!(interval_end > interval_start))
    throw std::invalid_argument("estimate_rates: interval_end must exceed interval_start");

  DemandMap demands;
  std::vector<FlowKey> evicted;
  for (auto& [key, e] : entries_) {
    const std::uint64_t delta = e.cumulative_bytes - e.last_cumulative;
    e.last_cumulative = e.cumulative_bytes;
    if (delta == 0) {
      if (++e.idle_intervals >= 2) {
        evicted.push_back(key);
        continue;
      }
      demands.emplace(key, 0.0);
      continue;
    }
    e.idle_intervals = 0;
    const double active_from = e.first_seen >= interval_start && e.first_seen < interval_end ? e.first_seen
                                                                                            : interval_start;
    demands.emplace(key, static_cast<double>(delta) * 8.0 / (interval_end - active_from));
  }
  for (const auto& k : evicted) entries_.erase(k);
  return demands;
}

}  // namespace eeb
