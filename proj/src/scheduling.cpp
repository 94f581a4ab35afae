#include "eebundle/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace eeb {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "random") return Algorithm::kRandom;
  if (name == "equitable") return Algorithm::kEquitable;
  if (name == "greedy") return Algorithm::kGreedy;
  if (name == "bounded-greedy" || name == "bounded_greedy") return Algorithm::kBoundedGreedy;
  if (name == "conservative") return Algorithm::kConservative;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kRandom: return "random";
    case Algorithm::kEquitable: return "equitable";
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kBoundedGreedy: return "bounded-greedy";
    case Algorithm::kConservative: return "conservative";
  }
  return "?";
}

void Assignment::place(const FlowKey& key, double demand, int port) {
  port_of[key] = port;
  port_load[static_cast<std::size_t>(port)] += demand;
  ++port_flows[static_cast<std::size_t>(port)];
}

int Assignment::used_ports() const {
  return static_cast<int>(std::count_if(port_flows.begin(), port_flows.end(), [](int n) { return n > 0; }));
}

namespace {

using Item = std::pair<FlowKey, double>;

std::vector<Item> by_decreasing_demand(const DemandMap& demands) {
  // DemandMap iterates in key order, so a stable sort keeps ascending keys on ties.
  std::vector<Item> items(demands.begin(), demands.end());
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.second > b.second; });
  return items;
}

int least_loaded(const Assignment& a, int n_active) {
  int best = 0;
  for (int p = 1; p < n_active; ++p)
    if (a.port_load[static_cast<std::size_t>(p)] < a.port_load[static_cast<std::size_t>(best)]) best = p;
  return best;
}

// Shared body of greedy and bounded-greedy: scan ports fullest first and take
// the first whose threshold admits the flow.
template <typename Threshold>
Assignment fill_greedily(const DemandMap& demands, const BundleConfig& bundle, Threshold threshold) {
  bundle.validate();
  Assignment a(bundle.n_ports);
  std::vector<int> order(static_cast<std::size_t>(bundle.n_ports));
  for (const auto& [key, demand] : by_decreasing_demand(demands)) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return a.port_load[static_cast<std::size_t>(x)] > a.port_load[static_cast<std::size_t>(y)];
    });
    int chosen = -1;
    for (int p : order) {
      const auto i = static_cast<std::size_t>(p);
      if (a.port_load[i] + demand <= threshold(a.port_flows[i])) {
        chosen = p;
        break;
      }
    }
    if (chosen < 0) chosen = least_loaded(a, bundle.n_ports);
    a.place(key, demand, chosen);
  }
  return a;
}

}  // namespace

int assign_random(std::mt19937_64& rng, const BundleConfig& bundle) {
  const auto n = static_cast<std::uint64_t>(bundle.n_ports);
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<int>(x % n);
}

Assignment assign_equitable(const DemandMap& demands, const BundleConfig& bundle) {
  bundle.validate();
  Assignment a(bundle.n_ports);
  for (const auto& [key, demand] : by_decreasing_demand(demands)) a.place(key, demand, least_loaded(a, bundle.n_ports));
  return a;
}

Assignment assign_greedy(const DemandMap& demands, const BundleConfig& bundle) {
  const double cap = bundle.port_capacity;
  return fill_greedily(demands, bundle, [cap](int) { return cap; });
}

Assignment assign_bounded_greedy(const DemandMap& demands, const BundleConfig& bundle, double bound) {
  if (!(bound >= 0.0) || bound > bundle.port_capacity)
    throw std::invalid_argument("bounded-greedy: bound must be within [0, port_capacity]");
  const double cap = bundle.port_capacity;
  return fill_greedily(demands, bundle, [cap, bound](int k) { return cap - bound / (k + 1); });
}

int conservative_active_ports(double total_demand, const BundleConfig& bundle, double margin) {
  if (!(margin >= 0.0)) throw std::invalid_argument("conservative: margin must be >= 0");
  const double needed = std::ceil(total_demand * (1.0 + margin) / bundle.port_capacity);
  return static_cast<int>(std::clamp(needed, 1.0, static_cast<double>(bundle.n_ports)));
}

Assignment assign_conservative(const DemandMap& demands, const BundleConfig& bundle, double margin) {
  bundle.validate();
  double total = 0.0;
  for (const auto& [k, d] : demands) total += d;
  const int active = conservative_active_ports(total, bundle, margin);
  Assignment a(bundle.n_ports);
  for (const auto& [key, demand] : by_decreasing_demand(demands)) a.place(key, demand, least_loaded(a, active));
  return a;
}

Assignment schedule(const DemandMap& demands, const BundleConfig& bundle, const SchedulerParams& params,
                    std::mt19937_64& rng) {
  switch (params.algorithm) {
    case Algorithm::kRandom: {
      bundle.validate();
      Assignment a(bundle.n_ports);
      for (const auto& [key, demand] : demands) a.place(key, demand, assign_random(rng, bundle));
      return a;
    }
    case Algorithm::kEquitable: return assign_equitable(demands, bundle);
    case Algorithm::kGreedy: return assign_greedy(demands, bundle);
    case Algorithm::kBoundedGreedy: return assign_bounded_greedy(demands, bundle, params.bound);
    case Algorithm::kConservative: return assign_conservative(demands, bundle, params.margin);
  }
  throw std::logic_error("unhandled algorithm");
}

}  // namespace eeb
