#pragma once

// Flow-to-port assignment policies for a bundle of energy-efficient links.
//
// All policies visit flows by decreasing estimated demand, ties broken by
// ascending FlowKey, so the output is a pure function of the input.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "eebundle/types.hpp"

namespace eeb {

enum class Algorithm { kRandom, kEquitable, kGreedy, kBoundedGreedy, kConservative };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);

struct Assignment {
  std::map<FlowKey, int> port_of;
  std::vector<double> port_load;  // estimated bits/s per port
  std::vector<int> port_flows;    // flows per port

  explicit Assignment(int n_ports = 0) : port_load(n_ports, 0.0), port_flows(n_ports, 0) {}

  void place(const FlowKey& key, double demand, int port);
  int used_ports() const;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Deterministic uniform port draw. Uses rejection sampling on raw engine
/// output so the sequence does not depend on the standard library vendor.
int assign_random(std::mt19937_64& rng, const BundleConfig& bundle);

/// Longest-demand-first onto the least-loaded of all ports.
Assignment assign_equitable(const DemandMap& demands, const BundleConfig& bundle);

/// Each flow goes to the fullest port it fits on; flows fitting nowhere
/// go to the least-loaded port.
Assignment assign_greedy(const DemandMap& demands, const BundleConfig& bundle);

/// Greedy with a reserve: a port holding k flows only accepts up to
/// capacity - bound / (k + 1). Throws if bound is outside [0, capacity].
Assignment assign_bounded_greedy(const DemandMap& demands, const BundleConfig& bundle, double bound);

/// Number of ports the conservative policy keeps active for a total demand.
int conservative_active_ports(double total_demand, const BundleConfig& bundle, double margin);

/// Powers ceil(total * (1 + margin) / capacity) ports (clamped to the bundle)
/// and balances flows over them, least-loaded first.
Assignment assign_conservative(const DemandMap& demands, const BundleConfig& bundle, double margin);

struct SchedulerParams {
  Algorithm algorithm = Algorithm::kConservative;
  double bound = 0.0;   // bits/s, bounded-greedy only
  double margin = 0.2;  // conservative only
};

/// Dispatches to the policy named in `params`. kRandom draws from `rng`.
Assignment schedule(const DemandMap& demands, const BundleConfig& bundle, const SchedulerParams& params,
                    std::mt19937_64& rng);

}  // namespace eeb
