#pragma once

// Discrete-event model of a bundle of 802.3az links in frame transmission
// mode. Each port is a drop-tail FIFO (buffer counted in packets) in front of
// a four-state LPI machine:
//
//   ACTIVE --queue empties--> GOING_TO_SLEEP --t_sleep, empty--> LPI
//   GOING_TO_SLEEP --t_sleep, backlog--> WAKING
//   LPI --arrival--> WAKING --t_wake--> ACTIVE
//
// Sleep cannot be aborted. Transitions draw full power.

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eebundle/energy.hpp"
#include "eebundle/scheduling.hpp"
#include "eebundle/types.hpp"

namespace eeb {

std::string_view to_string(LinkMode m);

struct EeeTimings {
  double t_sleep = kStdSleepTime;
  double t_wake = kStdWakeTime;
  double sigma_off = kStdSigmaOff;
  double capacity = 10e9;  // bits/second

  void validate() const;
};

/// Cumulative per-link accounting.
struct LinkCounters {
  ModeTimes mode_time;
  std::uint64_t packets_offered = 0;
  std::uint64_t bytes_offered = 0;
  std::uint64_t packets_dropped = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t bytes_sent = 0;
  double sum_delay = 0.0;  // seconds, arrival to end of transmission
};

struct LinkIntervalMetrics {
  double energy_fraction = 0.0;
  ModeTimes mode_time;
  std::uint64_t packets_offered = 0;
  std::uint64_t bytes_offered = 0;
  std::uint64_t loss_count = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t bytes = 0;
  double sum_delay = 0.0;
  std::optional<double> mean_delay;
};

class Link {
 public:
  static constexpr double kNever = std::numeric_limits<double>::infinity();

  struct Queued {
    double arrival;
    std::uint32_t size;
    std::uint64_t seq;
  };

  Link(const EeeTimings& timings, std::size_t buffer_size) : timings_(timings), buffer_size_(buffer_size) {}

  /// Enqueues unless the buffer is full. Caller guarantees all link events
  /// before `now` have fired.
  bool offer(double now, std::uint32_t size, std::uint64_t seq);

  /// Fires the pending internal event; `now` must equal next_event().
  /// Returns the departed packet if the event was a departure.
  std::optional<Queued> fire(double now);

  double next_event() const { return next_event_; }
  LinkMode mode() const { return mode_; }
  double mode_entered_at() const { return mode_entered_at_; }
  std::size_t queue_length() const { return queue_.size(); }
  std::size_t buffer_size() const { return buffer_size_; }

  /// Counters with the open mode period closed at `now`.
  LinkCounters counters_at(double now) const;

 private:
  void enter(LinkMode m, double now);
  double transmission_time(std::uint32_t size) const { return size * 8.0 / timings_.capacity; }

  EeeTimings timings_;
  std::size_t buffer_size_;
  LinkMode mode_ = LinkMode::kLpi;
  double mode_entered_at_ = 0.0;
  double next_event_ = kNever;
  std::deque<Queued> queue_;
  LinkCounters counters_;
};

/// Called for each departure: port, packet, departure time.
using DepartureObserver = std::function<void(int, const Link::Queued&, double)>;

class BundleSim {
 public:
  BundleSim(int n_ports, const EeeTimings& timings, std::size_t buffer_size, std::uint64_t seed);

  /// Installs `assignment` as the routing table from `at` on. Queued packets
  /// stay where they are. Throws std::invalid_argument if `at` is in the past.
  void apply_assignment(const Assignment& assignment, double at);

  /// Advances to the packet's timestamp and routes it. Flows absent from the
  /// routing table get a random port, which is remembered.
  bool offer_packet(const Packet& packet, const FlowKey& key);

  /// Processes every link event with time <= t, departures before arrivals,
  /// lower port index first on ties.
  void run_until(double t);

  /// Stores cumulative counters at the current time for interval_metrics.
  void checkpoint();

  /// Per-link deltas between two checkpoints. `to` may also be the current
  /// time. Throws std::invalid_argument for unknown or inverted bounds.
  std::vector<LinkIntervalMetrics> interval_metrics(double from, double to) const;

  double now() const { return now_; }
  int n_ports() const { return static_cast<int>(links_.size()); }
  const Link& link(int port) const { return links_.at(static_cast<std::size_t>(port)); }
  const EeeTimings& timings() const { return timings_; }
  std::vector<LinkCounters> counters() const;
  std::optional<int> route_of(const FlowKey& key) const;
  std::uint64_t random_placements() const { return random_placements_; }

  /// CSV event log `time,port,event,queue_len,mode`; nullptr disables it.
  void set_event_log(std::ostream* out);
  void set_departure_observer(DepartureObserver obs) { on_departure_ = std::move(obs); }

 private:
  void log(double t, int port, std::string_view event) const;

  EeeTimings timings_;
  BundleConfig bundle_;
  std::vector<Link> links_;
  std::unordered_map<FlowKey, int, FlowKeyHash> routes_;
  std::mt19937_64 rng_;
  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t random_placements_ = 0;
  std::map<double, std::vector<LinkCounters>> checkpoints_;
  std::ostream* event_log_ = nullptr;
  DepartureObserver on_departure_;
};

}  // namespace eeb
