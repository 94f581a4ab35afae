#include "eebundle/linksim.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace eeb {

std::string_view to_string(LinkMode m) {
  switch (m) {
    case LinkMode::kActive: return "ACTIVE";
    case LinkMode::kGoingToSleep: return "GOING_TO_SLEEP";
    case LinkMode::kLpi: return "LPI";
    case LinkMode::kWaking: return "WAKING";
  }
  return "?";
}

void EeeTimings::validate() const {
  if (!(t_sleep >= 0.0) || !(t_wake >= 0.0)) throw std::invalid_argument("eee: transition times must be >= 0");
  if (!(sigma_off >= 0.0) || sigma_off > 1.0) throw std::invalid_argument("eee: sigma_off must be in [0, 1]");
  if (!(capacity > 0.0)) throw std::invalid_argument("eee: capacity must be > 0");
}

void Link::enter(LinkMode m, double now) {
  counters_.mode_time[mode_] += now - mode_entered_at_;
  mode_ = m;
  mode_entered_at_ = now;
}

bool Link::offer(double now, std::uint32_t size, std::uint64_t seq) {
  ++counters_.packets_offered;
  counters_.bytes_offered += size;
  if (queue_.size() >= buffer_size_) {
    ++counters_.packets_dropped;
    return false;
  }
  queue_.push_back({now, size, seq});
  if (mode_ == LinkMode::kLpi) {
    enter(LinkMode::kWaking, now);
    next_event_ = now + timings_.t_wake;
  }
  return true;
}

std::optional<Link::Queued> Link::fire(double now) {
  switch (mode_) {
    case LinkMode::kActive: {
      const Queued done = queue_.front();
      queue_.pop_front();
      ++counters_.packets_sent;
      counters_.bytes_sent += done.size;
      counters_.sum_delay += now - done.arrival;
      if (queue_.empty()) {
        enter(LinkMode::kGoingToSleep, now);
        next_event_ = now + timings_.t_sleep;
      } else {
        next_event_ = now + transmission_time(queue_.front().size);
      }
      return done;
    }
    case LinkMode::kGoingToSleep:
      if (queue_.empty()) {
        enter(LinkMode::kLpi, now);
        next_event_ = kNever;
      } else {
        enter(LinkMode::kWaking, now);
        next_event_ = now + timings_.t_wake;
      }
      return std::nullopt;
    case LinkMode::kWaking:
      enter(LinkMode::kActive, now);
      next_event_ = now + transmission_time(queue_.front().size);
      return std::nullopt;
    case LinkMode::kLpi:
      break;
  }
  throw std::logic_error("link: event fired in LPI");
}

LinkCounters Link::counters_at(double now) const {
  LinkCounters c = counters_;
  c.mode_time[mode_] += now - mode_entered_at_;
  return c;
}

BundleSim::BundleSim(int n_ports, const EeeTimings& timings, std::size_t buffer_size, std::uint64_t seed)
    : timings_(timings), rng_(seed) {
  timings_.validate();
  bundle_.n_ports = n_ports;
  bundle_.port_capacity = timings.capacity;
  bundle_.validate();
  if (buffer_size == 0) throw std::invalid_argument("bundle sim: buffer_size must be >= 1");
  links_.assign(static_cast<std::size_t>(n_ports), Link(timings_, buffer_size));
}

void BundleSim::apply_assignment(const Assignment& assignment, double at) {
  if (at < now_) throw std::invalid_argument("apply_assignment: time is in the past");
  for (const auto& [key, port] : assignment.port_of)
    if (port < 0 || port >= n_ports()) throw std::invalid_argument("apply_assignment: port index out of range");
  run_until(at);
  routes_.clear();
  for (const auto& [key, port] : assignment.port_of) routes_.emplace(key, port);
}

bool BundleSim::offer_packet(const Packet& packet, const FlowKey& key) {
  if (packet.timestamp < now_) throw std::invalid_argument("offer_packet: packet is in the past");
  run_until(packet.timestamp);
  auto [it, inserted] = routes_.try_emplace(key, 0);
  if (inserted) {
    it->second = assign_random(rng_, bundle_);
    ++random_placements_;
  }
  const int port = it->second;
  const bool accepted = links_[static_cast<std::size_t>(port)].offer(now_, packet.size, next_seq_++);
  if (event_log_) log(now_, port, accepted ? "arrival" : "drop");
  return accepted;
}

void BundleSim::run_until(double t) {
  if (t < now_) throw std::invalid_argument("run_until: time is in the past");
  while (true) {
    int port = -1;
    double when = Link::kNever;
    for (int p = 0; p < n_ports(); ++p) {
      const double e = links_[static_cast<std::size_t>(p)].next_event();
      if (e < when) {
        when = e;
        port = p;
      }
    }
    if (port < 0 || when > t) break;
    now_ = when;
    Link& link = links_[static_cast<std::size_t>(port)];
    const LinkMode before = link.mode();
    auto departed = link.fire(when);
    if (departed && on_departure_) on_departure_(port, *departed, when);
    if (event_log_) {
      if (departed)
        log(when, port, "departure");
      else
        log(when, port, before == LinkMode::kWaking ? "wake_done" : "sleep_done");
    }
  }
  now_ = t;
}

void BundleSim::checkpoint() { checkpoints_[now_] = counters(); }

std::vector<LinkCounters> BundleSim::counters() const {
  std::vector<LinkCounters> out;
  out.reserve(links_.size());
  for (const auto& l : links_) out.push_back(l.counters_at(now_));
  return out;
}

std::vector<LinkIntervalMetrics> BundleSim::interval_metrics(double from, double to) const {
  if (!(from < to) || to > now_) throw std::invalid_argument("interval_metrics: need from < to <= now");
  auto lookup = [this](double t) {
    if (auto it = checkpoints_.find(t); it != checkpoints_.end()) return it->second;
    if (t == now_) return counters();
    throw std::invalid_argument("interval_metrics: no checkpoint at requested time");
  };
  const auto a = lookup(from);
  const auto b = lookup(to);

  std::vector<LinkIntervalMetrics> out(links_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    auto& m = out[i];
    for (int k = 0; k < kLinkModeCount; ++k)
      m.mode_time.seconds[k] = b[i].mode_time.seconds[k] - a[i].mode_time.seconds[k];
    m.energy_fraction = measured_consumption(m.mode_time, timings_.sigma_off);
    m.packets_offered = b[i].packets_offered - a[i].packets_offered;
    m.bytes_offered = b[i].bytes_offered - a[i].bytes_offered;
    m.loss_count = b[i].packets_dropped - a[i].packets_dropped;
    m.packets_sent = b[i].packets_sent - a[i].packets_sent;
    m.bytes = b[i].bytes_sent - a[i].bytes_sent;
    m.sum_delay = b[i].sum_delay - a[i].sum_delay;
    if (m.packets_sent > 0) m.mean_delay = m.sum_delay / static_cast<double>(m.packets_sent);
  }
  return out;
}

std::optional<int> BundleSim::route_of(const FlowKey& key) const {
  if (auto it = routes_.find(key); it != routes_.end()) return it->second;
  return std::nullopt;
}

void BundleSim::set_event_log(std::ostream* out) {
  event_log_ = out;
  if (event_log_) *event_log_ << "time,port,event,queue_len,mode\n";
}

void BundleSim::log(double t, int port, std::string_view event) const {
  const Link& l = links_[static_cast<std::size_t>(port)];
  char ts[32];
  std::snprintf(ts, sizeof ts, "%.12g", t);
  *event_log_ << ts << ',' << port << ',' << event << ',' << l.queue_length() << ',' << to_string(l.mode()) << '\n';
}

}  // namespace eeb
