#include <random>
#include <sstream>

#include "doctest.h"
#include "eebundle/linksim.hpp"
#include "properties.hpp"

using namespace eeb;

namespace {

const EeeTimings kStd10G{kStdSleepTime, kStdWakeTime, kStdSigmaOff, 10e9};
const FlowKey kFlow{false, 0, 7};

Packet pkt(double t, std::uint32_t size = 1500) {
  Packet p;
  p.timestamp = t;
  p.size = size;
  return p;
}

// Pins every flow in `keys` to `port`.
Assignment pin(std::initializer_list<FlowKey> keys, int port, int n_ports) {
  Assignment a(n_ports);
  for (const auto& k : keys) a.place(k, 0.0, port);
  return a;
}

}  // namespace

TEST_CASE("drop-tail at the buffer limit") {
  BundleSim sim(1, kStd10G, 1, 1);
  CHECK(sim.offer_packet(pkt(0.0), kFlow));
  CHECK_FALSE(sim.offer_packet(pkt(0.0), kFlow));
  CHECK(sim.link(0).counters_at(sim.now()).packets_dropped == 1);
  CHECK(sim.link(0).queue_length() == 1);
}

TEST_CASE("waking an idle link costs t_wake before service") {
  BundleSim sim(1, kStd10G, 10, 1);
  std::vector<double> delays;
  sim.set_departure_observer([&](int, const Link::Queued& q, double when) { delays.push_back(when - q.arrival); });
  sim.offer_packet(pkt(0.0), kFlow);
  CHECK(sim.link(0).mode() == LinkMode::kWaking);
  sim.run_until(1.0);
  REQUIRE(delays.size() == 1);
  CHECK(delays[0] == doctest::Approx(5.68e-6).epsilon(1e-9));
  CHECK(sim.link(0).mode() == LinkMode::kLpi);

  const auto c = sim.link(0).counters_at(sim.now());
  CHECK(c.mode_time[LinkMode::kWaking] == doctest::Approx(4.48e-6).epsilon(1e-9));
  CHECK(c.mode_time[LinkMode::kActive] == doctest::Approx(1.2e-6).epsilon(1e-9));
  CHECK(c.mode_time[LinkMode::kGoingToSleep] == doctest::Approx(2.28e-6).epsilon(1e-9));
  CHECK(c.mode_time.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("an arrival during sleep waits for sleep completion then wakes") {
  BundleSim sim(1, kStd10G, 10, 1);
  std::vector<double> delays;
  sim.set_departure_observer([&](int, const Link::Queued& q, double when) { delays.push_back(when - q.arrival); });
  sim.offer_packet(pkt(0.0), kFlow);
  const double sleep_start = 5.68e-6;
  sim.offer_packet(pkt(sleep_start + 1e-6), kFlow);
  CHECK(sim.link(0).mode() == LinkMode::kGoingToSleep);
  sim.run_until(1.0);
  REQUIRE(delays.size() == 2);
  CHECK(delays[1] == doctest::Approx((2.28e-6 - 1e-6) + 4.48e-6 + 1.2e-6).epsilon(1e-9));
}

TEST_CASE("run_until edge cases") {
  BundleSim sim(3, kStd10G, 10, 1);
  sim.run_until(0.0);
  CHECK(sim.now() == 0.0);
  sim.run_until(2.0);
  for (int p = 0; p < 3; ++p) {
    CHECK(sim.link(p).mode() == LinkMode::kLpi);
    CHECK(sim.link(p).counters_at(sim.now()).mode_time[LinkMode::kLpi] == 2.0);
  }
  sim.run_until(2.0);
  CHECK(sim.now() == 2.0);
  CHECK_THROWS_AS(sim.run_until(1.0), std::invalid_argument);
  CHECK_THROWS_AS(sim.offer_packet(pkt(1.5), kFlow), std::invalid_argument);
}

TEST_CASE("departures precede arrivals at the same instant") {
  double departure = 0.0;
  {
    BundleSim probe(1, kStd10G, 1, 1);
    probe.set_departure_observer([&](int, const Link::Queued&, double when) { departure = when; });
    probe.offer_packet(pkt(0.0), kFlow);
    probe.run_until(1e-3);
  }
  BundleSim sim(1, kStd10G, 1, 1);
  sim.offer_packet(pkt(0.0), kFlow);
  CHECK(sim.offer_packet(pkt(departure), kFlow));  // the buffer slot frees first
}

TEST_CASE("assignments route later packets without migrating queued ones") {
  const FlowKey other{false, 0, 8};
  BundleSim sim(2, kStd10G, 100, 1);
  sim.apply_assignment(pin({kFlow}, 0, 2), 0.0);
  sim.apply_assignment(pin({kFlow}, 0, 2), 0.0);
  CHECK(sim.route_of(kFlow) == 0);

  sim.offer_packet(pkt(0.0), kFlow);
  sim.offer_packet(pkt(0.0), kFlow);
  sim.apply_assignment(pin({kFlow}, 1, 2), 0.0);
  CHECK(sim.link(0).queue_length() == 2);
  sim.offer_packet(pkt(0.0), kFlow);
  CHECK(sim.link(1).queue_length() == 1);

  CHECK_FALSE(sim.route_of(other).has_value());
  sim.offer_packet(pkt(1e-3), other);
  CHECK(sim.route_of(other).has_value());
  CHECK(sim.random_placements() == 1);

  CHECK_THROWS_AS(sim.apply_assignment(pin({kFlow}, 0, 2), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sim.apply_assignment(pin({kFlow}, 5, 2), 1.0), std::invalid_argument);
}

TEST_CASE("interval metrics between checkpoints") {
  BundleSim sim(2, kStd10G, 100000, 1);
  sim.checkpoint();
  sim.apply_assignment(pin({kFlow}, 1, 2), 0.0);
  // Saturate port 1 for 1 ms: one 1500 B frame per 1.2 us, all queued up front.
  for (int i = 0; i < 900; ++i) sim.offer_packet(pkt(0.0), kFlow);
  sim.run_until(1e-3);
  sim.checkpoint();
  const auto m = sim.interval_metrics(0.0, 1e-3);
  CHECK(m[0].energy_fraction == doctest::Approx(0.1));
  CHECK(m[1].energy_fraction == doctest::Approx(1.0));
  CHECK(m[1].packets_sent == 829);  // (1 ms - 4.48 us) / 1.2 us, floored
  CHECK(m[1].bytes == 829u * 1500u);
  REQUIRE(m[1].mean_delay.has_value());
  CHECK_FALSE(m[0].mean_delay.has_value());
  CHECK_THROWS_AS(sim.interval_metrics(0.0, 0.5e-3), std::invalid_argument);
  CHECK_THROWS_AS(sim.interval_metrics(1e-3, 0.0), std::invalid_argument);
}

TEST_CASE("simulated Poisson link matches the analytic curve") {
  const double rho = 0.5;
  BundleSim sim(1, kStd10G, 1u << 20, 1);
  sim.checkpoint();
  std::mt19937_64 rng(77);
  const double lambda = rho * 10e9 / 12000.0;
  std::exponential_distribution<double> gap(lambda);
  for (double t = gap(rng); t < 10.0; t += gap(rng)) sim.offer_packet(pkt(t), kFlow);
  sim.run_until(10.0);
  const double measured = sim.interval_metrics(0.0, 10.0)[0].energy_fraction;
  const double model = sigma(rho, EnergyParams::for_link(10e9, 1500));
  CHECK(std::abs(measured - model) <= 0.02);
}

TEST_CASE("simulated energy grows with load") {
  double prev = 0.0;
  for (double rho : {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
    BundleSim sim(1, kStd10G, 1u << 20, 1);
    sim.checkpoint();
    std::mt19937_64 rng(5);
    if (rho > 0) {
      std::exponential_distribution<double> gap(rho * 10e9 / 12000.0);
      for (double t = gap(rng); t < 0.2; t += gap(rng)) sim.offer_packet(pkt(t), kFlow);
    }
    sim.run_until(0.2);
    const double e = sim.interval_metrics(0.0, 0.2)[0].energy_fraction;
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("event log format") {
  BundleSim sim(1, kStd10G, 10, 1);
  std::ostringstream log;
  sim.set_event_log(&log);
  sim.offer_packet(pkt(0.0), kFlow);
  sim.run_until(1e-3);
  std::istringstream in(log.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "time,port,event,queue_len,mode");
  CHECK(lines[1] == "0,0,arrival,1,WAKING");
  CHECK(lines[2].find(",0,wake_done,1,ACTIVE") != std::string::npos);
  CHECK(lines[3].find(",0,departure,0,GOING_TO_SLEEP") != std::string::npos);
  CHECK(lines[4].find(",0,sleep_done,0,LPI") != std::string::npos);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(BundleSim(0, kStd10G, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(BundleSim(1, kStd10G, 0, 1), std::invalid_argument);
  EeeTimings bad = kStd10G;
  bad.sigma_off = 1.5;
  CHECK_THROWS_AS(BundleSim(1, bad, 10, 1), std::invalid_argument);
}

TEST_CASE("link invariants over random scenarios") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto err = props::linksim_scenario(seed);
    INFO("seed " << seed);
    CHECK(err.empty());
  }
}
