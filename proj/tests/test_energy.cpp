#include "doctest.h"
#include "eebundle/energy.hpp"
#include "oracles.hpp"

using namespace eeb;

namespace {

// 1500 B frames on 10 Gb/s with the standard transition times.
const EnergyParams kStd = EnergyParams::for_link(10e9, 1500);

}  // namespace

TEST_CASE("mu follows capacity and packet size") {
  CHECK(kStd.mu == doctest::Approx(10e9 / 12000.0));
  CHECK_THROWS_AS(EnergyParams::for_link(0, 1500), std::invalid_argument);
  CHECK_THROWS_AS(EnergyParams::for_link(1e9, 1500, 1e-6, 1e-6, 0.0), std::invalid_argument);
}

TEST_CASE("expected off time") {
  // 30-digit reference: 2.98504827103209635974613843983e-6
  CHECK(expected_toff(0.25, kStd) == doctest::Approx(2.98504827103209636e-6).epsilon(1e-12));

  EnergyParams p;
  p.mu = 1e6;
  p.t_sleep = 0.0;
  CHECK(expected_toff(1.0, p) == doctest::Approx(1e-6).epsilon(1e-15));

  double prev = expected_toff(0.001, kStd);
  for (int i = 2; i <= 1000; ++i) {
    const double v = expected_toff(i / 1000.0, kStd);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(expected_toff(0.0, kStd), std::invalid_argument);
  CHECK_THROWS_AS(expected_toff(1.5, kStd), std::invalid_argument);
}

TEST_CASE("sigma end points and reference values") {
  CHECK(sigma(1.0, kStd) == 1.0);
  CHECK(sigma(0.0, kStd) == 0.1);
  // 30-digit references for 1500 B at 10 Gb/s.
  CHECK(sigma(0.1, kStd) == doctest::Approx(0.518204324442468040).epsilon(1e-12));
  CHECK(sigma(0.25, kStd) == doctest::Approx(0.793237803763770733).epsilon(1e-12));
  CHECK(sigma(0.5, kStd) == doctest::Approx(0.945672397212749782).epsilon(1e-12));
  CHECK(sigma(0.75, kStd) == doctest::Approx(0.987881692607296661).epsilon(1e-12));
  CHECK(sigma(0.9, kStd) == doctest::Approx(0.996899954792516647).epsilon(1e-12));
  CHECK_THROWS_AS(sigma(-0.01, kStd), std::invalid_argument);
  CHECK_THROWS_AS(sigma(1.01, kStd), std::invalid_argument);
}

TEST_CASE("sigma is continuous and non-decreasing") {
  double prev = sigma(0.0, kStd);
  for (int i = 1; i <= 100; ++i) {
    const double v = sigma(i / 100.0, kStd);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(sigma(1e-9, kStd) == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(sigma(1.0 - 1e-9, kStd) == doctest::Approx(1.0).epsilon(1e-6));

  for (int i = 1; i < 100; ++i) {
    const double rho = i / 100.0;
    CHECK(sigma(rho, kStd) == doctest::Approx(static_cast<double>(oracle::sigma_ld(
                                  rho, kStd.mu, kStd.t_sleep, kStd.t_wake, kStd.sigma_off)))
                                  .epsilon(1e-12));
  }
}

TEST_CASE("waterfill fills ports one at a time") {
  const BundleConfig five{5, 10e9};
  const auto w = waterfill(32.5e9, five);
  CHECK(w == std::vector<double>{10e9, 10e9, 10e9, 2.5e9, 0.0});
  CHECK(waterfill(0.0, five) == std::vector<double>(5, 0.0));
  CHECK(waterfill(50e9, five) == std::vector<double>(5, 10e9));
  CHECK_THROWS_AS(waterfill(50.1e9, five), std::invalid_argument);
  CHECK_THROWS_AS(waterfill(-1.0, five), std::invalid_argument);

  for (int i = 0; i <= 200; ++i) {
    const double load = 50e9 * i / 200.0;
    const auto v = waterfill(load, five);
    double sum = 0.0;
    int partial = 0;
    for (double x : v) {
      sum += x;
      if (x > 0.0 && x < 10e9) ++partial;
    }
    CHECK(sum == doctest::Approx(load).epsilon(1e-15));
    CHECK(partial <= 1);
  }
}

TEST_CASE("bundle lower bound") {
  const BundleConfig five{5, 10e9};
  // 30-digit reference: 0.778647560752754146537231785437
  CHECK(bundle_lower_bound(32.5e9, five, kStd) == doctest::Approx(0.778647560752754147).epsilon(1e-12));
  CHECK(std::abs(bundle_lower_bound(32.5e9, five, kStd) - 0.785) <= 0.01);
  CHECK(bundle_lower_bound(0.0, five, kStd) == doctest::Approx(0.1));
  CHECK(bundle_lower_bound(50e9, five, kStd) == doctest::Approx(1.0));
}

TEST_CASE("waterfill beats every 3-port split on a coarse grid") {
  const BundleConfig three{3, 10e9};
  for (int total = 0; total <= 30; total += 3) {
    const double best = bundle_lower_bound(total * 1e9, three, kStd);
    oracle::for_each_allocation(3, total, 10, [&](const std::vector<int>& alloc) {
      const std::vector<double> loads{alloc[0] * 1e9, alloc[1] * 1e9, alloc[2] * 1e9};
      CHECK(best <= mean_sigma(loads, 10e9, kStd) + 1e-12);
    });
  }
}

TEST_CASE("measured consumption") {
  ModeTimes lpi;
  lpi[LinkMode::kLpi] = 3.0;
  CHECK(measured_consumption(lpi, 0.1) == doctest::Approx(0.1));
  ModeTimes active;
  active[LinkMode::kActive] = 2.0;
  CHECK(measured_consumption(active, 0.1) == doctest::Approx(1.0));
  ModeTimes half;
  half[LinkMode::kActive] = 1.0;
  half[LinkMode::kLpi] = 1.0;
  CHECK(measured_consumption(half, 0.1) == doctest::Approx(0.55));
  ModeTimes transitions;
  transitions[LinkMode::kGoingToSleep] = 1.0;
  transitions[LinkMode::kWaking] = 1.0;
  CHECK(measured_consumption(transitions, 0.1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(measured_consumption(ModeTimes{}, 0.1), std::invalid_argument);
}
