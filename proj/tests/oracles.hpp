#pragma once

// Test-only reference implementations. These deliberately share no code
// with the library paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace eeb::oracle {

/// First-fit decreasing over at most `max_bins` bins opened in order; items
/// that fit nowhere once all bins are open go to the emptiest bin. Returns
/// the number of non-empty bins.
inline int ffd_bins(std::vector<int> items, int capacity, int max_bins) {
  std::sort(items.begin(), items.end(), std::greater<>());
  std::vector<int> bins;
  for (int d : items) {
    bool placed = false;
    for (int& b : bins) {
      if (b + d <= capacity) {
        b += d;
        placed = true;
        break;
      }
    }
    if (placed) continue;
    if (static_cast<int>(bins.size()) < max_bins) {
      bins.push_back(d);
    } else {
      *std::min_element(bins.begin(), bins.end()) += d;
    }
  }
  return static_cast<int>(bins.size());
}

/// Consumption curve in long double, straight from the closed form.
inline long double sigma_ld(long double rho, long double mu, long double ts, long double tw, long double off) {
  if (rho == 0.0L) return off;
  const long double lambda = mu * rho;
  const long double toff = std::exp(-lambda * ts) / lambda;
  return 1.0L - (1.0L - off) * (1.0L - rho) * toff / (toff + ts + tw);
}

/// Calls `fn` with every vector of `n` non-negative multiples of `step` that
/// sum to `total` with each entry at most `cap` (all in grid units).
inline void for_each_allocation(int n, int total, int cap, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> alloc(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      if (left <= cap) {
        alloc[static_cast<std::size_t>(i)] = left;
        fn(alloc);
      }
      return;
    }
    for (int v = 0; v <= std::min(cap, left); ++v) {
      alloc[static_cast<std::size_t>(i)] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, total);
}

}  // namespace eeb::oracle
