#pragma once

#include <span>
#include <vector>

#include "cbond/ctmn.hpp"
#include "cbond/scenario.hpp"

namespace cbond {

// Sum of natural logs of the throughputs (the proportional-fairness
// objective), in nats. Any non-positive entry starves the objective: the
// result is -infinity and *starved is set.
double proportional_fairness(std::span<const double> throughput_bps, bool* starved = nullptr);

// Jain's fairness index: (sum x)^2 / (n sum x^2), in [1/n, 1]. An all-zero
// vector is treated as perfectly fair (everyone got the same nothing).
double jain_index(std::span<const double> throughput);

// Fraction of the system's basic channels covered by at least one wlan.
double spectrum_utilization(std::span<const channel_range> channels, int n_basic_channels);
double spectrum_utilization(const network_scenario& s);

struct metrics_report {
  double aggregate_mbps = 0;
  double pf_nats = 0;  // -inf when starved
  bool starved = false;
  double jfi = 0;      // over per-wlan throughputs
  double spectrum_util = 0;
};

metrics_report compute_metrics(const network_scenario& s, const solve_result& solved);

}  // namespace cbond
