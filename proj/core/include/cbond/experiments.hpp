#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cbond/allocation.hpp"
#include "cbond/ctmn.hpp"
#include "cbond/metrics.hpp"
#include "cbond/rng.hpp"
#include "cbond/scenario.hpp"

namespace cbond {

enum class axis_kind { n_channels, m_wlans, cw };

struct sweep_axis {
  axis_kind kind = axis_kind::n_channels;
  double lo = 1, hi = 1, step = 1;  // cw axis: step is a multiplier
};

std::vector<double> axis_values(const sweep_axis& axis);

struct width_policy {
  enum class kind { fixed, uniform } k = kind::fixed;
  int value = 1;  // fixed: the width; uniform: cap on the feasible width set
};

enum class alloc_scheme { uniform_random, ac_aligned, waterfill, colored_waterfill };

const char* to_string(alloc_scheme s);
alloc_scheme scheme_from_string(const std::string& name);

// Independent wlans, each with nodes_per_wlan saturated default nodes, widths
// drawn by the policy and placed by the scheme. Everyone is within
// carrier-sense range, so conflicts come from channel overlap alone.
network_scenario random_scenario(int m, int n, const width_policy& wp, alloc_scheme scheme,
                                 int nodes_per_wlan, rng& r);

struct sweep_spec {
  sweep_axis axis;
  int m = 6;
  int n = 8;
  int nodes_per_wlan = 2;
  width_policy widths;
  alloc_scheme scheme = alloc_scheme::uniform_random;
  int realizations = 1000;
  std::uint64_t seed = 1;
  std::optional<network_scenario> base;  // required for the cw axis
};

struct result_row {
  std::string scenario_id;
  int realization = 0;
  std::string wlan;
  int node = -1;  // -1: the row aggregates a whole wlan
  double rho = 0;
  double theta = 0;
  double throughput_mbps = 0;
  bool saturated = false;
  int iterations = 0;
  bool converged = true;
};

struct summary_row {
  double axis_value = 0;
  double mean_throughput_mbps = 0;  // mean per-wlan throughput
  double stderr_mbps = 0;           // standard error of that mean over realizations
  double jfi = 0;                   // mean per-realization Jain index over wlans
  double spectrum_utilization = 0;
};

struct sweep_output {
  std::vector<result_row> results;
  std::vector<summary_row> summary;
};

// Realization k always uses seed spec.seed + k, so runs are reproducible and
// a longer run's prefix matches a shorter one.
sweep_output run_sweep(const sweep_spec& spec);

struct histogram_spec {
  int m = 6;
  int n = 8;
  int width = 1;
  int nodes_per_wlan = 2;
  alloc_scheme scheme = alloc_scheme::uniform_random;
  int realizations = 10000;
  int bins = 40;
  std::uint64_t seed = 1;
};

struct histogram_output {
  std::vector<double> edges;         // bins+1 edges, from 0 to the solo throughput
  std::vector<std::uint64_t> counts;
  std::uint64_t samples = 0;
  double mean_mbps = 0;
  double solo_mbps = 0;  // contention-free upper bound used for the top edge

  double mass_above(double threshold_mbps) const;
};

// Distribution of individual wlan throughput across random deployments.
histogram_output run_histogram(const histogram_spec& spec);

struct channelisation_cell {
  int m = 0;
  int w_max = 0;
  alloc_scheme scheme = alloc_scheme::uniform_random;
  double mean_aggregate_mbps = 0;
  double stderr_mbps = 0;  // standard error of the aggregate mean
  double mean_jfi = 0;
};

// The density/width-cap grid: for each wlan count and width cap, draw widths
// uniformly from the feasible set and place them randomly or aligned.
std::vector<channelisation_cell> compare_channelisation(int n, const std::vector<int>& ms,
                                                        const std::vector<int>& w_maxes,
                                                        int realizations, std::uint64_t seed);

}  // namespace cbond
