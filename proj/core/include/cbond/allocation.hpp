#pragma once

#include <span>
#include <vector>

#include "cbond/coloring.hpp"
#include "cbond/ctmn.hpp"
#include "cbond/rng.hpp"
#include "cbond/scenario.hpp"

namespace cbond {

// One channel block per wlan, in wlan order.
using allocation_plan = std::vector<channel_range>;

// Widths with a rate row, capped at w_max and at the system size.
std::vector<int> allowed_widths(int w_max, int n_basic_channels);

// How many wlans sit on the most contended basic channel.
int max_channel_cover(const allocation_plan& plan, int n_basic_channels);

// Uniform placement: any low from 1..n-width+1.
channel_range random_allocation(int n_basic_channels, int width, rng& r);

// Standardised channelisation: only aligned blocks (low = width*z + 1), so
// equal-width blocks either coincide or are disjoint.
channel_range ac_allocation(int n_basic_channels, int width, rng& r);

struct waterfill_result {
  std::vector<int> widths;  // per wlan
  allocation_plan plan;
  bool wrapped = false;  // more wlans than channels: width-1 blocks reuse channels round-robin

  int max_cover(int n_basic_channels) const;  // busiest basic channel's wlan count
};

// Round-robin width doubling: each wlan in turn doubles while the doubled
// total still fits (2*c_i + sum of the others <= n). A wlan already at w_max
// is skipped; the first wlan the capacity test rejects ends the growth phase
// for everyone. Blocks are then laid out contiguously.
waterfill_result waterfilling(int m, int n_basic_channels, int w_max = 8);

struct colored_waterfill_result {
  coloring_result coloring;    // over the carrier-sense graph
  waterfill_result groups;     // one block per color class
  allocation_plan plan;        // per wlan
};

// Wlans that can hear each other land in different classes; classes then
// share the spectrum as wlan groups via waterfilling.
colored_waterfill_result color_and_waterfill(const network_scenario& s, int w_max = 8);

// ---- Proportional-fair scheduling over candidate plans ----

struct candidate_set {
  std::vector<allocation_plan> plans;
};

// Role rotations of the waterfilling solution: every distinct permutation of
// its width multiset, laid out contiguously.
candidate_set waterfill_rotation_candidates(int m, int n_basic_channels, int w_max = 8);

// Every contiguous plan whose widths all come from the given set. Grows as
// (#blocks)^m; fine for the small systems this is used on.
candidate_set exhaustive_candidates(int m, int n_basic_channels, std::span<const int> widths);

struct schedule_entry {
  allocation_plan plan;
  double weight = 0;
};

struct pf_options {
  double tol = 1e-6;       // KKT residual
  long max_iter = 100000;
  double prune = 1e-9;     // weights below this are dropped from the result
};

struct pf_result {
  std::vector<schedule_entry> schedule;
  std::vector<double> mean_throughput_bps;  // per wlan under the schedule
  double objective = 0;                     // sum of log mean throughput
  long iterations = 0;
  bool converged = false;
  double kkt_residual = 0;
};

// Maximises sum_i log of time-averaged wlan throughput over probability
// weights on the candidate plans (all nodes saturated). Multiplicative
// updates with a final stationarity check over every candidate, including
// pruned ones.
pf_result pf_schedule(const network_scenario& s, const candidate_set& candidates,
                      const pf_options& opt = {});

struct support_check {
  bool ok = true;
  std::vector<int> offending;  // indices into the checked schedule
  std::vector<int> reference_widths;
  int reference_cover = 1;
};

// Does every scheduled plan (weight above weight_tol) look like a
// waterfilling solution: same width multiset as waterfilling(m, n, w_max)
// and no worse a max per-channel cover than its canonical layout?
support_check conjecture_support_check(const pf_result& pf, int n_basic_channels,
                                       int w_max = 8, double weight_tol = 1e-6);

// Convenience: scenario with its channels replaced by the plan.
network_scenario with_plan(const network_scenario& s, const allocation_plan& plan);

}  // namespace cbond
