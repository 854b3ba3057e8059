#pragma once

#include <cstdint>
#include <vector>

#include "cbond/ctmn.hpp"
#include "cbond/scenario.hpp"

namespace cbond {

// Three cross-validation regimes:
//  - slotted_capture: DCF slots and DIFS; simultaneous expiries collide only
//    within a wlan (ideal capture between wlans).
//  - slotted: same, but any conflicting overlap destroys both frames.
//  - continuous: exponential backoff in continuous time; collisions cannot
//    happen. This is exactly the interaction model's dynamics.
enum class sim_mode { slotted_capture, slotted, continuous };

enum class tx_dist { exponential, deterministic };

const char* to_string(sim_mode m);
sim_mode sim_mode_from_string(const std::string& name);

struct sim_options {
  sim_mode mode = sim_mode::continuous;
  // Continuous mode only; slotted transmissions are always deterministic.
  tx_dist durations = tx_dist::exponential;
  double duration_s = 1000;
  std::uint64_t seed = 1;
};

struct sim_node_stats {
  int wlan = -1;
  int node = -1;
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;  // frames destroyed by a collision
  std::uint64_t failures = 0;    // frames destroyed by noise/hidden/external loss
  double delivered_bits = 0;
  double airtime_s = 0;

  double throughput_bps(double duration_s) const { return delivered_bits / duration_s; }
};

struct sim_result {
  std::vector<sim_node_stats> nodes;
  std::vector<double> channel_busy_s;  // union busy time per basic channel (1-based at [1])
  int max_intra_wlan_concurrency = 0;  // simultaneous transmitters within one wlan, peak
  double duration_s = 0;
  std::uint64_t seed = 0;
  sim_mode mode = sim_mode::continuous;

  double throughput_bps(int wlan, int node) const;
};

sim_result run_sim(const network_scenario& s, const sim_options& opt);

struct validation_row {
  int wlan = -1;
  int node = -1;
  double model_bps = 0;
  double sim_bps = 0;
  double rel_err = 0;  // (sim - model) / model
};

struct validation_report {
  std::vector<validation_row> rows;
  double max_abs_rel_err = 0;
  sim_result sim;
  solve_result model;
};

validation_report compare_model_sim(const network_scenario& s, const sim_options& sopt,
                                    const solve_options& mopt = {});

}  // namespace cbond
