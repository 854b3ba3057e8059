#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cbond/scenario.hpp"

namespace cbond {

// The interaction model can run per node, or — when every node is saturated
// and each wlan's nodes are interchangeable — per wlan, which collapses the
// state space dramatically while producing identical wlan throughputs.
enum class solve_mode { node_centric, wlan_centric };

// One independent transmitter: a node, or a whole wlan after the saturated
// reduction (node == -1).
struct transmitter {
  int wlan = -1;
  int node = -1;
  double lambda = 0;          // backoff completion rate while contending, 1/s
  double mean_tx = 0;         // E[T], s
  double eta = 1;             // per-frame delivery probability
  double delivered_bits = 0;  // payload bits per successful transmission
  double offered_bps = saturated_load;

  bool saturated() const { return std::isinf(offered_bps); }
};

std::vector<transmitter> build_transmitters(const network_scenario& s, solve_mode mode);

// Bit i of mask u is set when transmitters u and i can never be active
// together: same wlan, or conflicting wlans. At most 64 transmitters.
std::vector<std::uint64_t> conflict_masks(const network_scenario& s,
                                          const std::vector<transmitter>& ts);

inline constexpr std::size_t default_max_states = std::size_t{1} << 24;

// All sets of transmitters that may be active simultaneously (independent
// sets of the conflict relation), sorted by popcount then numeric value so
// listings and tests are deterministic.
struct state_space {
  std::vector<std::uint64_t> states;
  int n_transmitters = 0;
};

state_space enumerate_states(std::span<const std::uint64_t> masks,
                             std::size_t max_states = default_max_states);
state_space feasible_states(const network_scenario& s, solve_mode mode,
                            std::size_t max_states = default_max_states);

// Stationary distribution of the reversible dynamics: pi(state) proportional
// to the product of member activity ratios. Computed in log space so huge or
// tiny thetas cannot overflow.
std::vector<double> stationary_distribution(const state_space& space,
                                            std::span<const double> theta);

// Per-transmitter probability of being active: sum of pi over states
// containing it.
std::vector<double> active_probabilities(const state_space& space, std::span<const double> pi);

// Long-run delivered bits/s given the fraction of time spent transmitting.
double node_throughput_bps(double active_prob, double eta, double delivered_bits,
                           double mean_tx);

struct solve_options {
  double tol = 1e-6;
  int max_iter = 10000;
  double damping = 0.5;
  std::size_t max_states = default_max_states;
};

struct node_result {
  int wlan = -1;
  int node = -1;  // -1 when solved per wlan
  double rho = 0;
  double theta = 0;
  double throughput_bps = 0;
  bool saturated = false;
};

struct solve_result {
  std::vector<node_result> nodes;
  std::size_t n_states = 0;
  int iterations = 0;
  bool converged = false;

  double wlan_throughput_bps(int wlan) const;
  std::vector<double> per_wlan_bps(int n_wlans) const;
  double aggregate_bps() const;
};

// Fixed point of the coupled load/contention system: saturated transmitters
// pin rho = 1; the rest scale rho until their time-active matches what their
// offered load requires (counting retransmissions), or they saturate too.
solve_result solve_fixed_point(const network_scenario& s,
                               solve_mode mode = solve_mode::node_centric,
                               const solve_options& opt = {});

// One saturated supernode per wlan with the summed attempt rate. Requires
// every node saturated and per-wlan homogeneous airtime/payload/loss
// parameters; throws model_error otherwise.
network_scenario wlan_centric_reduce(const network_scenario& s);

}  // namespace cbond
