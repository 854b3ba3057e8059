#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cbond/phy.hpp"

namespace cbond {

// Raised for malformed or schema-violating scenario input.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double saturated_load = std::numeric_limits<double>::infinity();

// A contiguous block of basic channels, 1-based and inclusive at both ends.
struct channel_range {
  int low = 1;
  int high = 1;

  int width() const { return high - low + 1; }
  bool contains(int ch) const { return ch >= low && ch <= high; }
  bool operator==(const channel_range&) const = default;
};

// Two transmissions interfere only if their channel blocks share at least
// one basic channel.
bool channels_overlap(const channel_range& a, const channel_range& b);

struct node_config {
  double offered_bps = saturated_load;  // offered load in bits/s; inf = saturated
  double packet_bits = 12000;
  double mean_backoff = 72e-6;          // E[B] in seconds
  std::optional<int> cw_slots;          // set when the file gave a window instead of a mean
  double p_noise = 0;
  double p_hidden = 0;
  double p_ext = 0;
  std::optional<double> airtime;        // fixed E[T] in seconds, bypasses the rate table

  bool saturated() const { return std::isinf(offered_bps); }
  double arrival_rate() const { return offered_bps / packet_bits; }  // packets/s
};

struct wlan_config {
  std::string id;
  channel_range channel;
  int snr_class = 0;  // 1..4 selects a rate-table row by width; 0 = airtime override mode
  std::vector<node_config> nodes;

  bool airtime_mode() const { return snr_class == 0; }
};

struct network_scenario {
  int n_basic_channels = 0;
  std::vector<wlan_config> wlans;
  // Pairs of wlan indices within carrier-sense range of each other. When
  // absent every pair is in range (dense deployments).
  std::optional<std::vector<std::pair<int, int>>> cs_adjacency;
  mac_constants mac;

  int wlan_index(std::string_view id) const;  // -1 if unknown
  bool adjacent(int i, int k) const;
};

// Checks every schema rule that is not pure syntax: channel bounds, loads,
// probabilities, airtime-override consistency, adjacency indices, id
// uniqueness. Throws parse_error with the offending wlan/node named.
void validate(const network_scenario& s);

// Symmetric, irreflexive relation over wlan indices: i and k conflict when
// they are within carrier-sense range AND their channels share a basic
// channel. Conflicting wlans can never transmit simultaneously.
std::vector<std::vector<bool>> conflict_graph(const network_scenario& s);

// Effective per-node derived values used all over the solver and simulator.
double node_mean_tx(const network_scenario& s, int wlan, int node);       // E[T], s
double node_success_prob(const network_scenario& s, int wlan, int node);  // eta
double node_delivered_bits(const network_scenario& s, int wlan, int node);

// Rate-table class for a width: 1..4 for the doubling widths, -1 otherwise.
int snr_class_for_width(int width);

}  // namespace cbond
