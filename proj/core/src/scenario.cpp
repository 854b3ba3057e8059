#include "cbond/scenario.hpp"

#include <set>

namespace cbond {

bool channels_overlap(const channel_range& a, const channel_range& b) {
  return a.low <= b.high && b.low <= a.high;
}

int network_scenario::wlan_index(std::string_view id) const {
  for (std::size_t i = 0; i < wlans.size(); ++i)
    if (wlans[i].id == id) return static_cast<int>(i);
  return -1;
}

bool network_scenario::adjacent(int i, int k) const {
  if (i == k) return false;
  if (!cs_adjacency) return true;
  for (const auto& [a, b] : *cs_adjacency)
    if ((a == i && b == k) || (a == k && b == i)) return true;
  return false;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw parse_error(what); }

}  // namespace

void validate(const network_scenario& s) {
  if (s.n_basic_channels < 1) fail("n_basic_channels must be at least 1");
  if (s.wlans.empty()) fail("scenario needs at least one wlan");

  std::set<std::string> seen_ids;
  for (const auto& w : s.wlans) {
    const std::string where = "wlan '" + w.id + "': ";
    if (w.id.empty()) fail("wlan ids must be non-empty");
    if (!seen_ids.insert(w.id).second) fail("duplicate wlan id '" + w.id + "'");
    if (w.channel.low < 1 || w.channel.high > s.n_basic_channels || w.channel.low > w.channel.high)
      fail(where + "channel block must satisfy 1 <= low <= high <= n_basic_channels");
    if (w.snr_class < 0 || w.snr_class > 4)
      fail(where + "snr_class must be 1..4 or \"override\"");
    if (w.nodes.empty()) fail(where + "needs at least one node");

    for (std::size_t j = 0; j < w.nodes.size(); ++j) {
      const auto& n = w.nodes[j];
      const std::string at = where + "node " + std::to_string(j) + ": ";
      if (!n.saturated() && !(n.offered_bps > 0))
        fail(at + "load must be positive or \"saturated\"");
      if (!(n.packet_bits > 0)) fail(at + "packet_bits must be positive");
      if (!(n.mean_backoff > 0)) fail(at + "backoff must be positive");
      if (n.cw_slots && *n.cw_slots < 1) fail(at + "cw_slots must be at least 1");
      for (double p : {n.p_noise, n.p_hidden, n.p_ext})
        if (!(p >= 0.0) || p >= 1.0) fail(at + "loss probabilities must lie in [0, 1)");
      if (w.airtime_mode() && !n.airtime)
        fail(at + "airtime-override wlans need airtime_us on every node");
      if (!w.airtime_mode() && n.airtime)
        fail(at + "airtime_us requires snr_class \"override\"");
      if (n.airtime && !(*n.airtime > 0)) fail(at + "airtime_us must be positive");
    }

    // Rate-table wlans must use a width that has a row; override wlans may
    // use any width.
    if (!w.airtime_mode() && !find_mcs(w.channel.width()))
      fail(where + "width " + std::to_string(w.channel.width()) +
           " has no rate row; use snr_class \"override\" with airtime_us");
  }

  if (s.cs_adjacency) {
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : *s.cs_adjacency) {
      const int m = static_cast<int>(s.wlans.size());
      if (a < 0 || a >= m || b < 0 || b >= m) fail("cs_adjacency references an unknown wlan");
      if (a == b) fail("cs_adjacency cannot pair a wlan with itself");
      auto key = std::minmax(a, b);
      if (!seen.insert(key).second) fail("duplicate cs_adjacency pair");
    }
  }
}

std::vector<std::vector<bool>> conflict_graph(const network_scenario& s) {
  const int m = static_cast<int>(s.wlans.size());
  std::vector<std::vector<bool>> g(m, std::vector<bool>(m, false));
  for (int i = 0; i < m; ++i)
    for (int k = i + 1; k < m; ++k) {
      const bool c =
          s.adjacent(i, k) && channels_overlap(s.wlans[i].channel, s.wlans[k].channel);
      g[i][k] = g[k][i] = c;
    }
  return g;
}

double node_mean_tx(const network_scenario& s, int wlan, int node) {
  const auto& w = s.wlans[wlan];
  const auto& n = w.nodes[node];
  if (n.airtime) return *n.airtime;
  return tx_duration(w.channel.width(), n.packet_bits, s.mac);
}

double node_success_prob(const network_scenario& s, int wlan, int node) {
  const auto& n = s.wlans[wlan].nodes[node];
  return success_probability(n.p_noise, n.p_hidden, n.p_ext);
}

int snr_class_for_width(int width) {
  switch (width) {
    case 1: return 1;
    case 2: return 2;
    case 4: return 3;
    case 8: return 4;
    default: return -1;
  }
}

double node_delivered_bits(const network_scenario& s, int wlan, int node) {
  const auto& w = s.wlans[wlan];
  const auto& n = w.nodes[node];
  // Airtime overrides describe a single unaggregated frame exchange; the
  // rate-table path always ships a full aggregate.
  return n.airtime ? n.packet_bits : static_cast<double>(s.mac.n_a) * n.packet_bits;
}

}  // namespace cbond
