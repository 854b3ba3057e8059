#include "cbond/metrics.hpp"

#include <cmath>
#include <limits>

namespace cbond {

double proportional_fairness(std::span<const double> throughput_bps, bool* starved) {
  if (starved) *starved = false;
  double sum = 0;
  for (double x : throughput_bps) {
    if (!(x > 0)) {
      if (starved) *starved = true;
      return -std::numeric_limits<double>::infinity();
    }
    sum += std::log(x);
  }
  return sum;
}

double jain_index(std::span<const double> throughput) {
  if (throughput.empty()) return 1.0;
  double sum = 0, sum_sq = 0;
  for (double x : throughput) {
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0) return 1.0;
  return sum * sum / (static_cast<double>(throughput.size()) * sum_sq);
}

double spectrum_utilization(std::span<const channel_range> channels, int n_basic_channels) {
  if (n_basic_channels < 1) throw model_error("n_basic_channels must be at least 1");
  std::vector<bool> covered(static_cast<std::size_t>(n_basic_channels) + 1, false);
  for (const auto& c : channels)
    for (int k = c.low; k <= c.high && k <= n_basic_channels; ++k) covered[k] = true;
  int used = 0;
  for (int k = 1; k <= n_basic_channels; ++k) used += covered[k];
  return static_cast<double>(used) / n_basic_channels;
}

double spectrum_utilization(const network_scenario& s) {
  std::vector<channel_range> channels;
  channels.reserve(s.wlans.size());
  for (const auto& w : s.wlans) channels.push_back(w.channel);
  return spectrum_utilization(channels, s.n_basic_channels);
}

metrics_report compute_metrics(const network_scenario& s, const solve_result& solved) {
  metrics_report rep;
  const auto per_wlan = solved.per_wlan_bps(static_cast<int>(s.wlans.size()));
  rep.aggregate_mbps = solved.aggregate_bps() / 1e6;
  std::vector<double> per_node;
  per_node.reserve(solved.nodes.size());
  for (const auto& n : solved.nodes) per_node.push_back(n.throughput_bps);
  rep.pf_nats = proportional_fairness(per_node, &rep.starved);
  rep.jfi = jain_index(per_wlan);
  rep.spectrum_util = spectrum_utilization(s);
  return rep;
}

}  // namespace cbond
