#include "cbond/ctmn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace cbond {

namespace {

transmitter make_node_transmitter(const network_scenario& s, int wi, int ni) {
  const auto& n = s.wlans[wi].nodes[ni];
  transmitter t;
  t.wlan = wi;
  t.node = ni;
  t.lambda = backoff_rate(n.mean_backoff);
  t.mean_tx = node_mean_tx(s, wi, ni);
  t.eta = node_success_prob(s, wi, ni);
  t.delivered_bits = node_delivered_bits(s, wi, ni);
  t.offered_bps = n.offered_bps;
  return t;
}

}  // namespace

network_scenario wlan_centric_reduce(const network_scenario& s) {
  network_scenario r = s;
  for (auto& w : r.wlans) {
    const std::string where = "wlan '" + w.id + "': ";
    double lambda_sum = 0;
    const node_config& first = w.nodes.front();
    for (const auto& n : w.nodes) {
      if (!n.saturated())
        throw model_error(where + "per-wlan reduction needs every node saturated");
      const bool homogeneous = n.packet_bits == first.packet_bits &&
                               n.airtime == first.airtime && n.p_noise == first.p_noise &&
                               n.p_hidden == first.p_hidden && n.p_ext == first.p_ext;
      if (!homogeneous)
        throw model_error(where + "per-wlan reduction needs interchangeable nodes");
      lambda_sum += backoff_rate(n.mean_backoff);
    }
    node_config super = first;
    super.mean_backoff = 1.0 / lambda_sum;  // attempt rates add while all contend
    super.cw_slots.reset();
    w.nodes = {super};
  }
  return r;
}

std::vector<transmitter> build_transmitters(const network_scenario& s, solve_mode mode) {
  std::vector<transmitter> ts;
  if (mode == solve_mode::node_centric) {
    for (int wi = 0; wi < static_cast<int>(s.wlans.size()); ++wi)
      for (int ni = 0; ni < static_cast<int>(s.wlans[wi].nodes.size()); ++ni)
        ts.push_back(make_node_transmitter(s, wi, ni));
  } else {
    const network_scenario reduced = wlan_centric_reduce(s);
    for (int wi = 0; wi < static_cast<int>(reduced.wlans.size()); ++wi) {
      transmitter t = make_node_transmitter(reduced, wi, 0);
      t.node = -1;
      ts.push_back(t);
    }
  }
  if (ts.size() > 64)
    throw model_error("more than 64 transmitters; use the per-wlan mode or split the scenario");
  return ts;
}

std::vector<std::uint64_t> conflict_masks(const network_scenario& s,
                                          const std::vector<transmitter>& ts) {
  const auto wlan_conflicts = conflict_graph(s);
  const int n = static_cast<int>(ts.size());
  std::vector<std::uint64_t> masks(n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      const bool same_wlan = ts[i].wlan == ts[k].wlan;
      if (same_wlan || wlan_conflicts[ts[i].wlan][ts[k].wlan]) {
        masks[i] |= std::uint64_t{1} << k;
        masks[k] |= std::uint64_t{1} << i;
      }
    }
  return masks;
}

namespace {

void extend_states(std::span<const std::uint64_t> masks, std::uint64_t bits,
                   std::uint64_t blocked, int start, std::size_t max_states,
                   std::vector<std::uint64_t>& out) {
  if (out.size() >= max_states)
    throw model_error("state space exceeds " + std::to_string(max_states) + " states");
  out.push_back(bits);
  for (int u = start; u < static_cast<int>(masks.size()); ++u) {
    const std::uint64_t bit = std::uint64_t{1} << u;
    if (blocked & bit) continue;
    extend_states(masks, bits | bit, blocked | masks[u] | bit, u + 1, max_states, out);
  }
}

}  // namespace

state_space enumerate_states(std::span<const std::uint64_t> masks, std::size_t max_states) {
  state_space space;
  space.n_transmitters = static_cast<int>(masks.size());
  extend_states(masks, 0, 0, 0, max_states, space.states);
  std::sort(space.states.begin(), space.states.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return space;
}

state_space feasible_states(const network_scenario& s, solve_mode mode, std::size_t max_states) {
  const auto ts = build_transmitters(s, mode);
  return enumerate_states(conflict_masks(s, ts), max_states);
}

std::vector<double> stationary_distribution(const state_space& space,
                                            std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != space.n_transmitters)
    throw model_error("theta size does not match the state space");
  std::vector<double> log_theta(theta.size());
  for (std::size_t u = 0; u < theta.size(); ++u) {
    if (theta[u] < 0) throw model_error("activity ratios must be non-negative");
    log_theta[u] = std::log(theta[u]);  // log(0) = -inf selects states away from idle nodes
  }

  std::vector<double> log_w(space.states.size());
  double log_max = 0;  // the empty state always has weight 1
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    double lw = 0;
    for (std::uint64_t b = space.states[i]; b;) {
      const int u = std::countr_zero(b);
      lw += log_theta[u];
      b &= b - 1;
    }
    log_w[i] = lw;
    if (lw > log_max) log_max = lw;
  }

  double z = 0;
  for (double lw : log_w) z += std::exp(lw - log_max);
  std::vector<double> pi(log_w.size());
  for (std::size_t i = 0; i < log_w.size(); ++i) pi[i] = std::exp(log_w[i] - log_max) / z;
  return pi;
}

std::vector<double> active_probabilities(const state_space& space, std::span<const double> pi) {
  std::vector<double> p(space.n_transmitters, 0.0);
  for (std::size_t i = 0; i < space.states.size(); ++i)
    for (std::uint64_t b = space.states[i]; b;) {
      p[std::countr_zero(b)] += pi[i];
      b &= b - 1;
    }
  return p;
}

double node_throughput_bps(double active_prob, double eta, double delivered_bits,
                           double mean_tx) {
  return active_prob * eta * delivered_bits / mean_tx;
}

double solve_result::wlan_throughput_bps(int wlan) const {
  double x = 0;
  for (const auto& n : nodes)
    if (n.wlan == wlan) x += n.throughput_bps;
  return x;
}

std::vector<double> solve_result::per_wlan_bps(int n_wlans) const {
  std::vector<double> x(n_wlans, 0.0);
  for (const auto& n : nodes) x[n.wlan] += n.throughput_bps;
  return x;
}

double solve_result::aggregate_bps() const {
  double x = 0;
  for (const auto& n : nodes) x += n.throughput_bps;
  return x;
}

solve_result solve_fixed_point(const network_scenario& s, solve_mode mode,
                               const solve_options& opt) {
  const auto ts = build_transmitters(s, mode);
  const auto masks = conflict_masks(s, ts);
  const state_space space = enumerate_states(masks, opt.max_states);
  const int n = static_cast<int>(ts.size());

  // Time-active each transmitter needs to carry its load, retransmissions
  // included. Saturated transmitters have no finite target.
  std::vector<double> target(n, saturated_load);
  bool all_saturated = true;
  for (int u = 0; u < n; ++u) {
    if (ts[u].saturated()) continue;
    all_saturated = false;
    target[u] = ts[u].offered_bps * ts[u].mean_tx / (ts[u].eta * ts[u].delivered_bits);
  }

  std::vector<double> rho(n, 1.0);
  if (!all_saturated) {
    for (int u = 0; u < n; ++u) {
      if (ts[u].saturated()) continue;
      // Invert the isolated-transmitter occupancy as a starting point.
      const double theta_full = ts[u].lambda * ts[u].mean_tx;
      rho[u] = target[u] >= 1.0 ? 1.0
                                : std::clamp(target[u] / ((1.0 - target[u]) * theta_full),
                                             1e-12, 1.0);
    }
  }

  std::vector<double> theta(n), pi, p_active;
  auto refresh = [&] {
    for (int u = 0; u < n; ++u) theta[u] = rho[u] * ts[u].lambda * ts[u].mean_tx;
    pi = stationary_distribution(space, theta);
    p_active = active_probabilities(space, pi);
  };

  int iterations = 0;
  bool converged = all_saturated;
  refresh();
  if (!all_saturated) {
    for (iterations = 1; iterations <= opt.max_iter; ++iterations) {
      double max_rel_change = 0;
      for (int u = 0; u < n; ++u) {
        if (ts[u].saturated()) continue;
        const double proposed = std::min(1.0, rho[u] * target[u] / p_active[u]);
        const double next = (1.0 - opt.damping) * rho[u] + opt.damping * proposed;
        max_rel_change = std::max(max_rel_change,
                                  std::abs(next - rho[u]) / std::max(rho[u], 1e-12));
        rho[u] = next;
      }
      refresh();
      if (max_rel_change < opt.tol) {
        converged = true;
        break;
      }
    }
  }

  solve_result res;
  res.n_states = space.states.size();
  res.iterations = iterations;
  res.converged = converged;
  for (int u = 0; u < n; ++u) {
    node_result r;
    r.wlan = ts[u].wlan;
    r.node = ts[u].node;
    r.rho = rho[u];
    r.theta = theta[u];
    r.throughput_bps =
        node_throughput_bps(p_active[u], ts[u].eta, ts[u].delivered_bits, ts[u].mean_tx);
    // A finite-load transmitter is saturated when it is pushing as hard as it
    // can and still misses its target. The damped iteration stalls within
    // O(tol) of the rho=1 boundary, so both thresholds scale with tol.
    r.saturated = ts[u].saturated() || (rho[u] >= 1.0 - 10.0 * opt.tol &&
                                        p_active[u] < target[u] * (1.0 - 10.0 * opt.tol));
    res.nodes.push_back(r);
  }
  return res;
}

}  // namespace cbond
