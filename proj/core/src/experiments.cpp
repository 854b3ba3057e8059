#include "cbond/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace cbond {

std::vector<double> axis_values(const sweep_axis& axis) {
  std::vector<double> vals;
  if (axis.kind == axis_kind::cw) {
    if (!(axis.step > 1)) throw model_error("cw axis needs a multiplicative step > 1");
    for (double v = axis.lo; v <= axis.hi * (1 + 1e-12); v *= axis.step) vals.push_back(v);
  } else {
    if (!(axis.step > 0)) throw model_error("axis step must be positive");
    for (double v = axis.lo; v <= axis.hi + 1e-12; v += axis.step) vals.push_back(v);
  }
  if (vals.empty()) throw model_error("axis range is empty");
  return vals;
}

const char* to_string(alloc_scheme s) {
  switch (s) {
    case alloc_scheme::uniform_random: return "random";
    case alloc_scheme::ac_aligned: return "ac";
    case alloc_scheme::waterfill: return "waterfilling";
    case alloc_scheme::colored_waterfill: return "colored";
  }
  return "?";
}

alloc_scheme scheme_from_string(const std::string& name) {
  if (name == "random") return alloc_scheme::uniform_random;
  if (name == "ac") return alloc_scheme::ac_aligned;
  if (name == "waterfilling") return alloc_scheme::waterfill;
  if (name == "colored") return alloc_scheme::colored_waterfill;
  throw model_error("unknown allocation scheme '" + name + "'");
}

network_scenario random_scenario(int m, int n, const width_policy& wp, alloc_scheme scheme,
                                 int nodes_per_wlan, rng& r) {
  if (m < 1 || n < 1 || nodes_per_wlan < 1)
    throw model_error("random_scenario needs positive m, n and nodes_per_wlan");

  network_scenario s;
  s.n_basic_channels = n;
  for (int i = 0; i < m; ++i) {
    wlan_config w;
    w.id = "W" + std::to_string(i + 1);
    w.nodes.assign(static_cast<std::size_t>(nodes_per_wlan), node_config{});
    s.wlans.push_back(std::move(w));
  }

  if (scheme == alloc_scheme::waterfill || scheme == alloc_scheme::colored_waterfill) {
    // Both are deterministic here: with everyone in range the coloring is one
    // class per wlan, which degenerates to plain waterfilling.
    const int w_max = wp.k == width_policy::kind::uniform ? wp.value : 8;
    const auto plan = scheme == alloc_scheme::waterfill
                          ? waterfilling(m, n, w_max).plan
                          : color_and_waterfill(s, w_max).plan;
    for (int i = 0; i < m; ++i) s.wlans[i].channel = plan[i];
  } else {
    const auto widths = wp.k == width_policy::kind::uniform
                            ? allowed_widths(wp.value, n)
                            : std::vector<int>{wp.value};
    for (auto& w : s.wlans) {
      const int width = widths.size() == 1 ? widths.front() : r.pick(widths);
      w.channel = scheme == alloc_scheme::ac_aligned ? ac_allocation(n, width, r)
                                                     : random_allocation(n, width, r);
    }
  }

  for (auto& w : s.wlans) {
    w.snr_class = snr_class_for_width(w.channel.width());
    if (w.snr_class < 0)
      throw model_error("random_scenario drew a width with no rate row");
  }
  validate(s);
  return s;
}

namespace {

// Runs fn(k) for k in [0, count) across threads, if the host has any to
// spare. Each k writes only its own output slot, so assembly order is
// deterministic regardless of scheduling.
void parallel_for(int count, const std::function<void(int)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1 || count < 32) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  const int n_threads = static_cast<int>(std::min<unsigned>(hw, 8));
  std::vector<std::thread> workers;
  for (int t = 0; t < n_threads; ++t)
    workers.emplace_back([&, t] {
      for (int k = t; k < count; k += n_threads) fn(k);
    });
  for (auto& w : workers) w.join();
}

struct realization_stats {
  double mean_per_wlan_mbps = 0;
  double jfi = 0;
  double spectrum = 0;
  std::vector<result_row> rows;
};

solve_mode pick_mode(const network_scenario& s) {
  for (const auto& w : s.wlans)
    for (const auto& nd : w.nodes)
      if (!nd.saturated()) return solve_mode::node_centric;
  return solve_mode::wlan_centric;
}

realization_stats evaluate_scenario(const network_scenario& s, const std::string& scenario_id,
                                    int realization) {
  const solve_mode mode = pick_mode(s);
  const auto solved = solve_fixed_point(s, mode);
  const auto per_wlan = solved.per_wlan_bps(static_cast<int>(s.wlans.size()));

  realization_stats st;
  st.mean_per_wlan_mbps = solved.aggregate_bps() / 1e6 / static_cast<double>(s.wlans.size());
  st.jfi = jain_index(per_wlan);
  st.spectrum = spectrum_utilization(s);
  for (const auto& nr : solved.nodes) {
    result_row row;
    row.scenario_id = scenario_id;
    row.realization = realization;
    row.wlan = s.wlans[nr.wlan].id;
    row.node = nr.node;
    row.rho = nr.rho;
    row.theta = nr.theta;
    row.throughput_mbps = nr.throughput_bps / 1e6;
    row.saturated = nr.saturated;
    row.iterations = solved.iterations;
    row.converged = solved.converged;
    st.rows.push_back(std::move(row));
  }
  return st;
}

network_scenario with_cw(network_scenario s, int cw_slots) {
  for (auto& w : s.wlans)
    for (auto& nd : w.nodes) {
      nd.cw_slots = cw_slots;
      nd.mean_backoff = mean_backoff_from_cw(cw_slots, s.mac.t_slot);
    }
  return s;
}

}  // namespace

sweep_output run_sweep(const sweep_spec& spec) {
  if (spec.realizations < 1) throw model_error("sweep needs at least one realization");
  if (spec.axis.kind == axis_kind::cw && !spec.base)
    throw model_error("cw sweeps need a base scenario");

  sweep_output out;
  for (const double v : axis_values(spec.axis)) {
    std::vector<realization_stats> stats(static_cast<std::size_t>(spec.realizations));
    const std::string id_prefix = [&] {
      switch (spec.axis.kind) {
        case axis_kind::n_channels: return "n=" + std::to_string(static_cast<int>(v));
        case axis_kind::m_wlans: return "m=" + std::to_string(static_cast<int>(v));
        case axis_kind::cw: return "cw=" + std::to_string(static_cast<int>(v));
      }
      return std::string("?");
    }();

    parallel_for(spec.realizations, [&](int k) {
      rng r(spec.seed + static_cast<std::uint64_t>(k));
      network_scenario s;
      switch (spec.axis.kind) {
        case axis_kind::n_channels:
          s = random_scenario(spec.m, static_cast<int>(v), spec.widths, spec.scheme,
                              spec.nodes_per_wlan, r);
          break;
        case axis_kind::m_wlans:
          s = random_scenario(static_cast<int>(v), spec.n, spec.widths, spec.scheme,
                              spec.nodes_per_wlan, r);
          break;
        case axis_kind::cw:
          s = with_cw(*spec.base, static_cast<int>(v));
          break;
      }
      stats[static_cast<std::size_t>(k)] = evaluate_scenario(s, id_prefix, k);
    });

    summary_row sum;
    sum.axis_value = v;
    double mean = 0, m2 = 0, jfi = 0, spectrum = 0;
    for (int k = 0; k < spec.realizations; ++k) {
      const auto& st = stats[static_cast<std::size_t>(k)];
      const double delta = st.mean_per_wlan_mbps - mean;
      mean += delta / (k + 1);
      m2 += delta * (st.mean_per_wlan_mbps - mean);
      jfi += st.jfi;
      spectrum += st.spectrum;
      for (const auto& row : st.rows) out.results.push_back(row);
    }
    sum.mean_throughput_mbps = mean;
    sum.stderr_mbps = spec.realizations > 1
                          ? std::sqrt(m2 / (spec.realizations - 1) / spec.realizations)
                          : 0.0;
    sum.jfi = jfi / spec.realizations;
    sum.spectrum_utilization = spectrum / spec.realizations;
    out.summary.push_back(sum);
  }
  return out;
}

double histogram_output::mass_above(double threshold_mbps) const {
  if (samples == 0) return 0;
  std::uint64_t above = 0;
  for (std::size_t b = 0; b < counts.size(); ++b)
    if (edges[b] >= threshold_mbps) above += counts[b];
  return static_cast<double>(above) / static_cast<double>(samples);
}

histogram_output run_histogram(const histogram_spec& spec) {
  if (spec.bins < 1 || spec.realizations < 1)
    throw model_error("histogram needs positive bins and realizations");

  // Contention-free reference: one wlan alone on the same width.
  rng solo_rng(0);
  width_policy fixed{width_policy::kind::fixed, spec.width};
  const auto solo_scenario =
      random_scenario(1, spec.width, fixed, alloc_scheme::uniform_random, spec.nodes_per_wlan,
                      solo_rng);
  const double solo_mbps =
      solve_fixed_point(solo_scenario, solve_mode::wlan_centric).aggregate_bps() / 1e6;

  histogram_output out;
  out.solo_mbps = solo_mbps;
  out.edges.resize(static_cast<std::size_t>(spec.bins) + 1);
  for (int b = 0; b <= spec.bins; ++b)
    out.edges[static_cast<std::size_t>(b)] = solo_mbps * b / spec.bins;
  out.counts.assign(static_cast<std::size_t>(spec.bins), 0);

  std::vector<std::vector<double>> samples(static_cast<std::size_t>(spec.realizations));
  parallel_for(spec.realizations, [&](int k) {
    rng r(spec.seed + static_cast<std::uint64_t>(k));
    const auto s = random_scenario(spec.m, spec.n, fixed, spec.scheme, spec.nodes_per_wlan, r);
    const auto solved = solve_fixed_point(s, solve_mode::wlan_centric);
    auto per_wlan = solved.per_wlan_bps(spec.m);
    for (double& x : per_wlan) x /= 1e6;
    samples[static_cast<std::size_t>(k)] = std::move(per_wlan);
  });

  double total = 0;
  for (const auto& values : samples)
    for (double x : values) {
      const int b = std::min(spec.bins - 1,
                             static_cast<int>(x / solo_mbps * spec.bins));
      ++out.counts[static_cast<std::size_t>(std::max(0, b))];
      ++out.samples;
      total += x;
    }
  out.mean_mbps = out.samples ? total / static_cast<double>(out.samples) : 0.0;
  return out;
}

std::vector<channelisation_cell> compare_channelisation(int n, const std::vector<int>& ms,
                                                        const std::vector<int>& w_maxes,
                                                        int realizations, std::uint64_t seed) {
  if (realizations < 1) throw model_error("compare_channelisation needs realizations >= 1");
  std::vector<channelisation_cell> cells;
  for (const alloc_scheme scheme : {alloc_scheme::uniform_random, alloc_scheme::ac_aligned})
    for (int m : ms)
      for (int w_max : w_maxes) {
        std::vector<double> aggregate(static_cast<std::size_t>(realizations));
        std::vector<double> jfi(static_cast<std::size_t>(realizations));
        parallel_for(realizations, [&](int k) {
          rng r(seed + static_cast<std::uint64_t>(k));
          width_policy wp{width_policy::kind::uniform, w_max};
          const auto s = random_scenario(m, n, wp, scheme, 2, r);
          const auto solved = solve_fixed_point(s, solve_mode::wlan_centric);
          const auto per_wlan = solved.per_wlan_bps(m);
          aggregate[static_cast<std::size_t>(k)] = solved.aggregate_bps() / 1e6;
          jfi[static_cast<std::size_t>(k)] = jain_index(per_wlan);
        });
        channelisation_cell cell;
        cell.m = m;
        cell.w_max = w_max;
        cell.scheme = scheme;
        double mean = 0, m2 = 0, jsum = 0;
        for (int k = 0; k < realizations; ++k) {
          const double x = aggregate[static_cast<std::size_t>(k)];
          const double delta = x - mean;
          mean += delta / (k + 1);
          m2 += delta * (x - mean);
          jsum += jfi[static_cast<std::size_t>(k)];
        }
        cell.mean_aggregate_mbps = mean;
        cell.stderr_mbps =
            realizations > 1 ? std::sqrt(m2 / (realizations - 1) / realizations) : 0.0;
        cell.mean_jfi = jsum / realizations;
        cells.push_back(cell);
      }
  return cells;
}

}  // namespace cbond
