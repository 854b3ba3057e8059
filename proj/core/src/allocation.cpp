#include "cbond/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cbond {

std::vector<int> allowed_widths(int w_max, int n_basic_channels) {
  std::vector<int> widths;
  for (const auto& row : mcs_table())
    if (row.width <= w_max && row.width <= n_basic_channels) widths.push_back(row.width);
  if (widths.empty()) throw model_error("no feasible width under the given cap");
  return widths;
}

channel_range random_allocation(int n_basic_channels, int width, rng& r) {
  if (width < 1 || width > n_basic_channels)
    throw model_error("width must lie in [1, n_basic_channels]");
  const int low = r.uniform_int(1, n_basic_channels - width + 1);
  return {low, low + width - 1};
}

channel_range ac_allocation(int n_basic_channels, int width, rng& r) {
  if (width < 1 || width > n_basic_channels)
    throw model_error("width must lie in [1, n_basic_channels]");
  const int n_blocks = n_basic_channels / width;
  const int z = r.uniform_int(1, n_blocks);
  return {(z - 1) * width + 1, z * width};
}

int max_channel_cover(const allocation_plan& plan, int n_basic_channels) {
  std::vector<int> cover(static_cast<std::size_t>(n_basic_channels) + 1, 0);
  for (const auto& c : plan)
    for (int k = c.low; k <= c.high; ++k) ++cover[k];
  return *std::max_element(cover.begin() + 1, cover.end());
}

int waterfill_result::max_cover(int n_basic_channels) const {
  return max_channel_cover(plan, n_basic_channels);
}

waterfill_result waterfilling(int m, int n_basic_channels, int w_max) {
  if (m < 1 || n_basic_channels < 1 || w_max < 1)
    throw model_error("waterfilling needs positive m, n and w_max");
  waterfill_result res;
  res.widths.assign(m, 1);

  if (m <= n_basic_channels) {
    bool done = false;
    while (!done) {
      bool progressed = false;
      for (int i = 0; i < m; ++i) {
        if (2 * res.widths[i] > w_max) continue;  // capped: let the others keep growing
        const int total = std::accumulate(res.widths.begin(), res.widths.end(), 0);
        if (res.widths[i] + total <= n_basic_channels) {
          res.widths[i] *= 2;
          progressed = true;
        } else {
          done = true;  // out of room: everyone stops, fairness over greed
          break;
        }
      }
      if (!progressed) break;
    }
    int low = 1;
    for (int i = 0; i < m; ++i) {
      res.plan.push_back({low, low + res.widths[i] - 1});
      low += res.widths[i];
    }
  } else {
    // More wlans than channels: nobody can grow, reuse channels round-robin.
    res.wrapped = true;
    for (int i = 0; i < m; ++i) {
      const int ch = i % n_basic_channels + 1;
      res.plan.push_back({ch, ch});
    }
  }
  return res;
}

colored_waterfill_result color_and_waterfill(const network_scenario& s, int w_max) {
  const int m = static_cast<int>(s.wlans.size());
  std::vector<std::vector<bool>> within_range(m, std::vector<bool>(m, false));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      if (i != k) within_range[i][k] = s.adjacent(i, k);

  colored_waterfill_result res;
  res.coloring = exact_coloring(within_range);
  res.groups = waterfilling(res.coloring.n_colors, s.n_basic_channels, w_max);
  res.plan.resize(m);
  for (int v = 0; v < m; ++v) res.plan[v] = res.groups.plan[res.coloring.color[v]];
  return res;
}

candidate_set waterfill_rotation_candidates(int m, int n_basic_channels, int w_max) {
  auto widths = waterfilling(m, n_basic_channels, w_max).widths;
  std::sort(widths.begin(), widths.end());
  candidate_set cs;
  do {
    allocation_plan plan;
    int low = 1;
    for (int w : widths) {
      plan.push_back({low, low + w - 1});
      low += w;
    }
    cs.plans.push_back(std::move(plan));
  } while (std::next_permutation(widths.begin(), widths.end()));
  return cs;
}

candidate_set exhaustive_candidates(int m, int n_basic_channels, std::span<const int> widths) {
  std::vector<channel_range> blocks;
  for (int w : widths)
    for (int low = 1; low + w - 1 <= n_basic_channels; ++low) blocks.push_back({low, low + w - 1});
  if (blocks.empty()) throw model_error("no feasible blocks for the given widths");

  double estimate = 1;
  for (int i = 0; i < m; ++i) estimate *= static_cast<double>(blocks.size());
  if (estimate > 2e6)
    throw model_error("exhaustive candidate set would exceed 2e6 plans");

  candidate_set cs;
  allocation_plan current(m);
  // Odometer over block choices per wlan.
  std::vector<std::size_t> idx(m, 0);
  for (;;) {
    for (int i = 0; i < m; ++i) current[i] = blocks[idx[i]];
    cs.plans.push_back(current);
    int pos = m - 1;
    while (pos >= 0 && ++idx[pos] == blocks.size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return cs;
}

network_scenario with_plan(const network_scenario& s, const allocation_plan& plan) {
  if (plan.size() != s.wlans.size())
    throw model_error("plan size does not match the scenario's wlan count");
  network_scenario out = s;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    out.wlans[i].channel = plan[i];
    if (!out.wlans[i].airtime_mode()) {
      const int cls = snr_class_for_width(plan[i].width());
      if (cls < 0)
        throw model_error("plan gives wlan '" + out.wlans[i].id +
                          "' a width with no rate row");
      out.wlans[i].snr_class = cls;
    }
  }
  validate(out);
  return out;
}

pf_result pf_schedule(const network_scenario& s, const candidate_set& candidates,
                      const pf_options& opt) {
  const int m = static_cast<int>(s.wlans.size());
  const std::size_t k = candidates.plans.size();
  if (k == 0) throw model_error("pf_schedule needs at least one candidate plan");

  // Per-candidate wlan throughputs under the interaction model.
  std::vector<std::vector<double>> x(k);  // x[c][i]
  for (std::size_t c = 0; c < k; ++c) {
    const auto solved = solve_fixed_point(with_plan(s, candidates.plans[c]),
                                          solve_mode::wlan_centric);
    x[c] = solved.per_wlan_bps(m);
  }
  for (int i = 0; i < m; ++i) {
    bool feasible = false;
    for (std::size_t c = 0; c < k; ++c)
      if (x[c][i] > 0) feasible = true;
    if (!feasible)
      throw model_error("wlan '" + s.wlans[i].id + "' starves on every candidate plan");
  }

  std::vector<double> p(k, 1.0 / static_cast<double>(k));
  std::vector<double> mean_x(m), g(k);
  auto refresh = [&] {
    for (int i = 0; i < m; ++i) {
      double xi = 0;
      for (std::size_t c = 0; c < k; ++c) xi += p[c] * x[c][i];
      mean_x[i] = xi;
    }
    for (std::size_t c = 0; c < k; ++c) {
      double gc = 0;
      for (int i = 0; i < m; ++i) gc += x[c][i] / mean_x[i];
      g[c] = gc / m;
    }
  };
  auto residual = [&] {
    // Stationarity: scheduled candidates sit at g = 1, the rest at g <= 1.
    double r = 0;
    for (std::size_t c = 0; c < k; ++c)
      r = std::max(r, p[c] > opt.prune ? std::abs(g[c] - 1.0) : g[c] - 1.0);
    return r;
  };

  pf_result res;
  refresh();
  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    res.kkt_residual = residual();
    if (res.kkt_residual < opt.tol) {
      res.converged = true;
      break;
    }
    double total = 0;
    for (std::size_t c = 0; c < k; ++c) {
      p[c] *= g[c];
      total += p[c];
    }
    for (auto& pc : p) pc /= total;
    refresh();
  }
  if (!res.converged) res.kkt_residual = residual();

  double kept = 0;
  for (std::size_t c = 0; c < k; ++c)
    if (p[c] > opt.prune) kept += p[c];
  for (std::size_t c = 0; c < k; ++c)
    if (p[c] > opt.prune)
      res.schedule.push_back({candidates.plans[c], p[c] / kept});

  // Recompute the averages from the pruned, renormalised schedule so the
  // returned numbers describe exactly what the schedule says.
  res.mean_throughput_bps.assign(m, 0.0);
  std::size_t e = 0;
  for (std::size_t c = 0; c < k && e < res.schedule.size(); ++c) {
    if (p[c] > opt.prune) {
      for (int i = 0; i < m; ++i)
        res.mean_throughput_bps[i] += res.schedule[e].weight * x[c][i];
      ++e;
    }
  }
  res.objective = 0;
  for (int i = 0; i < m; ++i) res.objective += std::log(res.mean_throughput_bps[i]);
  return res;
}

support_check conjecture_support_check(const pf_result& pf, int n_basic_channels, int w_max,
                                       double weight_tol) {
  support_check res;
  if (pf.schedule.empty()) return res;
  const int m = static_cast<int>(pf.schedule.front().plan.size());
  const auto ref = waterfilling(m, n_basic_channels, w_max);
  res.reference_widths = ref.widths;
  std::sort(res.reference_widths.begin(), res.reference_widths.end());
  res.reference_cover = ref.max_cover(n_basic_channels);

  for (std::size_t e = 0; e < pf.schedule.size(); ++e) {
    const auto& entry = pf.schedule[e];
    if (entry.weight <= weight_tol) continue;
    std::vector<int> widths;
    for (const auto& c : entry.plan) widths.push_back(c.width());
    std::sort(widths.begin(), widths.end());
    const bool same_widths = widths == res.reference_widths;
    const bool cover_ok = max_channel_cover(entry.plan, n_basic_channels) <= res.reference_cover;
    if (!same_widths || !cover_ok) {
      res.ok = false;
      res.offending.push_back(static_cast<int>(e));
    }
  }
  return res;
}

}  // namespace cbond
