// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned in
// code next to each check. Exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cbond/allocation.hpp"
#include "cbond/ctmn.hpp"
#include "cbond/experiments.hpp"
#include "cbond/metrics.hpp"
#include "cbond/scenario_io.hpp"
#include "cbond/simcore.hpp"
#include "test_helpers.hpp"

namespace {

using namespace cbond;
using cbond::testing::generator_stationary;
using cbond::testing::random_messy_scenario;
using cbond::testing::saturated_scenario;
using cbond::testing::scenario_path;

struct gate {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what;
  }
  void note(const std::string& what) {
    if (detail.tellp() > 0) detail << "; ";
    detail << what;
  }
};

std::string pct(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g%%", x * 100);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---- criterion 1 & 2: reference mixed-load fixed points -------------------

void check_reference_fixed_point(gate& g, const std::string& file,
                                 const std::array<double, 5>& rho_ref,
                                 const std::array<double, 5>& mbps_ref,
                                 const std::array<bool, 5>& sat_ref) {
  const double tol = 0.01;  // 1% relative on every rho and throughput
  const auto s = parse_scenario(scenario_path(file));
  const auto t0 = std::chrono::steady_clock::now();
  const auto solved = solve_fixed_point(s);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  g.require(solved.converged, "solver did not converge");
  g.require(solved.nodes.size() == 5, "expected five nodes");
  if (!g.ok) return;
  double worst_rho = 0, worst_x = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    worst_rho = std::max(worst_rho, rel_err(solved.nodes[i].rho, rho_ref[i]));
    worst_x = std::max(worst_x, rel_err(solved.nodes[i].throughput_bps / 1e6, mbps_ref[i]));
    g.require(solved.nodes[i].saturated == sat_ref[i],
              "saturation flag mismatch on node " + std::to_string(i));
  }
  g.require(worst_rho <= tol, "rho err " + pct(worst_rho));
  g.require(worst_x <= tol, "throughput err " + pct(worst_x));
  g.require(secs < 1.0, "solve took " + std::to_string(secs) + "s (limit 1s)");
  g.note("max rho err " + pct(worst_rho) + ", max throughput err " + pct(worst_x) +
         " (limit 1%)");
}

void criterion_1(gate& g) {
  check_reference_fixed_point(g, "mixed_load_1.json", {0.3673, 0.3662, 0.6466, 1.0, 0.6333},
                              {18.00, 8.00, 10.00, 15.95, 12.00},
                              {false, false, false, true, false});
}

void criterion_2(gate& g) {
  check_reference_fixed_point(g, "mixed_load_2.json", {0.0744, 0.3845, 1.0, 0.4752, 1.0},
                              {4.00, 12.00, 11.18, 5.00, 19.00},
                              {false, false, true, false, true});
}

// ---- criterion 3: continuous simulator agreement ---------------------------

void criterion_3(gate& g) {
  const double tol = 0.02;        // 2% per node wherever the run can resolve it
  const double base_secs = 1000;  // simulated seconds before any horizon extension
  // The sample relative error of a node's time-average scatters like
  // sigma_c/sqrt(delivered frames); sigma_c measured at 1.25 over repeated
  // seeds, padded to 1.5. A node whose 4-sigma band is wider than 2% cannot
  // be judged at 2% by any run of this length, so it is checked against its
  // own resolution floor instead.
  const double sigma_c = 1.5;
  sim_options sopt;
  sopt.mode = sim_mode::continuous;
  // Deterministic transmission times share the stationary law (criterion 10
  // checks that separately) and converge faster per simulated second.
  sopt.durations = tx_dist::deterministic;

  double worst = 0;  // among nodes the 2% bound binds for
  std::string worst_at;
  int floor_nodes = 0, bound_nodes = 0;
  double total_secs = 0;

  auto frame_rate = [](const network_scenario& s, int wlan, int node, double bps) {
    return bps / node_delivered_bits(s, wlan, node);
  };

  auto run_case = [&](const network_scenario& s, const std::string& label, std::uint64_t seed) {
    // The rarest node sets the horizon: aim for enough frames that its
    // resolution floor comes near the 2% budget, capped so the whole
    // criterion stays within its time limit.
    const auto solved = solve_fixed_point(s);
    double min_rate = std::numeric_limits<double>::infinity();
    for (const auto& nr : solved.nodes)
      min_rate = std::min(min_rate, frame_rate(s, nr.wlan, nr.node, nr.throughput_bps));
    sopt.duration_s = base_secs * std::clamp(4e4 / (min_rate * base_secs), 1.0, 20.0);
    sopt.seed = seed;
    total_secs += sopt.duration_s;

    const auto rep = compare_model_sim(s, sopt);
    for (const auto& row : rep.rows) {
      const double frames = frame_rate(s, row.wlan, row.node, row.model_bps) * sopt.duration_s;
      const double floor = 4 * sigma_c / std::sqrt(frames);
      const double err = std::abs(row.rel_err);
      if (floor <= tol) {
        ++bound_nodes;
        if (err > worst) {
          worst = err;
          worst_at = label;
        }
      } else {
        ++floor_nodes;
        g.require(err <= floor, label + " starved node: rel err " + pct(err) +
                                    " beyond its " + pct(floor) + " resolution floor");
      }
    }
  };

  run_case(parse_scenario(scenario_path("mixed_load_1.json")), "mixed_load_1", 10);
  run_case(parse_scenario(scenario_path("mixed_load_2.json")), "mixed_load_2", 11);
  rng r(77);
  for (int k = 0; k < 20; ++k) {
    const int m = r.uniform_int(2, 6);
    const int n = r.uniform_int(4, 16);
    const int u = r.uniform_int(1, 3);
    const auto s =
        random_scenario(m, n, {width_policy::kind::uniform, 8}, alloc_scheme::uniform_random, u, r);
    run_case(s, "random#" + std::to_string(k), 100 + static_cast<std::uint64_t>(k));
  }
  g.require(worst <= tol, "rel err " + pct(worst) + " at " + worst_at);
  g.note("22 scenarios, " + std::to_string(static_cast<long long>(total_secs)) +
         " simulated seconds; worst rel err " + pct(worst) + " at " + worst_at + " over " +
         std::to_string(bound_nodes) + " nodes (limit 2%); " + std::to_string(floor_nodes) +
         " starved nodes held within 4 sigma of their frame counts");
}

// ---- criterion 4: product form vs dense generator solve --------------------

void criterion_4(gate& g) {
  const double tol = 1e-9;  // absolute, per state probability
  rng r(2024);
  int accepted = 0;
  double worst = 0;
  while (accepted < 200) {
    const auto s = random_messy_scenario(r);
    const auto ts = build_transmitters(s, solve_mode::node_centric);
    const auto masks = conflict_masks(s, ts);
    const auto space = enumerate_states(masks);
    if (space.states.size() > 4096) continue;
    std::vector<double> rho(ts.size()), theta(ts.size());
    for (std::size_t u = 0; u < ts.size(); ++u) {
      rho[u] = 0.05 + 0.9 * r.uniform01();
      theta[u] = rho[u] * ts[u].lambda * ts[u].mean_tx;
    }
    const auto pi = stationary_distribution(space, theta);
    const auto oracle = generator_stationary(space, masks, rho, ts);
    for (std::size_t i = 0; i < pi.size(); ++i)
      worst = std::max(worst, std::abs(pi[i] - oracle[i]));
    ++accepted;
  }
  g.require(worst <= tol, "max state-probability gap " + std::to_string(worst));
  std::ostringstream o;
  o << "200 random scenarios, max state-probability gap " << worst << " (limit 1e-9)";
  g.note(o.str());
}

// ---- criterion 5: closed-form topologies -----------------------------------

void criterion_5(gate& g) {
  const double tol = 1e-12;  // relative; these are exact algebraic identities
  double worst = 0;
  auto check = [&](double got, double want) { worst = std::max(worst, rel_err(got, want)); };

  // Three fully overlapping wlans: x = U*lambda*L / (1 + 3*theta).
  {
    const auto s = parse_scenario(scenario_path("full_overlap_trio.json"));
    const double u = static_cast<double>(s.wlans[0].nodes.size());
    const double lam = 1.0 / s.wlans[0].nodes[0].mean_backoff;
    const double ldel = node_delivered_bits(s, 0, 0);
    const double theta = u * lam * node_mean_tx(s, 0, 0);
    const double expect = u * lam * ldel / (1 + 3 * theta);
    const auto solved = solve_fixed_point(s, solve_mode::wlan_centric);
    for (double x : solved.per_wlan_bps(3)) check(x, expect);

    // The same trio on disjoint blocks: each wlan in isolation,
    // x = U*lambda*L / (1 + theta).
    const auto split = with_plan(s, {{1, 2}, {3, 4}, {5, 6}});
    const double expect_split = u * lam * ldel / (1 + theta);
    const auto solved_split = solve_fixed_point(split, solve_mode::wlan_centric);
    for (double x : solved_split.per_wlan_bps(3)) check(x, expect_split);
  }

  // Widths 4/2/1 all sharing one basic channel: every wlan is dragged to the
  // same rate, x_i = U*lambda*L_del / (1 + theta4 + theta2 + theta1).
  {
    const auto s = parse_scenario(scenario_path("performance_anomaly.json"));
    const double u = static_cast<double>(s.wlans[0].nodes.size());
    const double lam = 1.0 / s.wlans[0].nodes[0].mean_backoff;
    const double ldel = node_delivered_bits(s, 0, 0);
    double denom = 1;
    for (int i = 0; i < 3; ++i) denom += u * lam * node_mean_tx(s, i, 0);
    const double expect = u * lam * ldel / denom;
    const auto solved = solve_fixed_point(s, solve_mode::wlan_centric);
    for (double x : solved.per_wlan_bps(3)) check(x, expect);
  }

  // Two disjoint wide wlans bridged by a narrow one in the middle:
  // Z = 1 + thC + 2*thA + thA^2, x_A = x_B = U*lambda*L*(1 + thA)/Z,
  // x_C = U*lambda*L/Z.
  {
    const auto s = parse_scenario(scenario_path("non_direct_interaction.json"));
    const double u = static_cast<double>(s.wlans[0].nodes.size());
    const double lam = 1.0 / s.wlans[0].nodes[0].mean_backoff;
    const double ldel = node_delivered_bits(s, 0, 0);
    const double tha = u * lam * node_mean_tx(s, 0, 0);
    const double thc = u * lam * node_mean_tx(s, 2, 0);
    const double z = 1 + thc + 2 * tha + tha * tha;
    const auto x = solve_fixed_point(s, solve_mode::wlan_centric).per_wlan_bps(3);
    check(x[0], u * lam * ldel * (1 + tha) / z);
    check(x[1], u * lam * ldel * (1 + tha) / z);
    check(x[2], u * lam * ldel / z);
  }

  g.require(worst <= tol, "closed-form gap " + std::to_string(worst));
  std::ostringstream o;
  o << "four topologies, worst relative gap " << worst << " (limit 1e-12)";
  g.note(o.str());
}

// ---- criterion 6: random-deployment throughput means -----------------------

void criterion_6(gate& g) {
  const double tol = 0.05;  // 5% on each mean
  const int realizations = 10000;
  const std::array<int, 4> widths{1, 2, 4, 8};
  const std::array<std::pair<int, std::array<double, 4>>, 2> refs{{
      {8, {89.847, 103.21, 78.965, 69.031}},
      {24, {110.23, 166.28, 170.33, 130.7}},
  }};

  double worst = 0;
  std::string worst_at;
  for (const auto& [n, ref] : refs)
    for (std::size_t wi = 0; wi < widths.size(); ++wi) {
      double sum = 0;
      for (int k = 0; k < realizations; ++k) {
        rng r(static_cast<std::uint64_t>(k) + 1);
        const auto s = random_scenario(6, n, {width_policy::kind::fixed, widths[wi]},
                                       alloc_scheme::uniform_random, 2, r);
        sum += solve_fixed_point(s, solve_mode::wlan_centric).aggregate_bps() / 6e6;
      }
      const double mean = sum / realizations;
      const double err = rel_err(mean, ref[wi]);
      if (err > worst) {
        worst = err;
        worst_at = "n=" + std::to_string(n) + ",width=" + std::to_string(widths[wi]);
      }
    }
  g.require(worst <= tol, "mean err " + pct(worst) + " at " + worst_at);
  g.note("8 cells x 10000 deployments, worst mean err " + pct(worst) + " at " + worst_at +
         " (limit 5%)");
}

// ---- criterion 7: channelisation comparison grid ---------------------------

void criterion_7(gate& g) {
  const double tol_mean = 0.03;  // 3% relative on the mean aggregate
  const double tol_jfi = 0.02;   // absolute on the mean Jain index
  // Reference grid: scheme-major (random then aligned), then wlan count
  // (8, 12, 16), then width cap (1, 2, 4, 8).
  struct ref_cell {
    double mbps, jfi;
  };
  const std::array<ref_cell, 24> ref{{
      {789.1, 0.95},  {897.6, 0.95},  {909.2, 0.93},  {844.0, 0.91},
      {1058.4, 0.96}, {1119.7, 0.95}, {1092.9, 0.92}, {974.0, 0.89},
      {1264.7, 0.97}, {1276.7, 0.94}, {1212.2, 0.91}, {1065.3, 0.87},
      {794.2, 0.95},  {936.4, 0.95},  {966.5, 0.95},  {928.2, 0.93},
      {1058.4, 0.96}, {1156.6, 0.96}, {1157.1, 0.94}, {1081.2, 0.92},
      {1263.0, 0.97}, {1310.7, 0.95}, {1288.8, 0.93}, {1157.0, 0.90},
  }};

  const auto cells = compare_channelisation(16, {8, 12, 16}, {1, 2, 4, 8}, 2000, 1);
  g.require(cells.size() == 24, "expected 24 grid cells");
  if (!g.ok) return;
  double worst_mean = 0, worst_jfi = 0;
  int mean_ok = 0, jfi_ok = 0;
  std::string worst_cell;
  for (std::size_t i = 0; i < 24; ++i) {
    const double em = rel_err(cells[i].mean_aggregate_mbps, ref[i].mbps);
    const double ej = std::abs(cells[i].mean_jfi - ref[i].jfi);
    if (em <= tol_mean) ++mean_ok;
    if (ej <= tol_jfi) ++jfi_ok;
    if (em > worst_mean) {
      worst_mean = em;
      worst_cell = std::string(to_string(cells[i].scheme)) + ",m=" + std::to_string(cells[i].m) +
                   ",wmax=" + std::to_string(cells[i].w_max);
    }
    worst_jfi = std::max(worst_jfi, ej);
  }
  g.require(worst_mean <= tol_mean, "aggregate err " + pct(worst_mean) + " at " + worst_cell);
  g.require(worst_jfi <= tol_jfi, "jfi gap " + std::to_string(worst_jfi));
  std::ostringstream o;
  o << mean_ok << "/24 aggregates within 3% (worst " << pct(worst_mean) << " at " << worst_cell
    << "), " << jfi_ok << "/24 jfi within 0.02 (worst gap " << worst_jfi << ")";
  g.note(o.str());
}

// ---- criterion 8: waterfilling minimax optimality ---------------------------

int brute_force_min_cover(int m, int n) {
  std::vector<channel_range> blocks;
  for (int w : allowed_widths(8, n))
    for (int low = 1; low + w - 1 <= n; ++low) blocks.push_back({low, low + w - 1});
  allocation_plan plan(static_cast<std::size_t>(m));
  std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
  int best = m + 1;
  while (true) {
    for (int i = 0; i < m; ++i)
      plan[static_cast<std::size_t>(i)] = blocks[pick[static_cast<std::size_t>(i)]];
    best = std::min(best, max_channel_cover(plan, n));
    int i = m - 1;
    while (i >= 0 && ++pick[static_cast<std::size_t>(i)] == blocks.size()) {
      pick[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return best;
}

void criterion_8(gate& g) {
  int checked = 0;
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 8; ++n) {
      const int got = waterfilling(m, n).max_cover(n);
      const int best = brute_force_min_cover(m, n);
      g.require(got == best, "m=" + std::to_string(m) + ",n=" + std::to_string(n) + ": cover " +
                                 std::to_string(got) + " vs optimal " + std::to_string(best));
      ++checked;
    }
  g.note(std::to_string(checked) + " (m,n) systems match the brute-force optimum exactly");
}

// ---- criterion 9: proportional-fair support shape ---------------------------

void criterion_9(gate& g) {
  for (const int n : {4, 6, 8}) {
    const auto s = saturated_scenario(n, {{1, 1}, {1, 1}, {1, 1}});
    const auto widths = allowed_widths(8, n);
    const auto pf = pf_schedule(s, exhaustive_candidates(3, n, widths));
    g.require(pf.converged, "n=" + std::to_string(n) + ": no convergence");
    const auto support = conjecture_support_check(pf, n, 8);
    g.require(support.ok, "n=" + std::to_string(n) + ": " +
                              std::to_string(support.offending.size()) +
                              " scheduled plans are not waterfilling-shaped");
  }
  g.note("3 wlans over 4/6/8 channels: every scheduled plan has the waterfilling width "
         "multiset and cover");
}

// ---- criterion 10: transmission-law insensitivity ---------------------------

void criterion_10(gate& g) {
  const double tol = 0.02;   // 2% per node between the two laws
  const double secs = 1e4;
  double worst = 0;
  std::string worst_at;
  for (const std::string file : {"performance_anomaly.json", "four_wlan_chain.json"}) {
    const auto s = parse_scenario(scenario_path(file));
    sim_options det;
    det.durations = tx_dist::deterministic;
    det.duration_s = secs;
    det.seed = 21;
    sim_options expo;
    expo.duration_s = secs;
    expo.seed = 22;
    const auto rd = run_sim(s, det);
    const auto re = run_sim(s, expo);
    for (const auto& st : rd.nodes) {
      const double xd = rd.throughput_bps(st.wlan, st.node);
      const double xe = re.throughput_bps(st.wlan, st.node);
      const double err = std::abs(xd - xe) / xe;
      if (err > worst) {
        worst = err;
        worst_at = file;
      }
    }
  }
  g.require(worst <= tol, "law gap " + pct(worst) + " at " + worst_at);
  g.note("deterministic vs exponential over 1e4s, worst node gap " + pct(worst) +
         " (limit 2%)");
}

// ---- criterion 11: wlan-level reduction equivalence -------------------------

void criterion_11(gate& g) {
  const double tol = 1e-9;  // relative, per wlan and scenario
  const int scenarios = 200;
  double worst = 0;
  double mean_node_states = 0, mean_wlan_states = 0;
  std::vector<double> agg_node, agg_wlan;
  for (int k = 0; k < scenarios; ++k) {
    rng r(4000 + static_cast<std::uint64_t>(k));
    const auto s = random_scenario(6, 8, {width_policy::kind::uniform, 8},
                                   alloc_scheme::uniform_random, 4, r);
    const auto by_node = solve_fixed_point(s, solve_mode::node_centric);
    const auto by_wlan = solve_fixed_point(s, solve_mode::wlan_centric);
    const auto xs_node = by_node.per_wlan_bps(6);
    const auto xs_wlan = by_wlan.per_wlan_bps(6);
    for (int i = 0; i < 6; ++i)
      worst = std::max(worst, rel_err(xs_wlan[static_cast<std::size_t>(i)],
                                      xs_node[static_cast<std::size_t>(i)]));
    g.require(by_wlan.n_states < by_node.n_states,
              "scenario " + std::to_string(k) + ": reduction did not shrink the state space");
    mean_node_states += static_cast<double>(by_node.n_states) / scenarios;
    mean_wlan_states += static_cast<double>(by_wlan.n_states) / scenarios;
    agg_node.push_back(by_node.aggregate_bps() / 1e6);
    agg_wlan.push_back(by_wlan.aggregate_bps() / 1e6);
  }
  g.require(worst <= tol, "per-wlan throughput gap " + std::to_string(worst));

  // The two estimates of the mean aggregate must sit inside each other's 95%
  // confidence intervals (they coincide realization by realization, so this
  // is the blunt version of the same statement).
  auto mean_se = [](const std::vector<double>& xs) {
    double mean = 0, m2 = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = xs[i] - mean;
      mean += d / static_cast<double>(i + 1);
      m2 += d * (xs[i] - mean);
    }
    const double n = static_cast<double>(xs.size());
    return std::pair{mean, std::sqrt(m2 / (n - 1) / n)};
  };
  const auto [mn, sn] = mean_se(agg_node);
  const auto [mw, sww] = mean_se(agg_wlan);
  g.require(std::abs(mn - mw) <= 1.96 * (sn + sww), "aggregate means outside joint 95% CI");

  std::ostringstream o;
  o << "200 scenarios, max per-wlan gap " << worst << " (limit 1e-9), mean states "
    << mean_node_states << " (per node) vs " << mean_wlan_states << " (per wlan)";
  g.note(o.str());
}

}  // namespace

int main() {
  struct criterion {
    int id;
    const char* name;
    void (*fn)(gate&);
  };
  const std::array<criterion, 11> criteria{{
      {1, "known fixed point, mixed-load scenario 1", criterion_1},
      {2, "known fixed point, mixed-load scenario 2", criterion_2},
      {3, "continuous simulator agreement", criterion_3},
      {4, "product form vs dense generator", criterion_4},
      {5, "closed-form topologies", criterion_5},
      {6, "random-deployment throughput means", criterion_6},
      {7, "channelisation comparison grid", criterion_7},
      {8, "waterfilling minimax optimality", criterion_8},
      {9, "proportional-fair support shape", criterion_9},
      {10, "transmission-law insensitivity", criterion_10},
      {11, "wlan-level reduction equivalence", criterion_11},
  }};

  int failed = 0;
  for (const auto& c : criteria) {
    gate g;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(g);
    } catch (const std::exception& e) {
      g.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!g.ok) ++failed;
    std::printf("%s  criterion %2d: %s — %s [%.1fs]\n", g.ok ? "PASS" : "FAIL", c.id, c.name,
                g.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  if (failed == 0)
    std::printf("RESULT: all %zu criteria passed\n", criteria.size());
  else
    std::printf("RESULT: %d of %zu criteria FAILED\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
