#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "cbond/ctmn.hpp"
#include "cbond/experiments.hpp"
#include "cbond/scenario_io.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cbond;
using cbond::testing::scenario_path;

TEST_CASE("axis values expand linear and geometric ranges") {
  CHECK(axis_values({axis_kind::n_channels, 2, 8, 2}) == std::vector<double>{2, 4, 6, 8});
  CHECK(axis_values({axis_kind::m_wlans, 1, 4, 1}) == std::vector<double>{1, 2, 3, 4});
  CHECK(axis_values({axis_kind::cw, 16, 256, 2}) == std::vector<double>{16, 32, 64, 128, 256});
  CHECK(axis_values({axis_kind::n_channels, 3, 3, 1}) == std::vector<double>{3});
  CHECK_THROWS_AS(axis_values({axis_kind::n_channels, 2, 8, 0}), model_error);
  CHECK_THROWS_AS(axis_values({axis_kind::cw, 16, 256, 1}), model_error);
  CHECK_THROWS_AS(axis_values({axis_kind::n_channels, 8, 2, 1}), model_error);
}

TEST_CASE("random scenarios respect the width policy and scheme") {
  rng r(3);
  SUBCASE("fixed width, uniform placement") {
    std::set<int> lows;
    for (int k = 0; k < 100; ++k) {
      auto s = random_scenario(4, 8, {width_policy::kind::fixed, 2}, alloc_scheme::uniform_random,
                               2, r);
      CHECK(s.n_basic_channels == 8);
      REQUIRE(s.wlans.size() == 4);
      CHECK_FALSE(s.cs_adjacency.has_value());  // dense: everyone in range
      for (const auto& w : s.wlans) {
        CHECK(w.channel.width() == 2);
        CHECK(w.snr_class == 2);
        REQUIRE(w.nodes.size() == 2);
        for (const auto& nd : w.nodes) CHECK(nd.saturated());
        lows.insert(w.channel.low);
      }
      validate(s);
    }
    CHECK(lows.size() == 7);  // every low in 1..7 shows up
  }
  SUBCASE("uniform width draws only feasible widths, aligned placement") {
    std::set<int> widths;
    for (int k = 0; k < 200; ++k) {
      auto s = random_scenario(3, 8, {width_policy::kind::uniform, 8}, alloc_scheme::ac_aligned,
                               1, r);
      for (const auto& w : s.wlans) {
        widths.insert(w.channel.width());
        CHECK((w.channel.low - 1) % w.channel.width() == 0);
      }
    }
    CHECK(widths == std::set<int>{1, 2, 4, 8});
  }
  SUBCASE("waterfill scheme is deterministic given m and n") {
    auto s = random_scenario(3, 8, {width_policy::kind::uniform, 8}, alloc_scheme::waterfill, 2,
                             r);
    REQUIRE(s.wlans.size() == 3);
    CHECK(s.wlans[0].channel == channel_range{1, 4});
    CHECK(s.wlans[1].channel == channel_range{5, 6});
    CHECK(s.wlans[2].channel == channel_range{7, 8});
  }
}

TEST_CASE("sweep realizations are a reproducible prefix sequence") {
  sweep_spec small;
  small.axis = {axis_kind::m_wlans, 2, 3, 1};
  small.n = 4;
  small.widths = {width_policy::kind::fixed, 1};
  small.nodes_per_wlan = 2;
  small.realizations = 5;
  small.seed = 77;

  auto a = run_sweep(small);
  sweep_spec bigger = small;
  bigger.realizations = 12;
  auto b = run_sweep(bigger);

  // Rows come out grouped by axis point; within a point the first 5
  // realizations of the longer run are exactly the shorter run.
  auto rows_for = [](const sweep_output& out, const std::string& id, int max_realization) {
    std::vector<result_row> rows;
    for (const auto& row : out.results)
      if (row.scenario_id == id && row.realization < max_realization) rows.push_back(row);
    return rows;
  };
  for (const std::string id : {"m=2", "m=3"}) {
    auto ra = rows_for(a, id, 5);
    auto rb = rows_for(b, id, 5);
    REQUIRE(ra.size() == rb.size());
    REQUIRE_FALSE(ra.empty());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      CHECK(ra[i].wlan == rb[i].wlan);
      CHECK(ra[i].throughput_mbps == rb[i].throughput_mbps);
      CHECK(ra[i].rho == rb[i].rho);
    }
  }
  REQUIRE(a.summary.size() == 2);
  CHECK(a.summary[0].axis_value == 2);
  CHECK(a.summary[1].axis_value == 3);
  for (const auto& s : a.summary) {
    CHECK(s.mean_throughput_mbps > 0);
    CHECK(s.jfi > 0);
    CHECK(s.jfi <= 1.0 + 1e-12);
    CHECK(s.spectrum_utilization > 0);
    CHECK(s.spectrum_utilization <= 1.0 + 1e-12);
  }
}

TEST_CASE("standard error shrinks roughly as the square root of the sample count") {
  sweep_spec spec;
  spec.axis = {axis_kind::m_wlans, 4, 4, 1};
  spec.n = 6;
  spec.widths = {width_policy::kind::uniform, 4};
  spec.realizations = 120;
  spec.seed = 5;
  const double se1 = run_sweep(spec).summary[0].stderr_mbps;
  spec.realizations = 480;
  const double se2 = run_sweep(spec).summary[0].stderr_mbps;
  CHECK(se1 > 0);
  CHECK(se2 > 0);
  const double ratio = se1 / se2;
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.9);
}

TEST_CASE("widening the contention window revives the starved wlan") {
  auto base = parse_scenario(scenario_path("four_wlan_starvation.json"));
  sweep_spec spec;
  spec.axis = {axis_kind::cw, 16, 2048, 2};
  spec.realizations = 1;
  spec.base = base;

  auto out = run_sweep(spec);
  std::map<double, std::map<std::string, double>> by_cw;
  for (const auto& row : out.results) {
    REQUIRE(row.node == -1);  // saturated base: wlan-level rows
    const double cw = std::stod(row.scenario_id.substr(3));
    by_cw[cw][row.wlan] = row.throughput_mbps;
  }
  REQUIRE(by_cw.size() == 8);

  // WLAN A is boxed in by everyone; every doubling of its neighbours' and its
  // own window frees air for it across this whole range.
  double prev_a = -1;
  for (auto& [cw, rows] : by_cw) {
    CHECK(rows.at("A") > prev_a);
    prev_a = rows.at("A");
  }
  // The wlans that were feasting on A's silence pay for it at the top end.
  CHECK(by_cw.at(2048).at("B") < by_cw.at(16).at("B"));
  CHECK(by_cw.at(2048).at("D") < by_cw.at(16).at("D"));
  // Larger windows waste airtime overall once starvation is resolved.
  double agg16 = 0, agg2048 = 0;
  for (auto& [w, x] : by_cw.at(16)) agg16 += x;
  for (auto& [w, x] : by_cw.at(2048)) agg2048 += x;
  CHECK(agg2048 < agg16);
}

TEST_CASE("the cw axis requires a base scenario") {
  sweep_spec spec;
  spec.axis = {axis_kind::cw, 16, 64, 2};
  spec.realizations = 1;
  CHECK_THROWS_AS(run_sweep(spec), model_error);
}

TEST_CASE("throughput histograms cover exactly the solo range") {
  histogram_spec spec;
  spec.m = 3;
  spec.n = 4;
  spec.width = 1;
  spec.realizations = 400;
  spec.bins = 20;
  spec.seed = 2;
  auto h = run_histogram(spec);

  REQUIRE(h.edges.size() == 21);
  REQUIRE(h.counts.size() == 20);
  CHECK(h.edges.front() == 0.0);
  CHECK(h.samples == 1200);  // m wlans per realization
  std::uint64_t total = 0;
  for (auto c : h.counts) total += c;
  CHECK(total == h.samples);

  // The top edge is the contention-free throughput of one width-1 wlan, and
  // no sample can beat it.
  auto solo = solve_fixed_point(cbond::testing::saturated_scenario(1, {{1, 1}}),
                                solve_mode::wlan_centric);
  CHECK(h.solo_mbps == doctest::Approx(solo.aggregate_bps() / 1e6).epsilon(1e-9));
  CHECK(h.edges.back() == doctest::Approx(h.solo_mbps));
  CHECK(h.mean_mbps > 0);
  CHECK(h.mean_mbps < h.solo_mbps);
  CHECK(h.mass_above(0) == doctest::Approx(1.0));
  CHECK(h.mass_above(h.solo_mbps * 2) == 0.0);
  const double half = h.mass_above(h.solo_mbps / 2);
  CHECK(half >= 0.0);
  CHECK(half <= 1.0);
}

TEST_CASE("channelisation grid compares schemes across density and width caps") {
  auto cells = compare_channelisation(8, {2, 3}, {1, 2}, 40, 9);
  REQUIRE(cells.size() == 8);  // 2 schemes x 2 wlan counts x 2 caps

  std::map<std::tuple<int, int, int>, channelisation_cell> by_key;
  for (const auto& c : cells) {
    CHECK(c.mean_aggregate_mbps > 0);
    CHECK(c.stderr_mbps >= 0);
    CHECK(c.mean_jfi > 0);
    CHECK(c.mean_jfi <= 1.0 + 1e-12);
    by_key[{static_cast<int>(c.scheme), c.m, c.w_max}] = c;
  }
  CHECK(by_key.size() == 8);

  // With a width cap of 1 the aligned grid is the uniform grid, and the
  // paired seeding makes the two schemes draw identical deployments.
  for (int m : {2, 3}) {
    const auto& rnd = by_key.at({static_cast<int>(alloc_scheme::uniform_random), m, 1});
    const auto& ac = by_key.at({static_cast<int>(alloc_scheme::ac_aligned), m, 1});
    CHECK(rnd.mean_aggregate_mbps == doctest::Approx(ac.mean_aggregate_mbps).epsilon(1e-12));
    CHECK(rnd.mean_jfi == doctest::Approx(ac.mean_jfi).epsilon(1e-12));
  }
}
