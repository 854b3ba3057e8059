#include <benchmark/benchmark.h>

#include <vector>

#include "cbond/allocation.hpp"
#include "cbond/ctmn.hpp"
#include "cbond/experiments.hpp"
#include "cbond/phy.hpp"
#include "cbond/rng.hpp"
#include "cbond/scenario_io.hpp"

namespace {

using namespace cbond;

network_scenario dense_random(int nodes_per_wlan) {
  rng r(1);
  return random_scenario(6, 8, {width_policy::kind::uniform, 8}, alloc_scheme::uniform_random,
                         nodes_per_wlan, r);
}

void bm_enumerate_states_node(benchmark::State& state) {
  const auto s = dense_random(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(feasible_states(s, solve_mode::node_centric));
}
BENCHMARK(bm_enumerate_states_node);

void bm_enumerate_states_wlan(benchmark::State& state) {
  const auto s = dense_random(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(feasible_states(s, solve_mode::wlan_centric));
}
BENCHMARK(bm_enumerate_states_wlan);

void bm_solve_saturated_node(benchmark::State& state) {
  const auto s = dense_random(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_fixed_point(s));
  state.SetLabel("nodes_per_wlan=" + std::to_string(state.range(0)));
}
BENCHMARK(bm_solve_saturated_node)->Arg(2)->Arg(4);

void bm_solve_mixed_load(benchmark::State& state) {
  const auto s =
      parse_scenario(std::string(CBOND_SCENARIO_DIR) + "/mixed_load_1.json");
  for (auto _ : state) benchmark::DoNotOptimize(solve_fixed_point(s));
}
BENCHMARK(bm_solve_mixed_load);

void bm_tx_duration(benchmark::State& state) {
  double sink = 0;
  for (auto _ : state) {
    for (int w : {1, 2, 4, 8}) sink += tx_duration(w, 12000);
    benchmark::DoNotOptimize(sink);
  }
}
BENCHMARK(bm_tx_duration);

void bm_waterfilling(benchmark::State& state) {
  for (auto _ : state)
    for (int m = 1; m <= 8; ++m) benchmark::DoNotOptimize(waterfilling(m, 19));
}
BENCHMARK(bm_waterfilling);

}  // namespace

BENCHMARK_MAIN();
