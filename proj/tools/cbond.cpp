// Command-line front end: analyze a scenario, sweep randomized deployments,
// histogram per-wlan throughput, compare channelisation schemes, validate the
// model against the simulator, and compute channel allocations.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbond/allocation.hpp"
#include "cbond/ctmn.hpp"
#include "cbond/experiments.hpp"
#include "cbond/metrics.hpp"
#include "cbond/report.hpp"
#include "cbond/scenario_io.hpp"
#include "cbond/simcore.hpp"

namespace {

using namespace cbond;

constexpr int exit_ok = 0;
constexpr int exit_model_error = 1;
constexpr int exit_parse_error = 2;
constexpr int exit_no_convergence = 3;

std::string scenario_id_from_path(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

sweep_axis parse_range(axis_kind kind, const std::string& range) {
  sweep_axis axis;
  axis.kind = kind;
  const auto first = range.find(':');
  const auto second = range.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw CLI::ValidationError("--range", "expected LO:HI:STEP");
  try {
    axis.lo = std::stod(range.substr(0, first));
    axis.hi = std::stod(range.substr(first + 1, second - first - 1));
    axis.step = std::stod(range.substr(second + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--range", "expected numeric LO:HI:STEP");
  }
  return axis;
}

width_policy parse_width_policy(const std::string& text) {
  if (text == "ac") return {width_policy::kind::uniform, 8};
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    int value = 0;
    try {
      value = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--width-policy", "expected fixed:C, uniform:CMAX or ac");
    }
    if (head == "fixed") return {width_policy::kind::fixed, value};
    if (head == "uniform") return {width_policy::kind::uniform, value};
  }
  throw CLI::ValidationError("--width-policy", "expected fixed:C, uniform:CMAX or ac");
}

std::vector<result_row> rows_from_solve(const network_scenario& s, const solve_result& solved,
                                        const std::string& scenario_id) {
  std::vector<result_row> rows;
  for (const auto& nr : solved.nodes) {
    result_row row;
    row.scenario_id = scenario_id;
    row.realization = 0;
    row.wlan = s.wlans[nr.wlan].id;
    row.node = nr.node;
    row.rho = nr.rho;
    row.theta = nr.theta;
    row.throughput_mbps = nr.throughput_bps / 1e6;
    row.saturated = nr.saturated;
    row.iterations = solved.iterations;
    row.converged = solved.converged;
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json plan_to_json(const network_scenario& s, const allocation_plan& plan) {
  nlohmann::ordered_json j;
  for (std::size_t i = 0; i < plan.size(); ++i)
    j[s.wlans[i].id] = {{"low", plan[i].low}, {"high", plan[i].high}};
  return j;
}

struct analyze_args {
  std::string scenario, out, format = "csv", report = "rows", mode = "node";
  double tol = 1e-6;
  int max_iter = 10000;
};

int run_analyze(const analyze_args& a) {
  const auto s = parse_scenario(a.scenario);
  const auto fmt = format_from_string(a.format);
  const auto mode = a.mode == "wlan" ? solve_mode::wlan_centric : solve_mode::node_centric;
  if (a.report == "states") {
    emit(states_report(s, mode, fmt), a.out);
    return exit_ok;
  }
  solve_options opt;
  opt.tol = a.tol;
  opt.max_iter = a.max_iter;
  const auto solved = solve_fixed_point(s, mode, opt);
  emit(solver_report(rows_from_solve(s, solved, scenario_id_from_path(a.scenario)), fmt), a.out);
  if (!solved.converged) {
    std::cerr << "fixed point did not converge within " << opt.max_iter << " iterations\n";
    return exit_no_convergence;
  }
  return exit_ok;
}

struct validate_args {
  std::string scenario, out, format = "csv", sim_mode_name = "sim3", tx = "exp";
  double duration = 1000;
  std::uint64_t seed = 1;
};

int run_validate(const validate_args& a) {
  const auto s = parse_scenario(a.scenario);
  sim_options sopt;
  sopt.mode = sim_mode_from_string(a.sim_mode_name);
  sopt.durations = a.tx == "det" ? tx_dist::deterministic : tx_dist::exponential;
  sopt.duration_s = a.duration;
  sopt.seed = a.seed;
  const auto rep = compare_model_sim(s, sopt);
  emit(validation_report_text(scenario_id_from_path(a.scenario), rep,
                              format_from_string(a.format)),
       a.out);
  return exit_ok;
}

struct sweep_args {
  std::string axis = "n", range, scenario, out, summary_out, format = "csv";
  std::string width_policy_text = "fixed:1", scheme = "random";
  int m = 6, n = 8, nodes_per_wlan = 2, realizations = 1000, w_max = 8;
  std::uint64_t seed = 1;
};

int run_sweep_cmd(const sweep_args& a) {
  sweep_spec spec;
  axis_kind kind;
  if (a.axis == "n")
    kind = axis_kind::n_channels;
  else if (a.axis == "m")
    kind = axis_kind::m_wlans;
  else if (a.axis == "cw")
    kind = axis_kind::cw;
  else
    throw CLI::ValidationError("--axis", "expected n, m or cw");
  spec.axis = parse_range(kind, a.range);
  spec.m = a.m;
  spec.n = a.n;
  spec.nodes_per_wlan = a.nodes_per_wlan;
  spec.widths = parse_width_policy(a.width_policy_text);
  spec.scheme = scheme_from_string(a.scheme);
  if (spec.scheme == alloc_scheme::waterfill || spec.scheme == alloc_scheme::colored_waterfill)
    spec.widths = {width_policy::kind::uniform, a.w_max};
  spec.realizations = a.realizations;
  spec.seed = a.seed;
  if (!a.scenario.empty()) spec.base = parse_scenario(a.scenario);

  const auto out = run_sweep(spec);
  if (format_from_string(a.format) == report_format::json) {
    emit(sweep_report_json(out), a.out);
    return exit_ok;
  }
  // CSV: per-realization rows only when a file was asked for; the summary is
  // the primary human-facing table.
  if (!a.out.empty())
    write_text_file(a.out, sweep_results_report(out.results, report_format::csv));
  emit(sweep_summary_report(out.summary, report_format::csv), a.summary_out);
  return exit_ok;
}

struct histogram_args {
  std::string out, format = "csv", scheme = "random";
  int m = 6, n = 8, width = 1, nodes_per_wlan = 2, realizations = 10000, bins = 40;
  std::uint64_t seed = 1;
};

int run_histogram_cmd(const histogram_args& a) {
  histogram_spec spec;
  spec.m = a.m;
  spec.n = a.n;
  spec.width = a.width;
  spec.nodes_per_wlan = a.nodes_per_wlan;
  spec.scheme = scheme_from_string(a.scheme);
  spec.realizations = a.realizations;
  spec.bins = a.bins;
  spec.seed = a.seed;
  emit(histogram_report(run_histogram(spec), format_from_string(a.format)), a.out);
  return exit_ok;
}

struct channelisation_args {
  std::string out, format = "csv";
  int n = 16;
  std::vector<int> ms{8, 12, 16};
  std::vector<int> w_maxes{1, 2, 4, 8};
  int realizations = 2000;
  std::uint64_t seed = 1;
};

int run_channelisation(const channelisation_args& a) {
  const auto cells = compare_channelisation(a.n, a.ms, a.w_maxes, a.realizations, a.seed);
  emit(channelisation_report(cells, format_from_string(a.format)), a.out);
  return exit_ok;
}

struct allocate_args {
  std::string scenario, out, scheme = "waterfilling", candidates = "rotations";
  std::string write_scenario_path;
  int w_max = 8;
  std::uint64_t seed = 1;
};

int run_allocate(const allocate_args& a) {
  const auto s = parse_scenario(a.scenario);
  const int m = static_cast<int>(s.wlans.size());
  nlohmann::ordered_json j;
  allocation_plan plan;

  if (a.scheme == "pf") {
    const auto cands = a.candidates == "exhaustive"
                           ? [&] {
                               const auto widths = allowed_widths(a.w_max, s.n_basic_channels);
                               return exhaustive_candidates(m, s.n_basic_channels, widths);
                             }()
                           : waterfill_rotation_candidates(m, s.n_basic_channels, a.w_max);
    const auto pf = pf_schedule(s, cands);
    const auto support = conjecture_support_check(pf, s.n_basic_channels, a.w_max);
    j["scheme"] = "pf";
    j["converged"] = pf.converged;
    j["iterations"] = pf.iterations;
    j["kkt_residual"] = pf.kkt_residual;
    j["objective_nats"] = pf.objective;
    j["schedule"] = nlohmann::ordered_json::array();
    for (const auto& entry : pf.schedule)
      j["schedule"].push_back(
          {{"weight", entry.weight}, {"plan", plan_to_json(s, entry.plan)}});
    nlohmann::ordered_json xs;
    for (int i = 0; i < m; ++i)
      xs[s.wlans[i].id] = pf.mean_throughput_bps[static_cast<std::size_t>(i)] / 1e6;
    j["mean_throughput_mbps"] = std::move(xs);
    j["waterfilling_support"] = support.ok;
    emit(j.dump(2) + "\n", a.out);
    return exit_ok;
  }

  if (a.scheme == "waterfilling") {
    const auto wf = waterfilling(m, s.n_basic_channels, a.w_max);
    plan = wf.plan;
    j["wrapped"] = wf.wrapped;
  } else if (a.scheme == "colored") {
    const auto cw = color_and_waterfill(s, a.w_max);
    plan = cw.plan;
    j["colors"] = cw.coloring.n_colors;
    j["wrapped"] = cw.groups.wrapped;
  } else if (a.scheme == "random" || a.scheme == "ac") {
    rng r(a.seed);
    for (const auto& w : s.wlans) {
      const int width = w.channel.width();
      plan.push_back(a.scheme == "ac" ? ac_allocation(s.n_basic_channels, width, r)
                                      : random_allocation(s.n_basic_channels, width, r));
    }
  } else {
    throw CLI::ValidationError("--scheme", "expected random|ac|waterfilling|colored|pf");
  }

  j["scheme"] = a.scheme;
  j["plan"] = plan_to_json(s, plan);
  j["spectrum_utilization"] = spectrum_utilization(
      [&] {
        std::vector<channel_range> cs;
        for (const auto& c : plan) cs.push_back(c);
        return cs;
      }(),
      s.n_basic_channels);
  emit(j.dump(2) + "\n", a.out);
  if (!a.write_scenario_path.empty()) write_scenario(with_plan(s, plan), a.write_scenario_path);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Throughput analysis for overlapping channel-bonding wlans"};
  app.require_subcommand(1);

  analyze_args an;
  auto* analyze = app.add_subcommand("analyze", "Solve one scenario file");
  analyze->add_option("--scenario", an.scenario, "Scenario file")->required();
  analyze->add_option("--mode", an.mode, "node|wlan")->check(CLI::IsMember({"node", "wlan"}));
  analyze->add_option("--out", an.out, "Write the report here instead of stdout");
  analyze->add_option("--format", an.format)->check(CLI::IsMember({"csv", "json"}));
  analyze->add_option("--report", an.report, "rows|states")
      ->check(CLI::IsMember({"rows", "states"}));
  analyze->add_option("--tol", an.tol, "Fixed-point tolerance");
  analyze->add_option("--max-iter", an.max_iter, "Fixed-point iteration cap");

  validate_args va;
  auto* validate_cmd = app.add_subcommand("validate", "Cross-check the model via simulation");
  validate_cmd->add_option("--scenario", va.scenario)->required();
  validate_cmd->add_option("--sim-mode", va.sim_mode_name, "sim1|sim2|sim3")
      ->check(CLI::IsMember({"sim1", "sim2", "sim3"}));
  validate_cmd->add_option("--tx-dist", va.tx, "exp|det (sim3 only)")
      ->check(CLI::IsMember({"exp", "det"}));
  validate_cmd->add_option("--duration", va.duration, "Simulated seconds");
  validate_cmd->add_option("--seed", va.seed);
  validate_cmd->add_option("--out", va.out);
  validate_cmd->add_option("--format", va.format)->check(CLI::IsMember({"csv", "json"}));

  sweep_args sw;
  auto* sweep = app.add_subcommand("sweep", "Average randomized deployments along an axis");
  sweep->add_option("--axis", sw.axis, "n|m|cw")->check(CLI::IsMember({"n", "m", "cw"}));
  sweep->add_option("--range", sw.range, "LO:HI:STEP (cw: STEP multiplies)")->required();
  sweep->add_option("--scenario", sw.scenario, "Base scenario (cw axis)");
  sweep->add_option("--m", sw.m, "Wlan count (fixed axes)");
  sweep->add_option("--n", sw.n, "Basic channels (fixed axes)");
  sweep->add_option("--nodes-per-wlan", sw.nodes_per_wlan);
  sweep->add_option("--width-policy", sw.width_policy_text, "fixed:C|uniform:CMAX|ac");
  sweep->add_option("--scheme", sw.scheme, "random|ac|waterfilling|colored");
  sweep->add_option("--wmax", sw.w_max, "Width cap for waterfilling schemes");
  sweep->add_option("--realizations", sw.realizations);
  sweep->add_option("--seed", sw.seed);
  sweep->add_option("--out", sw.out, "Per-realization rows (csv) or full report (json)");
  sweep->add_option("--summary-out", sw.summary_out, "Summary table destination (csv)");
  sweep->add_option("--format", sw.format)->check(CLI::IsMember({"csv", "json"}));

  histogram_args hi;
  auto* histogram = app.add_subcommand("histogram", "Per-wlan throughput distribution");
  histogram->add_option("--m", hi.m);
  histogram->add_option("--n", hi.n);
  histogram->add_option("--width", hi.width, "Fixed width for every wlan");
  histogram->add_option("--nodes-per-wlan", hi.nodes_per_wlan);
  histogram->add_option("--scheme", hi.scheme, "random|ac");
  histogram->add_option("--realizations", hi.realizations);
  histogram->add_option("--bins", hi.bins);
  histogram->add_option("--seed", hi.seed);
  histogram->add_option("--out", hi.out);
  histogram->add_option("--format", hi.format)->check(CLI::IsMember({"csv", "json"}));

  channelisation_args ch;
  auto* compare = app.add_subcommand("compare-channelisation",
                                     "Random vs aligned placement across densities and caps");
  compare->add_option("--n", ch.n);
  compare->add_option("--m-list", ch.ms)->delimiter(',');
  compare->add_option("--wmax-list", ch.w_maxes)->delimiter(',');
  compare->add_option("--realizations", ch.realizations);
  compare->add_option("--seed", ch.seed);
  compare->add_option("--out", ch.out);
  compare->add_option("--format", ch.format)->check(CLI::IsMember({"csv", "json"}));

  allocate_args al;
  auto* allocate = app.add_subcommand("allocate", "Compute a channel plan or schedule");
  allocate->add_option("--scenario", al.scenario)->required();
  allocate->add_option("--scheme", al.scheme, "random|ac|waterfilling|colored|pf");
  allocate->add_option("--wmax", al.w_max);
  allocate->add_option("--seed", al.seed);
  allocate->add_option("--candidates", al.candidates, "rotations|exhaustive (pf)")
      ->check(CLI::IsMember({"rotations", "exhaustive"}));
  allocate->add_option("--out", al.out);
  allocate->add_option("--write-scenario", al.write_scenario_path,
                       "Also write the scenario with the plan applied");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(an);
    if (*validate_cmd) return run_validate(va);
    if (*sweep) return run_sweep_cmd(sw);
    if (*histogram) return run_histogram_cmd(hi);
    if (*compare) return run_channelisation(ch);
    if (*allocate) return run_allocate(al);
  } catch (const parse_error& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return exit_parse_error;
  } catch (const model_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_model_error;
  }
  return exit_ok;
}
