#pragma once

#include <string>
#include <vector>

#include "cbond/ctmn.hpp"
#include "cbond/experiments.hpp"
#include "cbond/simcore.hpp"

namespace cbond {

enum class report_format { csv, json };

report_format format_from_string(const std::string& name);

// Number formatting is pinned (shortest round-trip, %.9g) so identical runs
// produce byte-identical reports.
std::string format_double(double v);

// Full solver record per transmitter.
std::string solver_report(const std::vector<result_row>& rows, report_format f);

// Sweep results (the shorter per-row schema) plus the per-axis-point summary.
std::string sweep_results_report(const std::vector<result_row>& rows, report_format f);
std::string sweep_summary_report(const std::vector<summary_row>& rows, report_format f);
std::string sweep_report_json(const sweep_output& out);  // both tables in one object

std::string validation_report_text(const std::string& scenario_id, const validation_report& rep,
                                   report_format f);

std::string histogram_report(const histogram_output& h, report_format f);

std::string channelisation_report(const std::vector<channelisation_cell>& cells,
                                  report_format f);

// Feasible-state listing for --report states.
std::string states_report(const network_scenario& s, solve_mode mode, report_format f);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace cbond
