#include "cbond/report.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cbond {

namespace {

using json = nlohmann::ordered_json;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json row_to_json(const result_row& r, bool solver_fields) {
  json j;
  j["scenario_id"] = r.scenario_id;
  j["realization"] = r.realization;
  j["wlan"] = r.wlan;
  j["node"] = r.node;
  j["rho"] = r.rho;
  if (solver_fields) j["theta"] = r.theta;
  j["throughput_mbps"] = r.throughput_mbps;
  j["saturated"] = r.saturated;
  if (solver_fields) {
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
  }
  return j;
}

std::string rows_report(const std::vector<result_row>& rows, report_format f,
                        bool solver_fields) {
  if (f == report_format::json) {
    json j = json::array();
    for (const auto& r : rows) j.push_back(row_to_json(r, solver_fields));
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << (solver_fields
              ? "scenario_id,realization,wlan,node,rho,theta,throughput_mbps,saturated,"
                "iterations,converged\n"
              : "scenario_id,realization,wlan,node,rho,throughput_mbps,saturated\n");
  for (const auto& r : rows) {
    out << csv_escape(r.scenario_id) << ',' << r.realization << ',' << csv_escape(r.wlan) << ','
        << r.node << ',' << format_double(r.rho) << ',';
    if (solver_fields) out << format_double(r.theta) << ',';
    out << format_double(r.throughput_mbps) << ',' << (r.saturated ? 1 : 0);
    if (solver_fields) out << ',' << r.iterations << ',' << (r.converged ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

}  // namespace

report_format format_from_string(const std::string& name) {
  if (name == "csv") return report_format::csv;
  if (name == "json") return report_format::json;
  throw model_error("unknown format '" + name + "' (csv|json)");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string solver_report(const std::vector<result_row>& rows, report_format f) {
  return rows_report(rows, f, true);
}

std::string sweep_results_report(const std::vector<result_row>& rows, report_format f) {
  return rows_report(rows, f, false);
}

std::string sweep_summary_report(const std::vector<summary_row>& rows, report_format f) {
  if (f == report_format::json) {
    json j = json::array();
    for (const auto& r : rows) {
      json e;
      e["axis_value"] = r.axis_value;
      e["mean_throughput_mbps"] = r.mean_throughput_mbps;
      e["stderr_mbps"] = r.stderr_mbps;
      e["jfi"] = r.jfi;
      e["spectrum_utilization"] = r.spectrum_utilization;
      j.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "axis_value,mean_throughput_mbps,stderr_mbps,jfi,spectrum_utilization\n";
  for (const auto& r : rows)
    out << format_double(r.axis_value) << ',' << format_double(r.mean_throughput_mbps) << ','
        << format_double(r.stderr_mbps) << ',' << format_double(r.jfi) << ','
        << format_double(r.spectrum_utilization) << '\n';
  return out.str();
}

std::string sweep_report_json(const sweep_output& out) {
  json j;
  j["results"] = json::parse(sweep_results_report(out.results, report_format::json));
  j["summary"] = json::parse(sweep_summary_report(out.summary, report_format::json));
  return j.dump(2) + "\n";
}

std::string validation_report_text(const std::string& scenario_id, const validation_report& rep,
                                   report_format f) {
  if (f == report_format::json) {
    json j = json::array();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      const auto& sn = rep.sim.nodes[i];
      json e;
      e["scenario_id"] = scenario_id;
      e["wlan"] = r.wlan;
      e["node"] = r.node;
      e["model_mbps"] = r.model_bps / 1e6;
      e["sim_mbps"] = r.sim_bps / 1e6;
      e["rel_err"] = r.rel_err;
      e["attempts"] = sn.attempts;
      e["collisions"] = sn.collisions;
      e["mode"] = to_string(rep.sim.mode);
      e["seed"] = rep.sim.seed;
      e["duration_s"] = rep.sim.duration_s;
      j.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "scenario_id,wlan,node,model_mbps,sim_mbps,rel_err,attempts,collisions,mode,seed,"
         "duration_s\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    const auto& sn = rep.sim.nodes[i];
    out << csv_escape(scenario_id) << ',' << r.wlan << ',' << r.node << ','
        << format_double(r.model_bps / 1e6) << ',' << format_double(r.sim_bps / 1e6) << ','
        << format_double(r.rel_err) << ',' << sn.attempts << ',' << sn.collisions << ','
        << to_string(rep.sim.mode) << ',' << rep.sim.seed << ','
        << format_double(rep.sim.duration_s) << '\n';
  }
  return out.str();
}

std::string histogram_report(const histogram_output& h, report_format f) {
  if (f == report_format::json) {
    json j;
    j["samples"] = h.samples;
    j["mean_mbps"] = h.mean_mbps;
    j["solo_mbps"] = h.solo_mbps;
    j["bins"] = json::array();
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      json e;
      e["low_mbps"] = h.edges[b];
      e["high_mbps"] = h.edges[b + 1];
      e["count"] = h.counts[b];
      e["frequency"] =
          h.samples ? static_cast<double>(h.counts[b]) / static_cast<double>(h.samples) : 0.0;
      j["bins"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "bin_low_mbps,bin_high_mbps,count,frequency\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double freq =
        h.samples ? static_cast<double>(h.counts[b]) / static_cast<double>(h.samples) : 0.0;
    out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ','
        << h.counts[b] << ',' << format_double(freq) << '\n';
  }
  return out.str();
}

std::string channelisation_report(const std::vector<channelisation_cell>& cells,
                                  report_format f) {
  if (f == report_format::json) {
    json j = json::array();
    for (const auto& c : cells) {
      json e;
      e["scheme"] = to_string(c.scheme);
      e["m"] = c.m;
      e["w_max"] = c.w_max;
      e["mean_aggregate_mbps"] = c.mean_aggregate_mbps;
      e["stderr_mbps"] = c.stderr_mbps;
      e["jfi"] = c.mean_jfi;
      j.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "scheme,m,w_max,mean_aggregate_mbps,stderr_mbps,jfi\n";
  for (const auto& c : cells)
    out << to_string(c.scheme) << ',' << c.m << ',' << c.w_max << ','
        << format_double(c.mean_aggregate_mbps) << ',' << format_double(c.stderr_mbps) << ','
        << format_double(c.mean_jfi) << '\n';
  return out.str();
}

std::string states_report(const network_scenario& s, solve_mode mode, report_format f) {
  const auto ts = build_transmitters(s, mode);
  const auto space = feasible_states(s, mode);

  auto member_name = [&](int u) {
    const auto& t = ts[static_cast<std::size_t>(u)];
    if (t.node < 0) return s.wlans[t.wlan].id;
    return s.wlans[t.wlan].id + "." + std::to_string(t.node);
  };
  auto members_of = [&](std::uint64_t bits) {
    std::string names;
    for (std::uint64_t b = bits; b;) {
      const int u = std::countr_zero(b);
      b &= b - 1;
      if (!names.empty()) names += '+';
      names += member_name(u);
    }
    return names.empty() ? std::string("-") : names;
  };

  if (f == report_format::json) {
    json j = json::array();
    for (std::size_t i = 0; i < space.states.size(); ++i) {
      json e;
      e["state"] = i;
      e["active"] = std::popcount(space.states[i]);
      e["members"] = members_of(space.states[i]);
      j.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "state,active,members\n";
  for (std::size_t i = 0; i < space.states.size(); ++i)
    out << i << ',' << std::popcount(space.states[i]) << ',' << members_of(space.states[i])
        << '\n';
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw model_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace cbond
