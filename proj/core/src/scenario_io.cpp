#include "cbond/scenario_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace cbond {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw parse_error(what); }

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) fail(where + ": unknown key '" + key + "'");
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.at(key).is_number()) fail(where + ": '" + std::string(key) + "' must be a number");
  return obj.at(key).get<double>();
}

int get_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.at(key).is_number_integer())
    fail(where + ": '" + std::string(key) + "' must be an integer");
  return obj.at(key).get<int>();
}

node_config parse_node(const json& jn, const std::string& where) {
  if (!jn.is_object()) fail(where + ": nodes must be objects");
  reject_unknown_keys(jn,
                      {"load_mbps", "packet_bits", "cw_slots", "mean_backoff_us", "p_noise",
                       "p_hidden", "p_ext", "airtime_us"},
                      where);
  node_config n;
  if (jn.contains("load_mbps")) {
    const auto& v = jn.at("load_mbps");
    if (v.is_string()) {
      if (v.get<std::string>() != "saturated")
        fail(where + ": load_mbps must be a number or \"saturated\"");
      n.offered_bps = saturated_load;
    } else if (v.is_number()) {
      n.offered_bps = v.get<double>() * 1e6;
    } else {
      fail(where + ": load_mbps must be a number or \"saturated\"");
    }
  }
  if (jn.contains("packet_bits")) n.packet_bits = get_number(jn, "packet_bits", where);
  if (jn.contains("cw_slots") && jn.contains("mean_backoff_us"))
    fail(where + ": give cw_slots or mean_backoff_us, not both");
  if (jn.contains("cw_slots")) n.cw_slots = get_int(jn, "cw_slots", where);
  if (jn.contains("mean_backoff_us")) n.mean_backoff = get_number(jn, "mean_backoff_us", where) * 1e-6;
  if (jn.contains("p_noise")) n.p_noise = get_number(jn, "p_noise", where);
  if (jn.contains("p_hidden")) n.p_hidden = get_number(jn, "p_hidden", where);
  if (jn.contains("p_ext")) n.p_ext = get_number(jn, "p_ext", where);
  if (jn.contains("airtime_us")) n.airtime = get_number(jn, "airtime_us", where) * 1e-6;
  return n;
}

wlan_config parse_wlan(const json& jw) {
  if (!jw.is_object()) fail("wlans entries must be objects");
  if (!jw.contains("id") || !jw.at("id").is_string()) fail("every wlan needs a string 'id'");
  wlan_config w;
  w.id = jw.at("id").get<std::string>();
  const std::string where = "wlan '" + w.id + "'";
  reject_unknown_keys(jw, {"id", "channel", "snr_class", "nodes"}, where);

  if (!jw.contains("channel") || !jw.at("channel").is_object())
    fail(where + ": needs a channel {low, high}");
  const json& jc = jw.at("channel");
  reject_unknown_keys(jc, {"low", "high"}, where + " channel");
  w.channel.low = get_int(jc, "low", where);
  w.channel.high = get_int(jc, "high", where);

  if (jw.contains("snr_class")) {
    const auto& v = jw.at("snr_class");
    if (v.is_string()) {
      if (v.get<std::string>() != "override")
        fail(where + ": snr_class must be 1..4 or \"override\"");
      w.snr_class = 0;
    } else if (v.is_number_integer()) {
      w.snr_class = v.get<int>();
      if (w.snr_class < 1 || w.snr_class > 4)
        fail(where + ": snr_class must be 1..4 or \"override\"");
    } else {
      fail(where + ": snr_class must be 1..4 or \"override\"");
    }
  } else {
    w.snr_class = snr_class_for_width(w.channel.width());
    if (w.snr_class < 0)
      fail(where + ": width " + std::to_string(w.channel.width()) +
           " has no rate row, so snr_class \"override\" (with airtime_us) is required");
  }

  if (!jw.contains("nodes") || !jw.at("nodes").is_array() || jw.at("nodes").empty())
    fail(where + ": needs a non-empty nodes array");
  int idx = 0;
  for (const auto& jn : jw.at("nodes"))
    w.nodes.push_back(parse_node(jn, where + " node " + std::to_string(idx++)));
  return w;
}

void parse_mac_overrides(const json& jm, mac_constants& mac, const std::string& where) {
  reject_unknown_keys(jm,
                      {"t_phy", "t_sym", "sf_bits", "mpdu_delim_bits", "mac_header_bits",
                       "tail_bits", "ba_bits", "sifs", "difs", "t_slot"},
                      where);
  if (jm.contains("t_phy")) mac.t_phy = get_number(jm, "t_phy", where) * 1e-6;
  if (jm.contains("t_sym")) mac.t_sym = get_number(jm, "t_sym", where) * 1e-6;
  if (jm.contains("sf_bits")) mac.sf_bits = get_int(jm, "sf_bits", where);
  if (jm.contains("mpdu_delim_bits")) mac.mpdu_delim_bits = get_int(jm, "mpdu_delim_bits", where);
  if (jm.contains("mac_header_bits")) mac.mac_header_bits = get_int(jm, "mac_header_bits", where);
  if (jm.contains("tail_bits")) mac.tail_bits = get_int(jm, "tail_bits", where);
  if (jm.contains("ba_bits")) mac.ba_bits = get_int(jm, "ba_bits", where);
  if (jm.contains("sifs")) mac.sifs = get_number(jm, "sifs", where) * 1e-6;
  if (jm.contains("difs")) mac.difs = get_number(jm, "difs", where) * 1e-6;
  if (jm.contains("t_slot")) mac.t_slot = get_number(jm, "t_slot", where) * 1e-6;
}

network_scenario parse_json(const json& j) {
  if (!j.is_object()) fail("scenario root must be an object");
  reject_unknown_keys(
      j, {"n_basic_channels", "wlans", "cs_adjacency", "aggregation", "mac_constants"},
      "scenario");
  network_scenario s;
  if (!j.contains("n_basic_channels")) fail("scenario needs n_basic_channels");
  s.n_basic_channels = get_int(j, "n_basic_channels", "scenario");
  if (!j.contains("wlans") || !j.at("wlans").is_array()) fail("scenario needs a wlans array");
  for (const auto& jw : j.at("wlans")) s.wlans.push_back(parse_wlan(jw));

  if (j.contains("cs_adjacency")) {
    if (!j.at("cs_adjacency").is_array()) fail("cs_adjacency must be an array of id pairs");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& jp : j.at("cs_adjacency")) {
      if (!jp.is_array() || jp.size() != 2 || !jp[0].is_string() || !jp[1].is_string())
        fail("cs_adjacency entries must be [\"id\", \"id\"] pairs");
      const int a = s.wlan_index(jp[0].get<std::string>());
      const int b = s.wlan_index(jp[1].get<std::string>());
      if (a < 0 || b < 0) fail("cs_adjacency references an unknown wlan id");
      pairs.emplace_back(a, b);
    }
    s.cs_adjacency = std::move(pairs);
  }

  if (j.contains("aggregation")) {
    const json& ja = j.at("aggregation");
    reject_unknown_keys(ja, {"n_a", "n_su"}, "aggregation");
    if (ja.contains("n_a")) s.mac.n_a = get_int(ja, "n_a", "aggregation");
    if (ja.contains("n_su")) s.mac.n_su = get_int(ja, "n_su", "aggregation");
    if (s.mac.n_a < 1 || s.mac.n_su < 1) fail("aggregation values must be at least 1");
  }
  if (j.contains("mac_constants")) parse_mac_overrides(j.at("mac_constants"), s.mac, "mac_constants");

  // Per-node backoff: an explicit window takes its mean from the slot length,
  // which may itself have been overridden above.
  for (auto& w : s.wlans)
    for (auto& n : w.nodes)
      if (n.cw_slots) n.mean_backoff = mean_backoff_from_cw(*n.cw_slots, s.mac.t_slot);

  validate(s);
  return s;
}

// Round-trips exactly for values that came in as microseconds.
json us(double seconds) { return json(seconds * 1e6); }

}  // namespace

network_scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  return parse_json(j);
}

network_scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const network_scenario& s) {
  json j;
  j["n_basic_channels"] = s.n_basic_channels;
  j["wlans"] = json::array();
  for (const auto& w : s.wlans) {
    json jw;
    jw["id"] = w.id;
    jw["channel"] = {{"low", w.channel.low}, {"high", w.channel.high}};
    if (w.airtime_mode())
      jw["snr_class"] = "override";
    else
      jw["snr_class"] = w.snr_class;
    jw["nodes"] = json::array();
    for (const auto& n : w.nodes) {
      json jn;
      if (n.saturated())
        jn["load_mbps"] = "saturated";
      else
        jn["load_mbps"] = n.offered_bps / 1e6;
      jn["packet_bits"] = n.packet_bits;
      if (n.cw_slots)
        jn["cw_slots"] = *n.cw_slots;
      else
        jn["mean_backoff_us"] = us(n.mean_backoff);
      if (n.p_noise != 0) jn["p_noise"] = n.p_noise;
      if (n.p_hidden != 0) jn["p_hidden"] = n.p_hidden;
      if (n.p_ext != 0) jn["p_ext"] = n.p_ext;
      if (n.airtime) jn["airtime_us"] = us(*n.airtime);
      jw["nodes"].push_back(std::move(jn));
    }
    j["wlans"].push_back(std::move(jw));
  }
  if (s.cs_adjacency) {
    j["cs_adjacency"] = json::array();
    for (const auto& [a, b] : *s.cs_adjacency)
      j["cs_adjacency"].push_back({s.wlans[a].id, s.wlans[b].id});
  }
  const mac_constants defaults;
  if (s.mac.n_a != defaults.n_a || s.mac.n_su != defaults.n_su)
    j["aggregation"] = {{"n_a", s.mac.n_a}, {"n_su", s.mac.n_su}};
  json jm;
  if (s.mac.t_phy != defaults.t_phy) jm["t_phy"] = us(s.mac.t_phy);
  if (s.mac.t_sym != defaults.t_sym) jm["t_sym"] = us(s.mac.t_sym);
  if (s.mac.sf_bits != defaults.sf_bits) jm["sf_bits"] = s.mac.sf_bits;
  if (s.mac.mpdu_delim_bits != defaults.mpdu_delim_bits) jm["mpdu_delim_bits"] = s.mac.mpdu_delim_bits;
  if (s.mac.mac_header_bits != defaults.mac_header_bits) jm["mac_header_bits"] = s.mac.mac_header_bits;
  if (s.mac.tail_bits != defaults.tail_bits) jm["tail_bits"] = s.mac.tail_bits;
  if (s.mac.ba_bits != defaults.ba_bits) jm["ba_bits"] = s.mac.ba_bits;
  if (s.mac.sifs != defaults.sifs) jm["sifs"] = us(s.mac.sifs);
  if (s.mac.difs != defaults.difs) jm["difs"] = us(s.mac.difs);
  if (s.mac.t_slot != defaults.t_slot) jm["t_slot"] = us(s.mac.t_slot);
  if (!jm.empty()) j["mac_constants"] = std::move(jm);
  return j.dump(2) + "\n";
}

void write_scenario(const network_scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write scenario file '" + path + "'");
  out << serialize_scenario(s);
}

}  // namespace cbond
