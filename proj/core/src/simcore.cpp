#include "cbond/simcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <string>

#include "cbond/rng.hpp"

namespace cbond {

const char* to_string(sim_mode m) {
  switch (m) {
    case sim_mode::slotted_capture: return "sim1";
    case sim_mode::slotted: return "sim2";
    case sim_mode::continuous: return "sim3";
  }
  return "?";
}

sim_mode sim_mode_from_string(const std::string& name) {
  if (name == "sim1" || name == "slotted-capture") return sim_mode::slotted_capture;
  if (name == "sim2" || name == "slotted") return sim_mode::slotted;
  if (name == "sim3" || name == "continuous") return sim_mode::continuous;
  throw model_error("unknown sim mode '" + name + "' (sim1|sim2|sim3)");
}

double sim_result::throughput_bps(int wlan, int node) const {
  for (const auto& n : nodes)
    if (n.wlan == wlan && n.node == node) return n.throughput_bps(duration_s);
  throw model_error("no such node in the simulation result");
}

namespace {

using ns_t = std::int64_t;

ns_t to_ns(double seconds) { return static_cast<ns_t>(std::llround(seconds * 1e9)); }

enum class ev_kind { arrival, fire, tx_end };

struct event {
  ns_t t;
  std::uint64_t seq;
  ev_kind kind;
  int node;
  std::uint64_t gen;  // fire events only; must match the node's current gen
};

struct event_later {
  bool operator()(const event& a, const event& b) const {
    return a.t != b.t ? a.t > b.t : a.seq > b.seq;
  }
};

struct sim_node {
  // Static per-node parameters.
  int wlan = -1, node = -1;
  bool saturated = false;
  double arrival_rate = 0;   // packets/s
  double mean_backoff_s = 0; // continuous mode
  int cw = 16;               // slotted mode
  ns_t hold_ns = 0;          // medium hold per transmission (see engine setup)
  double mean_hold_s = 0;    // for exponential duration draws
  double eta = 1;
  double delivered_bits = 0;
  std::uint64_t conflicts = 0;  // node indices it can never transmit alongside
  std::uint64_t covers = 0;     // basic channels, bit k-1 = channel k

  // Dynamic state.
  std::uint64_t queue = 0;
  bool in_tx = false;
  ns_t tx_start = -1;
  bool tx_collided = false;
  int sensed_busy = 0;       // active conflicting transmissions
  std::uint64_t gen = 0;     // bumping invalidates the scheduled fire
  ns_t fire_at = -1;         // -1: not contending
  ns_t anchor = -1;          // slotted: when the current idle countdown period began
  int remaining_slots = -1;  // slotted: -1 forces a fresh draw

  sim_node_stats stats;

  bool has_packet() const { return saturated || queue > 0; }
  bool contending() const { return fire_at >= 0; }
};

class engine {
 public:
  engine(const network_scenario& s, const sim_options& opt)
      : opt_(opt), rng_(opt.seed), horizon_(to_ns(opt.duration_s)) {
    if (!(opt.duration_s > 0)) throw model_error("simulation duration must be positive");
    difs_ns_ = to_ns(s.mac.difs);
    slot_ns_ = to_ns(s.mac.t_slot);
    build_nodes(s);
    cover_count_.assign(static_cast<std::size_t>(s.n_basic_channels) + 1, 0);
    busy_since_.assign(cover_count_.size(), 0);
    busy_union_ns_.assign(cover_count_.size(), 0);
  }

  sim_result run() {
    for (int u = 0; u < static_cast<int>(nodes_.size()); ++u) {
      auto& nd = nodes_[u];
      if (nd.saturated) {
        start_contending(u, 0);
      } else {
        push({next_arrival_at(0, nd), seq_++, ev_kind::arrival, u, 0});
      }
    }

    while (!queue_.empty()) {
      const event ev = queue_.top();
      if (ev.t > horizon_) break;
      queue_.pop();
      now_ = ev.t;
      switch (ev.kind) {
        case ev_kind::arrival: on_arrival(ev.node); break;
        case ev_kind::fire: on_fire(ev.node, ev.gen); break;
        case ev_kind::tx_end: on_tx_end(ev.node); break;
      }
    }
    return finish();
  }

 private:
  void build_nodes(const network_scenario& s) {
    const bool slotted = opt_.mode != sim_mode::continuous;
    for (int wi = 0; wi < static_cast<int>(s.wlans.size()); ++wi) {
      const auto& w = s.wlans[wi];
      for (int ni = 0; ni < static_cast<int>(w.nodes.size()); ++ni) {
        const auto& nc = w.nodes[ni];
        sim_node nd;
        nd.wlan = wi;
        nd.node = ni;
        nd.saturated = nc.saturated();
        nd.arrival_rate = nd.saturated ? 0 : nc.arrival_rate();
        nd.mean_backoff_s = nc.mean_backoff;
        nd.cw = nc.cw_slots ? *nc.cw_slots
                            : std::max(1, static_cast<int>(std::llround(
                                              2.0 * nc.mean_backoff / s.mac.t_slot)));
        const double full_tx = node_mean_tx(s, wi, ni);
        if (slotted) {
          // The model folds DIFS and one slot into E[T]; slotted runs pay
          // those explicitly on the grid, so the medium hold excludes them.
          nd.hold_ns = std::max(slot_ns_, to_ns(full_tx) - difs_ns_ - slot_ns_);
        } else {
          nd.hold_ns = to_ns(full_tx);
        }
        nd.mean_hold_s = full_tx;
        nd.eta = node_success_prob(s, wi, ni);
        nd.delivered_bits = node_delivered_bits(s, wi, ni);
        for (int ch = w.channel.low; ch <= w.channel.high; ++ch)
          nd.covers |= std::uint64_t{1} << (ch - 1);
        nodes_.push_back(nd);
      }
    }
    if (nodes_.size() > 64) throw model_error("simulator limited to 64 nodes");

    const auto wlan_conf = conflict_graph(s);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (std::size_t k = i + 1; k < nodes_.size(); ++k) {
        const bool conflict = nodes_[i].wlan == nodes_[k].wlan ||
                              wlan_conf[nodes_[i].wlan][nodes_[k].wlan];
        if (conflict) {
          nodes_[i].conflicts |= std::uint64_t{1} << k;
          nodes_[k].conflicts |= std::uint64_t{1} << i;
        }
      }
  }

  ns_t next_arrival_at(ns_t from, const sim_node& nd) {
    return from + std::max<ns_t>(1, to_ns(rng_.exponential(1.0 / nd.arrival_rate)));
  }

  void push(const event& ev) { queue_.push(ev); }

  void on_arrival(int u) {
    auto& nd = nodes_[u];
    ++nd.queue;
    if (nd.queue == 1 && !nd.in_tx && nd.sensed_busy == 0) start_contending(u, now_);
    push({next_arrival_at(now_, nd), seq_++, ev_kind::arrival, u, 0});
  }

  void start_contending(int u, ns_t at) {
    auto& nd = nodes_[u];
    if (opt_.mode == sim_mode::continuous) {
      nd.fire_at = at + std::max<ns_t>(1, to_ns(rng_.exponential(nd.mean_backoff_s)));
    } else {
      if (nd.remaining_slots < 0) nd.remaining_slots = rng_.uniform_int(0, nd.cw - 1);
      nd.anchor = at;
      nd.fire_at = at + difs_ns_ + static_cast<ns_t>(nd.remaining_slots) * slot_ns_;
    }
    push({nd.fire_at, seq_++, ev_kind::fire, u, ++nd.gen});
  }

  // A conflicting transmission just appeared: stop the countdown, banking
  // fully elapsed slots. A fire scheduled exactly now still fires (that is
  // the same-slot collision case), so leave it alone.
  void freeze(int u) {
    auto& nd = nodes_[u];
    if (!nd.contending() || nd.fire_at == now_) return;
    if (opt_.mode != sim_mode::continuous) {
      const ns_t counted_from = nd.anchor + difs_ns_;
      if (now_ > counted_from)
        nd.remaining_slots -= static_cast<int>(
            std::min<ns_t>((now_ - counted_from) / slot_ns_,
                           static_cast<ns_t>(nd.remaining_slots)));
    }
    nd.fire_at = -1;
    ++nd.gen;  // drops the scheduled fire when it pops
  }

  void on_fire(int u, std::uint64_t gen) {
    auto& nd = nodes_[u];
    if (gen != nd.gen || !nd.contending()) return;
    nd.fire_at = -1;
    nd.remaining_slots = -1;

    if (nd.sensed_busy > 0) {
      // Only simultaneous starts can legitimately reach here; anything that
      // began earlier would have frozen this node.
      for (std::uint64_t b = nd.conflicts; b;) {
        const int k = std::countr_zero(b);
        b &= b - 1;
        if (nodes_[k].in_tx && nodes_[k].tx_start != now_) {
          start_contending(u, now_);  // defensive: refreeze-and-retry
          return;
        }
      }
    }
    start_tx(u);
  }

  void start_tx(int u) {
    auto& nd = nodes_[u];
    ++nd.stats.attempts;
    nd.in_tx = true;
    nd.tx_start = now_;
    nd.tx_collided = false;

    // Same-instant conflicting transmissions are collisions in the slotted
    // modes; with capture, only within the same wlan. Every conflicting node
    // gains a sensed transmission either way: tx_end decrements them all.
    int intra = 1;
    for (std::uint64_t b = nd.conflicts; b;) {
      const int k = std::countr_zero(b);
      b &= b - 1;
      auto& other = nodes_[k];
      ++other.sensed_busy;
      if (other.in_tx) {
        if (other.wlan == nd.wlan) ++intra;
        const bool destroys = opt_.mode == sim_mode::slotted ||
                              (opt_.mode == sim_mode::slotted_capture && other.wlan == nd.wlan);
        if (destroys) nd.tx_collided = other.tx_collided = true;
      } else {
        freeze(k);
      }
    }
    max_intra_ = std::max(max_intra_, intra);

    for (std::uint64_t b = nd.covers; b;) {
      const int ch = std::countr_zero(b) + 1;
      b &= b - 1;
      if (cover_count_[ch]++ == 0) busy_since_[ch] = now_;
    }

    ns_t dur = nd.hold_ns;
    if (opt_.mode == sim_mode::continuous && opt_.durations == tx_dist::exponential)
      dur = std::max<ns_t>(1, to_ns(rng_.exponential(nd.mean_hold_s)));
    push({now_ + dur, seq_++, ev_kind::tx_end, u, 0});
  }

  void on_tx_end(int u) {
    auto& nd = nodes_[u];
    nd.in_tx = false;
    nd.stats.airtime_s += static_cast<double>(now_ - nd.tx_start) * 1e-9;

    for (std::uint64_t b = nd.covers; b;) {
      const int ch = std::countr_zero(b) + 1;
      b &= b - 1;
      if (--cover_count_[ch] == 0) busy_union_ns_[ch] += now_ - busy_since_[ch];
    }

    if (nd.tx_collided) {
      ++nd.stats.collisions;  // frame lost, stays queued for retransmission
    } else if (rng_.uniform01() < nd.eta) {
      ++nd.stats.successes;
      nd.stats.delivered_bits += nd.delivered_bits;
      if (!nd.saturated) --nd.queue;
    } else {
      ++nd.stats.failures;  // channel-error loss, retransmit
    }
    nd.tx_collided = false;

    for (std::uint64_t b = nd.conflicts; b;) {
      const int k = std::countr_zero(b);
      b &= b - 1;
      auto& other = nodes_[k];
      if (--other.sensed_busy == 0 && !other.in_tx && other.has_packet() &&
          !other.contending())
        start_contending(k, now_);
    }
    if (nd.sensed_busy == 0 && nd.has_packet()) start_contending(u, now_);
  }

  sim_result finish() {
    sim_result res;
    res.duration_s = opt_.duration_s;
    res.seed = opt_.seed;
    res.mode = opt_.mode;
    res.max_intra_wlan_concurrency = max_intra_;
    for (auto& nd : nodes_) {
      if (nd.in_tx) nd.stats.airtime_s += static_cast<double>(horizon_ - nd.tx_start) * 1e-9;
      nd.stats.wlan = nd.wlan;
      nd.stats.node = nd.node;
      res.nodes.push_back(nd.stats);
    }
    res.channel_busy_s.assign(busy_union_ns_.size(), 0.0);
    for (std::size_t ch = 1; ch < busy_union_ns_.size(); ++ch) {
      ns_t total = busy_union_ns_[ch];
      if (cover_count_[ch] > 0) total += horizon_ - busy_since_[ch];
      res.channel_busy_s[ch] = static_cast<double>(total) * 1e-9;
    }
    return res;
  }

  sim_options opt_;
  rng rng_;
  ns_t horizon_;
  ns_t difs_ns_ = 0, slot_ns_ = 0;
  ns_t now_ = 0;
  std::uint64_t seq_ = 0;
  std::vector<sim_node> nodes_;
  std::priority_queue<event, std::vector<event>, event_later> queue_;
  std::vector<int> cover_count_;
  std::vector<ns_t> busy_since_;
  std::vector<ns_t> busy_union_ns_;
  int max_intra_ = 1;
};

}  // namespace

sim_result run_sim(const network_scenario& s, const sim_options& opt) {
  validate(s);
  engine e(s, opt);
  return e.run();
}

validation_report compare_model_sim(const network_scenario& s, const sim_options& sopt,
                                    const solve_options& mopt) {
  validation_report rep;
  rep.model = solve_fixed_point(s, solve_mode::node_centric, mopt);
  rep.sim = run_sim(s, sopt);
  for (const auto& m : rep.model.nodes) {
    validation_row row;
    row.wlan = m.wlan;
    row.node = m.node;
    row.model_bps = m.throughput_bps;
    row.sim_bps = rep.sim.throughput_bps(m.wlan, m.node);
    row.rel_err = row.model_bps > 0 ? (row.sim_bps - row.model_bps) / row.model_bps : 0.0;
    rep.max_abs_rel_err = std::max(rep.max_abs_rel_err, std::abs(row.rel_err));
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace cbond
