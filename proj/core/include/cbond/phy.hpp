#pragma once

#include <array>
#include <stdexcept>

namespace cbond {

// Raised for semantic model errors (unsupported widths, bad reductions,
// infeasible parameters). Scenario file syntax problems use parse_error.
struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-width modulation and coding parameters. Rates assume 4 us OFDM symbols.
struct mcs_entry {
  int width;                // bonded width, in basic channels
  int data_subcarriers;     // usable data subcarriers at this width
  int bits_per_subcarrier;  // modulation bits per subcarrier per symbol
  double coding_rate;

  double bits_per_symbol() const {
    return data_subcarriers * bits_per_subcarrier * coding_rate;
  }
  double nominal_rate_bps(double t_sym) const { return bits_per_symbol() / t_sym; }
};

// Widths with a defined rate row. Any other width needs an explicit
// per-node airtime override in the scenario.
const std::array<mcs_entry, 4>& mcs_table();
const mcs_entry* find_mcs(int width);    // nullptr when the width has no row
const mcs_entry& mcs_for_width(int width);  // throws model_error instead

// Protocol timing and framing constants. Durations in seconds, sizes in bits.
struct mac_constants {
  double t_phy = 40e-6;       // PHY preamble + header
  double t_sym = 4e-6;        // OFDM symbol
  int sf_bits = 16;           // service field
  int mpdu_delim_bits = 32;   // per-MPDU delimiter
  int mac_header_bits = 288;  // per-MPDU MAC header
  int tail_bits = 6;
  int ba_bits = 256;          // block-ack frame
  double sifs = 16e-6;
  double difs = 34e-6;
  double t_slot = 9e-6;
  int n_a = 64;  // MPDUs aggregated per PPDU
  int n_su = 2;  // spatial streams

  bool operator==(const mac_constants&) const = default;
};

// Duration of one complete transmission: aggregate data PPDU, SIFS, the
// block-ack reply (sent on the primary channel at the base width-1 rate,
// single stream), then DIFS and one empty slot before the next contention
// round. The slotted simulator peels the trailing difs + slot back off.
double tx_duration(int width, double packet_bits, const mac_constants& mac = {});

// Probability a frame survives noise, hidden terminals and external
// interference; the three loss sources are independent.
double success_probability(double p_noise, double p_hidden, double p_ext);

// Mean backoff E[B] maps to an attempt rate lambda = 1/E[B].
double backoff_rate(double mean_backoff);
double mean_backoff_from_cw(int cw_slots, double t_slot = 9e-6);

// theta = rho * lambda * E[T]: fraction of time a transmitter would hold the
// medium if it never had to defer, scaled by how often it has traffic.
double activity_ratio(double rho, double lambda, double mean_tx);

}  // namespace cbond
