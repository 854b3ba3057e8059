#include "cbond/phy.hpp"

#include <cmath>
#include <string>

namespace cbond {

const std::array<mcs_entry, 4>& mcs_table() {
  // 20/40/80/160 MHz rows: subcarriers grow slightly sub-proportionally and
  // the robust modulation drops at wide widths, so rate less than doubles
  // per doubling (260 / 486 / 702 / 936 bits per symbol).
  static const std::array<mcs_entry, 4> table = {{
      {1, 52, 6, 5.0 / 6.0},
      {2, 108, 6, 3.0 / 4.0},
      {4, 234, 4, 3.0 / 4.0},
      {8, 468, 4, 1.0 / 2.0},
  }};
  return table;
}

const mcs_entry* find_mcs(int width) {
  for (const auto& row : mcs_table())
    if (row.width == width) return &row;
  return nullptr;
}

const mcs_entry& mcs_for_width(int width) {
  if (const auto* row = find_mcs(width)) return *row;
  throw model_error("no rate row for width " + std::to_string(width) +
                    " (supported: 1, 2, 4, 8); use an airtime override");
}

double tx_duration(int width, double packet_bits, const mac_constants& mac) {
  if (packet_bits <= 0) throw model_error("packet_bits must be positive");
  const mcs_entry& data_row = mcs_for_width(width);
  const mcs_entry& base_row = mcs_for_width(1);

  const double data_bits =
      mac.sf_bits +
      static_cast<double>(mac.n_a) * (mac.mpdu_delim_bits + mac.mac_header_bits + packet_bits) +
      mac.tail_bits;
  const double data_syms = std::ceil(data_bits / (mac.n_su * data_row.bits_per_symbol()));

  // The block-ack is short enough that it is always sent single-stream at the
  // base rate, whatever width the data used.
  const double ba_bits = mac.sf_bits + mac.ba_bits + mac.tail_bits;
  const double ba_syms = std::ceil(ba_bits / base_row.bits_per_symbol());

  return (mac.t_phy + data_syms * mac.t_sym) + mac.sifs +
         (mac.t_phy + ba_syms * mac.t_sym) + mac.difs + mac.t_slot;
}

double success_probability(double p_noise, double p_hidden, double p_ext) {
  for (double p : {p_noise, p_hidden, p_ext})
    if (p < 0.0 || p > 1.0) throw model_error("loss probabilities must lie in [0, 1]");
  return (1.0 - p_noise) * (1.0 - p_hidden) * (1.0 - p_ext);
}

double backoff_rate(double mean_backoff) {
  if (mean_backoff <= 0) throw model_error("mean backoff must be positive");
  return 1.0 / mean_backoff;
}

double mean_backoff_from_cw(int cw_slots, double t_slot) {
  if (cw_slots < 1) throw model_error("contention window must be at least 1 slot");
  return 0.5 * cw_slots * t_slot;
}

double activity_ratio(double rho, double lambda, double mean_tx) {
  if (rho < 0 || rho > 1) throw model_error("rho must lie in [0, 1]");
  return rho * lambda * mean_tx;
}

}  // namespace cbond
