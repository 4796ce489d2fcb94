#pragma once

namespace dfrsim {

// Mobile-height correction constant for the macro path-loss formula. "paper"
// keeps the trailing constant at 8; "standard" uses the classical 0.8 for
// small/medium cities. Both are selectable because the two differ by a
// constant 7.2 dB at 900 MHz and only one can be physically intended.
enum class HataMode { paper, standard };

struct MacroLinkParams {
  double f_c_mhz = 0.0;       // carrier frequency, MHz
  double h_b_m = 0.0;         // base-station antenna height, m
  double h_m_m = 0.0;         // mobile antenna height, m
  double d_km = 0.0;          // 2-D distance, km
  double shadowing_db = 0.0;  // realized log-normal shadowing, dB
};

struct FemtoLinkParams {
  double f_c_mhz = 0.0;      // carrier frequency, MHz
  double d1_m = 0.0;         // access-point to user distance, m
  double decay_index = 0.0;  // power decay index
};

double hata_correction(double f_c_mhz, double h_m_m, HataMode mode);
double hata_path_loss(const MacroLinkParams& p, HataMode mode);
double femto_path_loss(const FemtoLinkParams& p);

double received_power_w(double tx_power_w, double loss_db);

double watts_to_dbm(double watts);
double dbm_to_watts(double dbm);

}  // namespace dfrsim
