#include "dfrsim/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace dfrsim {

double hata_correction(double f_c_mhz, double h_m_m, HataMode mode) {
  if (!(f_c_mhz > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  double c = (mode == HataMode::paper) ? 8.0 : 0.8;
  double lf = std::log10(f_c_mhz);
  return 1.1 * (lf - 0.7) * h_m_m - (1.56 * lf - c);
}

double hata_path_loss(const MacroLinkParams& p, HataMode mode) {
  if (!(p.f_c_mhz > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  if (!(p.h_b_m > 0.0)) throw std::invalid_argument("base-station height must be positive");
  if (!(p.h_m_m > 0.0)) throw std::invalid_argument("mobile height must be positive");
  if (!(p.d_km > 0.0)) throw std::invalid_argument("distance must be positive");
  double lf = std::log10(p.f_c_mhz);
  double lhb = std::log10(p.h_b_m);
  return 69.55 + 26.16 * lf - 13.82 * lhb - hata_correction(p.f_c_mhz, p.h_m_m, mode) +
         (44.9 - 6.55 * lhb) * std::log10(p.d_km) + p.shadowing_db;
}

double femto_path_loss(const FemtoLinkParams& p) {
  if (!(p.f_c_mhz > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  if (!(p.d1_m > 0.0)) throw std::invalid_argument("distance must be positive");
  if (!(p.decay_index > 0.0)) throw std::invalid_argument("decay index must be positive");
  return 20.0 * std::log10(p.f_c_mhz) + p.decay_index * std::log10(p.d1_m) - 28.0;
}

double received_power_w(double tx_power_w, double loss_db) {
  if (!(tx_power_w > 0.0)) throw std::invalid_argument("transmit power must be positive");
  return tx_power_w * std::pow(10.0, -loss_db / 10.0);
}

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

}  // namespace dfrsim
