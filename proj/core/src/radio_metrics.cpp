#include "dfrsim/radio_metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dfrsim {

double sinr(const LinkSample& sample) {
  if (sample.desired_w < 0.0 || sample.macro_interf_w < 0.0 || sample.femto_interf_w < 0.0 ||
      sample.noise_w < 0.0)
    throw std::invalid_argument("powers must be non-negative");
  if (sample.x_prob < 0.0 || sample.x_prob > 1.0 || sample.y_prob < 0.0 || sample.y_prob > 1.0)
    throw std::invalid_argument("activity probabilities must be within [0, 1]");
  double denom = sample.x_prob * sample.macro_interf_w + sample.y_prob * sample.femto_interf_w +
                 sample.noise_w;
  if (!(denom > 0.0)) throw std::domain_error("SINR undefined: zero noise and zero interference");
  return sample.desired_w / denom;
}

double capacity(double bandwidth_hz, double sinr_linear) {
  if (bandwidth_hz < 0.0) throw std::invalid_argument("bandwidth must be non-negative");
  if (sinr_linear < 0.0) throw std::invalid_argument("SINR must be non-negative");
  return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

double user_rate(const std::vector<double>& per_subcarrier_sinrs, double delta_b_hz) {
  if (!(delta_b_hz > 0.0)) throw std::invalid_argument("subcarrier width must be positive");
  double rate = 0.0;
  for (double s : per_subcarrier_sinrs) {
    if (s < 0.0) throw std::invalid_argument("SINR must be non-negative");
    rate += delta_b_hz * std::log2(1.0 + s);
  }
  return rate;
}

double outage_probability(double mean_sinr_linear, double zeta_linear) {
  if (!(mean_sinr_linear > 0.0)) throw std::invalid_argument("mean SINR must be positive");
  if (!(zeta_linear > 0.0)) throw std::invalid_argument("threshold must be positive");
  return 1.0 - std::exp(-zeta_linear / mean_sinr_linear);
}

double average_sum_rate(const UserClassRates& rates) {
  auto class_mean = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (double r : v) sum += r;
    return sum / static_cast<double>(v.size());
  };
  return class_mean(rates.mue_rates) + class_mean(rates.inner_fue_rates) +
         class_mean(rates.edge_fue_rates);
}

}  // namespace dfrsim
