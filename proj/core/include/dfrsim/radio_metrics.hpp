#pragma once

#include <vector>

namespace dfrsim {

// One evaluated downlink, all powers in linear watts.
struct LinkSample {
  int user_id = 0;
  double desired_w = 0.0;        // received power from the serving transmitter
  double macro_interf_w = 0.0;   // sum over macro-tier interferers
  double femto_interf_w = 0.0;   // sum over femto-tier interferers
  double noise_w = 0.0;
  double x_prob = 1.0;           // macro interferer activity probability
  double y_prob = 1.0;           // femto interferer activity probability
  double bandwidth_hz = 0.0;
};

// Per-user sum rates grouped by user class, for the system-wide average.
struct UserClassRates {
  std::vector<double> mue_rates;
  std::vector<double> inner_fue_rates;
  std::vector<double> edge_fue_rates;
};

double sinr(const LinkSample& sample);

double capacity(double bandwidth_hz, double sinr_linear);

// Rate summed over the subcarriers a user holds, one SINR per subcarrier.
double user_rate(const std::vector<double>& per_subcarrier_sinrs, double delta_b_hz);

// Probability that instantaneous SINR falls below the threshold, for an
// exponentially distributed instantaneous SINR around the given mean.
double outage_probability(double mean_sinr_linear, double zeta_linear);

// Sum over the three user classes of the class's average per-user rate;
// an empty class contributes zero.
double average_sum_rate(const UserClassRates& rates);

}  // namespace dfrsim
