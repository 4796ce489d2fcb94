#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfrsim/allocation.hpp"
#include "dfrsim/propagation.hpp"
#include "dfrsim/spectrum_plan.hpp"

namespace dfrsim {

// Femto spectrum policies. dfr_guard is the full dynamic-reuse mechanism with
// guard sub-bands for cell-edge femtos; dfr_plain disables the guard branch
// (every femto allocated as inner) to isolate the guard region's own
// contribution; the remaining three are static baselines.
enum class Scheme { dfr_guard, dfr_plain, cochannel, dedicated, hybrid };

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

enum class UserClass { mue, inner_fue, edge_fue };

std::string_view user_class_name(UserClass c);

struct ExperimentConfig {
  // spectrum
  double macro_width_hz = 10e6;
  double guard_width_hz = 2e6;
  // propagation
  double f_c_mhz = 900.0;
  double macro_bs_height_m = 50.0;
  double ue_height_m = 1.5;
  HataMode hata_mode = HataMode::paper;
  double macro_shadow_sigma_db = 8.0;
  double femto_shadow_sigma_db = 0.0;
  double femto_decay_index = 30.0;
  // allocation; s_th_dbm empty means "derive from geometry": the neighbor
  // macro's received power at one cell radius, no shadowing
  std::optional<double> s_th_dbm;
  double sensing_radius_m = 60.0;
  // metrics
  double macro_activity = 1.0;
  double femto_activity = 1.0;
  double noise_figure_db = 9.0;
  double subcarrier_hz = 15000.0;
  // scenario
  std::vector<Scheme> schemes = {Scheme::dfr_guard, Scheme::dfr_plain, Scheme::cochannel,
                                 Scheme::dedicated, Scheme::hybrid};
  std::vector<int> densities = {15};  // interfering femtos per trial
  double reference_distance_m = 900.0;
  long trials = 1000;
  std::uint64_t seed = 1;
  double macro_radius_m = 1000.0;
  double femto_radius_m = 10.0;
  double macro_tx_w = 1500.0;
  double femto_tx_w = 0.01;
  double femto_height_m = 2.0;
  double zeta_db = 7.0;
  int threads = 1;  // 0 = hardware concurrency

  double s_th_w() const;
  void validate() const;  // throws std::invalid_argument naming the bad field
};

// One generated trial world. FAP ids are 10 (reference), 11, ... in ascending
// order; each FUE id is its FAP id + 100; MUE ids are 201..203.
struct Deployment {
  std::array<NetworkNode, 3> macros;
  std::vector<NetworkNode> faps;
  std::vector<NetworkNode> fues;  // parallel to faps
  std::array<NetworkNode, 3> mues;
  int n_interfering = 0;
};

// Deterministic shadowing field for one trial. Every (transmitter, receiver
// site) pair owns an independent substream, so draws never depend on query
// order, and a user at a femtocell site shares that site's macro shadowing.
class TrialShadow : public ShadowSampler {
 public:
  TrialShadow(const ExperimentConfig& cfg, long trial)
      : seed_(cfg.seed), trial_(trial), macro_sigma_db_(cfg.macro_shadow_sigma_db),
        femto_sigma_db_(cfg.femto_shadow_sigma_db) {}

  double macro_shadow_db(int macro_index, int site_id) const override;
  double femto_shadow_db(int tx_femto_id, int site_id) const;

 private:
  std::uint64_t seed_;
  long trial_;
  double macro_sigma_db_;
  double femto_sigma_db_;
};

// Builds the trial world: three macro sites on a reuse-3 cluster, the
// reference femtocell at the configured distance from macro 1, n_interfering
// femtocells scattered within sensing range of it, one user per femtocell,
// and one macro user per cell.
Deployment generate_deployment(const ExperimentConfig& cfg, int n_interfering, long trial);

// Sensed (serving macro, zone) per FAP, in FAP order. Scheme-independent:
// user classes compare like with like across schemes.
std::vector<std::pair<int, Zone>> classify_femtos(const Deployment& dep,
                                                  const ExperimentConfig& cfg, long trial);

std::vector<FemtoAllocation> apply_scheme(const Deployment& dep, Scheme scheme,
                                          const SpectrumPlan& plan, const ExperimentConfig& cfg,
                                          long trial);

struct ResultRow {
  Scheme scheme = Scheme::dfr_guard;
  int n_femtos = 0;
  long trial = 0;
  UserClass user_class = UserClass::mue;
  int user_id = 0;
  double sinr_db = 0.0;
  double rate_bps = 0.0;
  double outage_prob = 0.0;
};

struct TrialEvaluation {
  std::vector<ResultRow> rows;     // user_id ascending: FUEs then MUEs
  double avg_sum_rate_bps = 0.0;   // sum of the three per-class mean rates
};

TrialEvaluation evaluate(const Deployment& dep, const std::vector<FemtoAllocation>& allocations,
                         Scheme scheme, const SpectrumPlan& plan, const ExperimentConfig& cfg,
                         long trial);

// Aggregates for one (scheme, density, user-class) cell. Class "fue_all"
// pools inner and edge femto users; class "system" carries the trial-mean
// system sum rate in its rate column and pools every user elsewhere.
struct SummaryRow {
  Scheme scheme = Scheme::dfr_guard;
  int n_femtos = 0;
  std::string user_class;
  long samples = 0;
  double mean_sinr_db = 0.0;
  double mean_rate_bps = 0.0;
  double rate_ci95_bps = 0.0;
  double mean_goodput_bps = 0.0;
  double goodput_ci95_bps = 0.0;
  double mean_outage = 0.0;
  double outage_ci95 = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;      // scheme-major, then density, trial, user id
  std::vector<SummaryRow> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace dfrsim
