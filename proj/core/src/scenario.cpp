#include "dfrsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "dfrsim/radio_metrics.hpp"
#include "dfrsim/rng.hpp"

namespace dfrsim {

namespace {

// Substream purpose tags; every random quantity hangs off (seed, tag, trial,
// entity...) so adding draws to one purpose never shifts another.
constexpr std::uint64_t kTagFapPos = 1;
constexpr std::uint64_t kTagFuePos = 2;
constexpr std::uint64_t kTagMuePos = 3;
constexpr std::uint64_t kTagShadowMacro = 4;
constexpr std::uint64_t kTagShadowFemto = 5;

constexpr int kReferenceFapId = 10;
constexpr int kFueIdOffset = 100;
constexpr int kFirstMueId = 201;

constexpr double kMinFemtoLinkM = 0.1;   // femto propagation model floor
constexpr double kMinMacroLinkM = 1.0;   // macro propagation model floor

Pos polar_offset(Pos center, double r, double theta) {
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

// Uniform point in a disc of the given radius, rejecting radii below min_r.
Pos disc_point(Rand& rand, Pos center, double radius, double min_r) {
  for (;;) {
    double r = radius * std::sqrt(rand.uniform01_halfopen());
    double theta = 2.0 * std::numbers::pi * rand.uniform01_halfopen();
    if (r >= min_r) return polar_offset(center, r, theta);
  }
}

AllocationParams make_alloc_params(const ExperimentConfig& cfg) {
  AllocationParams p;
  p.s_th_w = cfg.s_th_w();
  p.sensing_radius_m = cfg.sensing_radius_m;
  p.f_c_mhz = cfg.f_c_mhz;
  p.hata_mode = cfg.hata_mode;
  return p;
}

World make_world(const Deployment& dep, const SpectrumPlan& plan, const ExperimentConfig& cfg,
                 bool guard_enabled) {
  AllocationParams p = make_alloc_params(cfg);
  p.guard_enabled = guard_enabled;
  return World(plan, dep.macros, p);
}

double macro_rx_w(const ExperimentConfig& cfg, const NetworkNode& bs, Pos rx, double rx_height_m,
                  double shadow_db) {
  double d_m = std::max(distance(bs.position, rx), kMinMacroLinkM);
  MacroLinkParams link{cfg.f_c_mhz, bs.height_m, rx_height_m, d_m / 1000.0, shadow_db};
  return received_power_w(bs.tx_power_w, hata_path_loss(link, cfg.hata_mode));
}

double femto_rx_w(const ExperimentConfig& cfg, const NetworkNode& fap, Pos rx, double shadow_db) {
  double d_m = std::max(distance(fap.position, rx), kMinFemtoLinkM);
  FemtoLinkParams link{cfg.f_c_mhz, d_m, cfg.femto_decay_index};
  return received_power_w(fap.tx_power_w, femto_path_loss(link) + shadow_db);
}

double noise_density_w_per_hz(const ExperimentConfig& cfg) {
  return dbm_to_watts(-174.0 + cfg.noise_figure_db);
}

struct RunningStat {
  long n = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sumsq += v * v;
  }
  double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
  double ci95() const {
    if (n < 2) return 0.0;
    double m = mean();
    double var = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return 1.96 * std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
};

struct CellStats {
  RunningStat sinr_db;
  RunningStat rate;
  RunningStat goodput;
  RunningStat outage;

  void add(const ResultRow& row) {
    sinr_db.add(row.sinr_db);
    rate.add(row.rate_bps);
    goodput.add(row.rate_bps * (1.0 - row.outage_prob));
    outage.add(row.outage_prob);
  }
};

SummaryRow make_summary_row(Scheme scheme, int n_femtos, const std::string& user_class,
                            const CellStats& st) {
  SummaryRow row;
  row.scheme = scheme;
  row.n_femtos = n_femtos;
  row.user_class = user_class;
  row.samples = st.rate.n;
  row.mean_sinr_db = st.sinr_db.mean();
  row.mean_rate_bps = st.rate.mean();
  row.rate_ci95_bps = st.rate.ci95();
  row.mean_goodput_bps = st.goodput.mean();
  row.goodput_ci95_bps = st.goodput.ci95();
  row.mean_outage = st.outage.mean();
  row.outage_ci95 = st.outage.ci95();
  return row;
}

}  // namespace

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::dfr_guard: return "dfr_guard";
    case Scheme::dfr_plain: return "dfr_plain";
    case Scheme::cochannel: return "cochannel";
    case Scheme::dedicated: return "dedicated";
    case Scheme::hybrid: return "hybrid";
  }
  throw std::invalid_argument("unknown scheme value");
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::dfr_guard, Scheme::dfr_plain, Scheme::cochannel, Scheme::dedicated,
                   Scheme::hybrid}) {
    if (name == scheme_name(s)) return s;
  }
  return std::nullopt;
}

std::string_view user_class_name(UserClass c) {
  switch (c) {
    case UserClass::mue: return "mue";
    case UserClass::inner_fue: return "inner_fue";
    case UserClass::edge_fue: return "edge_fue";
  }
  throw std::invalid_argument("unknown user class value");
}

double ExperimentConfig::s_th_w() const {
  if (s_th_dbm.has_value()) return dbm_to_watts(*s_th_dbm);
  // Geometry-derived default: a femto at one macro's site hears a neighbor
  // macro from (at least) one cell radius away, so the zero-shadowing
  // received power at that distance separates "only my macro is loud" from
  // "a neighbor is still loud" — the cell-edge condition.
  MacroLinkParams link{f_c_mhz, macro_bs_height_m, femto_height_m, macro_radius_m / 1000.0, 0.0};
  return received_power_w(macro_tx_w, hata_path_loss(link, hata_mode));
}

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(macro_width_hz, "macro_width_hz");
  positive(guard_width_hz, "guard_width_hz");
  positive(f_c_mhz, "carrier_mhz");
  positive(macro_bs_height_m, "macro_bs_height_m");
  positive(ue_height_m, "ue_height_m");
  positive(femto_decay_index, "femto_decay_index");
  positive(sensing_radius_m, "sensing_radius_m");
  positive(subcarrier_hz, "subcarrier_hz");
  positive(macro_radius_m, "macro_radius_m");
  positive(femto_radius_m, "femto_radius_m");
  positive(macro_tx_w, "macro_tx_w");
  positive(femto_tx_w, "femto_tx_w");
  positive(femto_height_m, "femto_height_m");
  if (!std::isfinite(zeta_db)) throw std::invalid_argument("zeta_db must be finite");
  if (macro_shadow_sigma_db < 0.0)
    throw std::invalid_argument("macro_shadow_sigma_db must be non-negative");
  if (femto_shadow_sigma_db < 0.0)
    throw std::invalid_argument("femto_shadow_sigma_db must be non-negative");
  if (macro_activity < 0.0 || macro_activity > 1.0)
    throw std::invalid_argument("macro_activity must be in [0, 1]");
  if (femto_activity < 0.0 || femto_activity > 1.0)
    throw std::invalid_argument("femto_activity must be in [0, 1]");
  if (schemes.empty()) throw std::invalid_argument("schemes must not be empty");
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    for (std::size_t j = i + 1; j < schemes.size(); ++j) {
      if (schemes[i] == schemes[j]) throw std::invalid_argument("schemes must be unique");
    }
  }
  if (densities.empty()) throw std::invalid_argument("densities must not be empty");
  for (int n : densities) {
    if (n < 0) throw std::invalid_argument("densities must be non-negative");
  }
  for (std::size_t i = 0; i < densities.size(); ++i) {
    for (std::size_t j = i + 1; j < densities.size(); ++j) {
      if (densities[i] == densities[j]) throw std::invalid_argument("densities must be unique");
    }
  }
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (threads < 0) throw std::invalid_argument("threads must be non-negative");
  if (!(reference_distance_m > 0.0))
    throw std::invalid_argument("reference_distance_m must be positive");
  if (reference_distance_m > macro_radius_m)
    throw std::invalid_argument("reference_distance_m exceeds macro_radius_m");
}

double TrialShadow::macro_shadow_db(int macro_index, int site_id) const {
  if (macro_sigma_db_ == 0.0) return 0.0;
  Rand rand = substream({seed_, kTagShadowMacro, static_cast<std::uint64_t>(trial_),
                         static_cast<std::uint64_t>(macro_index),
                         static_cast<std::uint64_t>(site_id)});
  return macro_sigma_db_ * rand.gauss();
}

double TrialShadow::femto_shadow_db(int tx_femto_id, int site_id) const {
  if (femto_sigma_db_ == 0.0) return 0.0;
  Rand rand = substream({seed_, kTagShadowFemto, static_cast<std::uint64_t>(trial_),
                         static_cast<std::uint64_t>(tx_femto_id),
                         static_cast<std::uint64_t>(site_id)});
  return femto_sigma_db_ * rand.gauss();
}

Deployment generate_deployment(const ExperimentConfig& cfg, int n_interfering, long trial) {
  cfg.validate();
  if (n_interfering < 0) throw std::invalid_argument("n_interfering must be non-negative");
  const double r = cfg.macro_radius_m;
  const double root3 = std::sqrt(3.0);

  Deployment dep;
  dep.n_interfering = n_interfering;
  dep.macros = {NetworkNode{1, Tier::macro, {0.0, 0.0}, cfg.macro_tx_w, cfg.macro_bs_height_m, 1},
                NetworkNode{2, Tier::macro, {root3 * r, 0.0}, cfg.macro_tx_w,
                            cfg.macro_bs_height_m, 2},
                NetworkNode{3, Tier::macro, {root3 * r / 2.0, 1.5 * r}, cfg.macro_tx_w,
                            cfg.macro_bs_height_m, 3}};

  // Reference femtocell: placed toward the centroid of the three macro sites,
  // at the configured distance from macro 1.
  Pos ref{cfg.reference_distance_m * root3 / 2.0, cfg.reference_distance_m / 2.0};
  dep.faps.push_back(
      NetworkNode{kReferenceFapId, Tier::femto, ref, cfg.femto_tx_w, cfg.femto_height_m, 0});

  for (int k = 0; k < n_interfering; ++k) {
    Rand rand = substream({cfg.seed, kTagFapPos, static_cast<std::uint64_t>(trial),
                           static_cast<std::uint64_t>(k)});
    Pos p = disc_point(rand, ref, cfg.sensing_radius_m, 0.0);
    dep.faps.push_back(NetworkNode{kReferenceFapId + 1 + k, Tier::femto, p, cfg.femto_tx_w,
                                   cfg.femto_height_m, 0});
  }

  for (const NetworkNode& fap : dep.faps) {
    Rand rand = substream({cfg.seed, kTagFuePos, static_cast<std::uint64_t>(trial),
                           static_cast<std::uint64_t>(fap.id)});
    Pos p = disc_point(rand, fap.position, cfg.femto_radius_m, kMinFemtoLinkM);
    dep.fues.push_back(NetworkNode{fap.id + kFueIdOffset, Tier::femto, p, 0.0, cfg.ue_height_m,
                                   0});
  }
  for (int i = 0; i < 3; ++i) {
    int id = kFirstMueId + i;
    Rand rand = substream({cfg.seed, kTagMuePos, static_cast<std::uint64_t>(trial),
                           static_cast<std::uint64_t>(id)});
    Pos p = disc_point(rand, dep.macros[i].position, cfg.macro_radius_m, kMinMacroLinkM);
    dep.mues[i] = NetworkNode{id, Tier::macro, p, 0.0, cfg.ue_height_m, i + 1};
  }
  return dep;
}

std::vector<std::pair<int, Zone>> classify_femtos(const Deployment& dep,
                                                  const ExperimentConfig& cfg, long trial) {
  World world = make_world(dep, build_plan(cfg.macro_width_hz, cfg.guard_width_hz), cfg, true);
  TrialShadow shadow(cfg, trial);
  double s_th = cfg.s_th_w();
  std::vector<std::pair<int, Zone>> out;
  out.reserve(dep.faps.size());
  for (const NetworkNode& fap : dep.faps) {
    out.push_back(classify(world.sense(fap, shadow), s_th));
  }
  return out;
}

namespace {

std::vector<FemtoAllocation> apply_scheme_impl(const Deployment& dep, Scheme scheme,
                                               const SpectrumPlan& plan,
                                               const ExperimentConfig& cfg, long trial,
                                               const std::vector<std::pair<int, Zone>>& sensed) {
  TrialShadow shadow(cfg, trial);

  if (scheme == Scheme::dfr_guard || scheme == Scheme::dfr_plain) {
    World world = make_world(dep, plan, cfg, scheme == Scheme::dfr_guard);
    for (const NetworkNode& fap : dep.faps) world.install_femto(fap, shadow);
    return world.snapshot();
  }

  std::vector<FemtoAllocation> out;
  out.reserve(dep.faps.size());

  if (scheme == Scheme::cochannel) {
    // Every femto reuses its serving macro's whole band; no coordination.
    for (std::size_t i = 0; i < dep.faps.size(); ++i) {
      FemtoAllocation a;
      a.femto_id = dep.faps[i].id;
      a.serving_macro = sensed[i].first;
      a.zone = sensed[i].second;
      a.group = {a.femto_id};
      a.bands = {full_fragment(SpectrumPlan::macro_parent(a.serving_macro))};
      out.push_back(std::move(a));
    }
    return out;
  }

  // dedicated / hybrid both split the dedicated femto band (the three guard
  // sub-bands) equally among femtos that can hear each other; grouping is
  // purely geometric, so overlapping femtos never share a slice even across
  // macro borders.
  std::vector<int> ids;
  std::vector<Pos> positions;
  std::vector<long> keys(dep.faps.size(), 0);
  for (const NetworkNode& fap : dep.faps) {
    ids.push_back(fap.id);
    positions.push_back(fap.position);
  }
  std::vector<std::vector<int>> groups =
      conflict_components(ids, positions, keys, cfg.sensing_radius_m);

  std::unordered_map<int, std::size_t> index_of;
  for (std::size_t i = 0; i < dep.faps.size(); ++i) index_of[dep.faps[i].id] = i;

  const std::vector<int> guard_parents = {SpectrumPlan::guard_parent(1),
                                          SpectrumPlan::guard_parent(2),
                                          SpectrumPlan::guard_parent(3)};
  for (const std::vector<int>& group : groups) {
    std::vector<BandSet> slices =
        tile_pool(plan, guard_parents, static_cast<int>(group.size()));
    for (std::size_t j = 0; j < group.size(); ++j) {
      std::size_t i = index_of.at(group[j]);
      FemtoAllocation a;
      a.femto_id = group[j];
      a.serving_macro = sensed[i].first;
      a.zone = sensed[i].second;
      a.group = group;
      if (scheme == Scheme::hybrid && sensed[i].second == Zone::inner) {
        // Hybrid: inner femtos fall back to co-channel reuse; their dedicated
        // slice stays idle.
        a.bands = {full_fragment(SpectrumPlan::macro_parent(a.serving_macro))};
      } else {
        a.bands = slices[j];
      }
      out.push_back(std::move(a));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FemtoAllocation& a, const FemtoAllocation& b) {
              return a.femto_id < b.femto_id;
            });
  return out;
}

TrialEvaluation evaluate_impl(const Deployment& dep,
                              const std::vector<FemtoAllocation>& allocations, Scheme scheme,
                              const SpectrumPlan& plan, const ExperimentConfig& cfg, long trial,
                              const std::vector<std::pair<int, Zone>>& sensed) {
  TrialShadow shadow(cfg, trial);
  std::unordered_map<int, const FemtoAllocation*> alloc_of;
  for (const FemtoAllocation& a : allocations) alloc_of[a.femto_id] = &a;

  const double n0 = noise_density_w_per_hz(cfg);
  const double zeta = std::pow(10.0, cfg.zeta_db / 10.0);

  TrialEvaluation ev;
  ev.rows.reserve(dep.fues.size() + dep.mues.size());
  UserClassRates rates;

  auto macro_interference_w = [&](const BandSet& band, Pos rx, double rx_height_m,
                                  int site_id) {
    double total = 0.0;
    for (int m = 1; m <= 3; ++m) {
      BandSet macro_band = {full_fragment(SpectrumPlan::macro_parent(m))};
      double ow = band_overlap_hz(plan, band, macro_band);
      if (ow <= 0.0) continue;
      double share = ow / plan.bands[SpectrumPlan::macro_parent(m)].width_hz;
      total += share * macro_rx_w(cfg, dep.macros[m - 1], rx, rx_height_m,
                                  shadow.macro_shadow_db(m, site_id));
    }
    return total;
  };

  auto femto_interference_w = [&](const BandSet& band, Pos rx, int site_id, int skip_fap_id) {
    double total = 0.0;
    for (const NetworkNode& fap : dep.faps) {
      if (fap.id == skip_fap_id) continue;
      if (distance(fap.position, rx) > cfg.sensing_radius_m) continue;
      auto it = alloc_of.find(fap.id);
      if (it == alloc_of.end()) continue;
      const BandSet& tx_band = it->second->bands;
      double ow = band_overlap_hz(plan, band, tx_band);
      if (ow <= 0.0) continue;
      double tx_width = band_width_hz(plan, tx_band);
      total += (ow / tx_width) *
               femto_rx_w(cfg, fap, rx, shadow.femto_shadow_db(fap.id, site_id));
    }
    return total;
  };

  for (std::size_t i = 0; i < dep.faps.size(); ++i) {
    const NetworkNode& fap = dep.faps[i];
    const NetworkNode& fue = dep.fues[i];
    const FemtoAllocation& alloc = *alloc_of.at(fap.id);
    const double width = band_width_hz(plan, alloc.bands);
    // The user shares its femtocell's site for shadowing purposes: what the
    // access point sensed is what the user standing next to it experiences.
    const int site = fap.id;

    double d1 = distance(fap.position, fue.position);
    FemtoLinkParams desired_link{cfg.f_c_mhz, std::max(d1, kMinFemtoLinkM),
                                 cfg.femto_decay_index};
    double desired = received_power_w(
        fap.tx_power_w, femto_path_loss(desired_link) + shadow.femto_shadow_db(fap.id, site));

    LinkSample link;
    link.user_id = fue.id;
    link.desired_w = desired;
    link.macro_interf_w = macro_interference_w(alloc.bands, fue.position, fue.height_m, site);
    link.femto_interf_w = femto_interference_w(alloc.bands, fue.position, site, fap.id);
    link.noise_w = n0 * width;
    link.x_prob = cfg.macro_activity;
    link.y_prob = cfg.femto_activity;
    link.bandwidth_hz = width;

    double s = sinr(link);
    ResultRow row;
    row.scheme = scheme;
    row.n_femtos = dep.n_interfering;
    row.trial = trial;
    row.user_class = sensed[i].second == Zone::cell_edge ? UserClass::edge_fue
                                                         : UserClass::inner_fue;
    row.user_id = fue.id;
    row.sinr_db = 10.0 * std::log10(s);
    row.rate_bps = capacity(width, s);
    row.outage_prob = outage_probability(s, zeta);
    if (row.user_class == UserClass::edge_fue) {
      rates.edge_fue_rates.push_back(row.rate_bps);
    } else {
      rates.inner_fue_rates.push_back(row.rate_bps);
    }
    ev.rows.push_back(row);
  }

  for (int i = 0; i < 3; ++i) {
    const NetworkNode& mue = dep.mues[i];
    int serving = i + 1;
    BandSet band = {full_fragment(SpectrumPlan::macro_parent(serving))};
    double width = plan.bands[SpectrumPlan::macro_parent(serving)].width_hz;

    double desired = macro_rx_w(cfg, dep.macros[i], mue.position, mue.height_m,
                                shadow.macro_shadow_db(serving, mue.id));
    double other_macros = 0.0;
    for (int m = 1; m <= 3; ++m) {
      if (m == serving) continue;
      BandSet macro_band = {full_fragment(SpectrumPlan::macro_parent(m))};
      double ow = band_overlap_hz(plan, band, macro_band);
      if (ow <= 0.0) continue;
      other_macros += (ow / plan.bands[SpectrumPlan::macro_parent(m)].width_hz) *
                      macro_rx_w(cfg, dep.macros[m - 1], mue.position, mue.height_m,
                                 shadow.macro_shadow_db(m, mue.id));
    }

    LinkSample link;
    link.user_id = mue.id;
    link.desired_w = desired;
    link.macro_interf_w = other_macros;
    link.femto_interf_w = femto_interference_w(band, mue.position, mue.id, -1);
    link.noise_w = n0 * width;
    link.x_prob = cfg.macro_activity;
    link.y_prob = cfg.femto_activity;
    link.bandwidth_hz = width;

    double s = sinr(link);
    ResultRow row;
    row.scheme = scheme;
    row.n_femtos = dep.n_interfering;
    row.trial = trial;
    row.user_class = UserClass::mue;
    row.user_id = mue.id;
    row.sinr_db = 10.0 * std::log10(s);
    row.rate_bps = capacity(width, s);
    row.outage_prob = outage_probability(s, zeta);
    rates.mue_rates.push_back(row.rate_bps);
    ev.rows.push_back(row);
  }

  ev.avg_sum_rate_bps = average_sum_rate(rates);
  return ev;
}

}  // namespace

std::vector<FemtoAllocation> apply_scheme(const Deployment& dep, Scheme scheme,
                                          const SpectrumPlan& plan, const ExperimentConfig& cfg,
                                          long trial) {
  if (scheme == Scheme::dfr_guard || scheme == Scheme::dfr_plain) {
    return apply_scheme_impl(dep, scheme, plan, cfg, trial, {});
  }
  return apply_scheme_impl(dep, scheme, plan, cfg, trial, classify_femtos(dep, cfg, trial));
}

TrialEvaluation evaluate(const Deployment& dep, const std::vector<FemtoAllocation>& allocations,
                         Scheme scheme, const SpectrumPlan& plan, const ExperimentConfig& cfg,
                         long trial) {
  return evaluate_impl(dep, allocations, scheme, plan, cfg, trial,
                       classify_femtos(dep, cfg, trial));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const SpectrumPlan plan = build_plan(cfg.macro_width_hz, cfg.guard_width_hz);

  unsigned hw = std::thread::hardware_concurrency();
  const int n_threads =
      cfg.threads > 0 ? cfg.threads : static_cast<int>(hw > 0 ? hw : 1);
  const std::size_t n_schemes = cfg.schemes.size();
  const std::size_t n_densities = cfg.densities.size();
  const long trials = cfg.trials;

  // rows_by[scheme][density][trial] — each worker writes disjoint slots, so
  // the merged output is identical at any thread count.
  std::vector<std::vector<std::vector<std::vector<ResultRow>>>> rows_by(
      n_schemes, std::vector<std::vector<std::vector<ResultRow>>>(
                     n_densities, std::vector<std::vector<ResultRow>>(trials)));
  std::vector<std::vector<std::vector<double>>> eq_rate_by(
      n_schemes,
      std::vector<std::vector<double>>(n_densities, std::vector<double>(trials, 0.0)));

  auto run_trial = [&](std::size_t d_idx, long t) {
    Deployment dep = generate_deployment(cfg, cfg.densities[d_idx], t);
    std::vector<std::pair<int, Zone>> sensed = classify_femtos(dep, cfg, t);
    for (std::size_t s_idx = 0; s_idx < n_schemes; ++s_idx) {
      std::vector<FemtoAllocation> alloc =
          apply_scheme_impl(dep, cfg.schemes[s_idx], plan, cfg, t, sensed);
      TrialEvaluation ev = evaluate_impl(dep, alloc, cfg.schemes[s_idx], plan, cfg, t, sensed);
      eq_rate_by[s_idx][d_idx][t] = ev.avg_sum_rate_bps;
      rows_by[s_idx][d_idx][t] = std::move(ev.rows);
    }
  };

  for (std::size_t d_idx = 0; d_idx < n_densities; ++d_idx) {
    if (n_threads <= 1 || trials == 1) {
      for (long t = 0; t < trials; ++t) run_trial(d_idx, t);
    } else {
      std::vector<std::thread> pool;
      long chunk = (trials + n_threads - 1) / n_threads;
      for (int w = 0; w < n_threads; ++w) {
        long lo = w * chunk;
        long hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, d_idx] {
          for (long t = lo; t < hi; ++t) run_trial(d_idx, t);
        });
      }
      for (std::thread& th : pool) th.join();
    }
  }

  ExperimentResult result;
  for (std::size_t s_idx = 0; s_idx < n_schemes; ++s_idx) {
    for (std::size_t d_idx = 0; d_idx < n_densities; ++d_idx) {
      for (long t = 0; t < trials; ++t) {
        auto& bucket = rows_by[s_idx][d_idx][t];
        result.rows.insert(result.rows.end(), bucket.begin(), bucket.end());
        bucket.clear();
        bucket.shrink_to_fit();
      }
    }
  }

  for (std::size_t s_idx = 0; s_idx < n_schemes; ++s_idx) {
    for (std::size_t d_idx = 0; d_idx < n_densities; ++d_idx) {
      CellStats mue, inner, edge, fue_all, everyone;
      for (const ResultRow& row : result.rows) {
        if (row.scheme != cfg.schemes[s_idx] || row.n_femtos != cfg.densities[d_idx]) continue;
        everyone.add(row);
        switch (row.user_class) {
          case UserClass::mue: mue.add(row); break;
          case UserClass::inner_fue:
            inner.add(row);
            fue_all.add(row);
            break;
          case UserClass::edge_fue:
            edge.add(row);
            fue_all.add(row);
            break;
        }
      }
      Scheme s = cfg.schemes[s_idx];
      int n = cfg.densities[d_idx];
      result.summary.push_back(make_summary_row(s, n, "mue", mue));
      result.summary.push_back(make_summary_row(s, n, "inner_fue", inner));
      result.summary.push_back(make_summary_row(s, n, "edge_fue", edge));
      result.summary.push_back(make_summary_row(s, n, "fue_all", fue_all));

      SummaryRow sys = make_summary_row(s, n, "system", everyone);
      RunningStat trial_rate;
      for (double v : eq_rate_by[s_idx][d_idx]) trial_rate.add(v);
      sys.mean_rate_bps = trial_rate.mean();
      sys.rate_ci95_bps = trial_rate.ci95();
      result.summary.push_back(sys);
    }
  }
  return result;
}

}  // namespace dfrsim
