#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfrsim/config.hpp"
#include "dfrsim/errors.hpp"
#include "dfrsim/propagation.hpp"
#include "dfrsim/report.hpp"
#include "dfrsim/scenario.hpp"
#include "dfrsim/version.hpp"

namespace fs = std::filesystem;

namespace dfrsim {

namespace {

constexpr const char* kOutputDirEnv = "DFRSIM_OUTPUT_DIR";

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? env : ".";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

void dump_allocation_tables(const std::string& dir, const ExperimentConfig& cfg,
                            std::vector<std::string>& outputs) {
  SpectrumPlan plan = build_plan(cfg.macro_width_hz, cfg.guard_width_hz);
  Deployment dep = generate_deployment(cfg, cfg.densities.front(), 0);
  for (Scheme s : cfg.schemes) {
    std::vector<FemtoAllocation> alloc = apply_scheme(dep, s, plan, cfg, 0);
    std::string name = std::string("allocations_") + std::string(scheme_name(s)) + ".csv";
    write_allocations_csv(dir + "/" + name, plan, alloc);
    outputs.push_back(name);
  }
}

void write_run_outputs(const std::string& dir, const std::string& config_path,
                       const ExperimentConfig& cfg,
                       const std::vector<std::pair<std::string, std::string>>& resolved,
                       const ExperimentResult& result, bool dump_allocations) {
  ensure_dir(dir);
  write_results_csv(dir + "/results.csv", result.rows);
  write_summary_csv(dir + "/summary.csv", result.summary);
  std::vector<std::string> outputs = {"results.csv", "summary.csv"};
  if (dump_allocations) dump_allocation_tables(dir, cfg, outputs);

  ManifestInfo info;
  info.config_path = config_path;
  info.output_dir = dir;
  info.seed = cfg.seed;
  info.resolved_config = resolved;
  info.outputs = outputs;
  write_manifest(dir + "/manifest.json", info);
}

int cmd_run(const std::string& config_path, const std::string& output_dir,
            std::optional<std::uint64_t> seed_override, bool dump_allocations) {
  LoadedConfig loaded = load_config_file(config_path);
  if (seed_override) {
    loaded.experiment.seed = *seed_override;
    loaded.resolved = resolved_entries(loaded.experiment);
  }
  ExperimentResult result = run_experiment(loaded.experiment);
  write_run_outputs(output_dir, config_path, loaded.experiment, loaded.resolved, result,
                    dump_allocations);
  std::printf("wrote %s/results.csv (%zu rows)\n", output_dir.c_str(), result.rows.size());
  std::printf("wrote %s/summary.csv (%zu rows)\n", output_dir.c_str(), result.summary.size());
  std::printf("wrote %s/manifest.json\n", output_dir.c_str());
  return 0;
}

int cmd_linkbudget_macro(double carrier_mhz, double bs_height_m, double ue_height_m,
                         double distance_km, double shadow_db, const std::string& mode_name,
                         double tx_w) {
  HataMode mode;
  if (mode_name == "paper") {
    mode = HataMode::paper;
  } else if (mode_name == "standard") {
    mode = HataMode::standard;
  } else {
    std::fprintf(stderr, "error: --mode must be 'paper' or 'standard'\n");
    return 2;
  }
  MacroLinkParams link{carrier_mhz, bs_height_m, ue_height_m, distance_km, shadow_db};
  double loss = hata_path_loss(link, mode);
  double rx = received_power_w(tx_w, loss);
  std::printf("tier: macro\n");
  std::printf("carrier_mhz: %s\n", num(carrier_mhz).c_str());
  std::printf("bs_height_m: %s\n", num(bs_height_m).c_str());
  std::printf("ue_height_m: %s\n", num(ue_height_m).c_str());
  std::printf("distance_km: %s\n", num(distance_km).c_str());
  std::printf("shadow_db: %s\n", num(shadow_db).c_str());
  std::printf("mode: %s\n", mode_name.c_str());
  std::printf("tx_power_w: %s\n", num(tx_w).c_str());
  std::printf("path_loss_db: %s\n", num(loss).c_str());
  std::printf("rx_power_w: %s\n", num(rx).c_str());
  std::printf("rx_power_dbm: %s\n", num(watts_to_dbm(rx)).c_str());
  return 0;
}

int cmd_linkbudget_femto(double carrier_mhz, double distance_m, double decay, double tx_w) {
  FemtoLinkParams link{carrier_mhz, distance_m, decay};
  double loss = femto_path_loss(link);
  double rx = received_power_w(tx_w, loss);
  std::printf("tier: femto\n");
  std::printf("carrier_mhz: %s\n", num(carrier_mhz).c_str());
  std::printf("distance_m: %s\n", num(distance_m).c_str());
  std::printf("decay_index: %s\n", num(decay).c_str());
  std::printf("tx_power_w: %s\n", num(tx_w).c_str());
  std::printf("path_loss_db: %s\n", num(loss).c_str());
  std::printf("rx_power_w: %s\n", num(rx).c_str());
  std::printf("rx_power_dbm: %s\n", num(watts_to_dbm(rx)).c_str());
  return 0;
}

struct MetricSpec {
  const char* name;
  const char* user_class;
  double SummaryRow::* mean;
  double SummaryRow::* ci;
};

constexpr MetricSpec kPlotMetrics[] = {
    {"edge_fue_rate_bps", "edge_fue", &SummaryRow::mean_rate_bps, &SummaryRow::rate_ci95_bps},
    {"edge_fue_goodput_bps", "edge_fue", &SummaryRow::mean_goodput_bps,
     &SummaryRow::goodput_ci95_bps},
    {"edge_fue_outage", "edge_fue", &SummaryRow::mean_outage, &SummaryRow::outage_ci95},
    {"fue_outage", "fue_all", &SummaryRow::mean_outage, &SummaryRow::outage_ci95},
    {"system_avg_sum_rate_bps", "system", &SummaryRow::mean_rate_bps,
     &SummaryRow::rate_ci95_bps},
};

int cmd_sweep(const std::string& config_path, const std::string& output_dir,
              const std::string& key, const std::string& values_csv) {
  LoadedConfig loaded = load_config_file(config_path);

  std::vector<double> values;
  {
    std::string item;
    std::stringstream ss(values_csv);
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        values.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: bad sweep value '%s'\n", item.c_str());
        return 2;
      }
    }
  }
  if (values.empty()) {
    std::fprintf(stderr, "error: --values must list at least one number\n");
    return 2;
  }

  ensure_dir(output_dir);

  // One point per value; the density axis is collapsed to the first
  // configured density unless the density itself is being swept.
  std::vector<std::pair<double, std::vector<SummaryRow>>> per_value;
  for (double v : values) {
    ExperimentConfig cfg = loaded.experiment;
    cfg.densities = {cfg.densities.front()};
    if (key == "n_interfering_femtos") {
      if (v < 0 || v != std::floor(v)) {
        std::fprintf(stderr, "error: n_interfering_femtos values must be whole and >= 0\n");
        return 2;
      }
      cfg.densities = {static_cast<int>(v)};
    } else if (key == "s_th_dbm") {
      cfg.s_th_dbm = v;
    } else if (key == "guard_width_hz") {
      cfg.guard_width_hz = v;
    } else {
      std::fprintf(stderr,
                   "error: --key must be one of n_interfering_femtos, s_th_dbm, "
                   "guard_width_hz\n");
      return 2;
    }

    ExperimentResult result = run_experiment(cfg);
    std::string sub = output_dir + "/value_" + num(v);
    write_run_outputs(sub, config_path, cfg, resolved_entries(cfg), result, false);
    std::printf("wrote %s\n", sub.c_str());
    per_value.emplace_back(v, std::move(result.summary));
  }

  std::sort(per_value.begin(), per_value.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  for (Scheme scheme : loaded.experiment.schemes) {
    for (const MetricSpec& metric : kPlotMetrics) {
      std::vector<PlotPoint> points;
      for (const auto& [x, summary] : per_value) {
        for (const SummaryRow& row : summary) {
          if (row.scheme == scheme && row.user_class == metric.user_class) {
            points.push_back({x, row.*(metric.mean), row.*(metric.ci)});
            break;
          }
        }
      }
      std::string path = output_dir + "/plot_" + std::string(scheme_name(scheme)) + "_" +
                         metric.name + ".dat";
      write_plot_data(path, points);
    }
  }
  std::printf("wrote %s/plot_<scheme>_<metric>.dat\n", output_dir.c_str());
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"two-tier femtocell network simulator"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir = default_output_dir();
  std::uint64_t seed_value = 0;
  bool dump_allocations = false;

  CLI::App* run = app.add_subcommand("run", "run the configured Monte-Carlo experiment");
  run->add_option("--config", config_path, "experiment config file (INI)")->required();
  CLI::Option* seed_opt =
      run->add_option("--seed", seed_value, "override the config seed");
  run->add_option("--output-dir", output_dir,
                  "output directory (default: $" + std::string(kOutputDirEnv) + " or '.')");
  run->add_flag("--dump-allocations", dump_allocations,
                "also write per-scheme allocation tables for trial 0");

  std::string tier;
  double lb_carrier_mhz = 900.0;
  double lb_bs_height_m = 50.0;
  double lb_ue_height_m = 1.5;
  double lb_distance_km = 1.0;
  double lb_shadow_db = 0.0;
  std::string lb_mode = "paper";
  double lb_macro_tx_w = 1500.0;
  double lb_distance_m = 10.0;
  double lb_decay = 30.0;
  double lb_femto_tx_w = 0.01;

  CLI::App* linkbudget =
      app.add_subcommand("linkbudget", "one-shot path-loss and received-power calculator");
  linkbudget->add_option("--tier", tier, "link type: macro or femto")
      ->required()
      ->check(CLI::IsMember({"macro", "femto"}));
  linkbudget->add_option("--carrier-mhz", lb_carrier_mhz, "carrier frequency, MHz")
      ->check(CLI::PositiveNumber);
  linkbudget->add_option("--bs-height-m", lb_bs_height_m, "macro BS antenna height, m")
      ->check(CLI::PositiveNumber);
  linkbudget->add_option("--ue-height-m", lb_ue_height_m, "mobile antenna height, m")
      ->check(CLI::PositiveNumber);
  linkbudget->add_option("--distance-km", lb_distance_km, "macro link distance, km")
      ->check(CLI::PositiveNumber);
  linkbudget->add_option("--shadow-db", lb_shadow_db, "extra shadowing loss, dB");
  linkbudget->add_option("--mode", lb_mode, "path-loss constant convention: paper or standard")
      ->check(CLI::IsMember({"paper", "standard"}));
  linkbudget->add_option("--tx-w", lb_macro_tx_w, "transmit power, W (macro default 1500)")
      ->check(CLI::PositiveNumber);
  linkbudget->add_option("--distance-m", lb_distance_m, "femto link distance, m")
      ->check(CLI::PositiveNumber);
  linkbudget->add_option("--decay", lb_decay, "femto distance decay index")
      ->check(CLI::PositiveNumber);

  std::string sweep_key;
  std::string sweep_values;
  std::string sweep_config;
  std::string sweep_output_dir = default_output_dir();
  CLI::App* sweep = app.add_subcommand("sweep", "re-run the experiment across one parameter");
  sweep->add_option("--config", sweep_config, "experiment config file (INI)")->required();
  sweep->add_option("--key", sweep_key,
                    "swept parameter: n_interfering_femtos, s_th_dbm, or guard_width_hz")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated sweep values")->required();
  sweep->add_option("--output-dir", sweep_output_dir,
                    "output directory (default: $" + std::string(kOutputDirEnv) + " or '.')");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(run)) {
      std::optional<std::uint64_t> seed_override;
      if (seed_opt->count() > 0) seed_override = seed_value;
      return cmd_run(config_path, output_dir, seed_override, dump_allocations);
    }
    if (app.got_subcommand(linkbudget)) {
      if (tier == "macro") {
        return cmd_linkbudget_macro(lb_carrier_mhz, lb_bs_height_m, lb_ue_height_m,
                                    lb_distance_km, lb_shadow_db, lb_mode, lb_macro_tx_w);
      }
      bool tx_given = linkbudget->count("--tx-w") > 0;
      return cmd_linkbudget_femto(lb_carrier_mhz, lb_distance_m, lb_decay,
                                  tx_given ? lb_macro_tx_w : lb_femto_tx_w);
    }
    if (app.got_subcommand(sweep)) {
      return cmd_sweep(sweep_config, sweep_output_dir, sweep_key, sweep_values);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

}  // namespace dfrsim
