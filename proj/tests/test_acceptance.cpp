// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each check is self-contained and prints its observed margin so a
// failure is diagnosable from the log alone.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrsim/allocation.hpp"
#include "dfrsim/propagation.hpp"
#include "dfrsim/radio_metrics.hpp"
#include "dfrsim/report.hpp"
#include "dfrsim/rng.hpp"
#include "dfrsim/scenario.hpp"
#include "dfrsim/spectrum_plan.hpp"

using namespace dfrsim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// --- criterion 1: partition identities over randomized plans -------------

void criterion_partition_identities() {
  auto t0 = std::chrono::steady_clock::now();
  Rand rand = substream({2024, 1});
  int checked = 0;
  bool ok = true;
  std::string detail;

  for (int trial = 0; trial < 1000 && ok; ++trial) {
    double macro_w = 1e5 + rand.uniform01_halfopen() * 5e7;
    double guard_w = 1e4 + rand.uniform01_halfopen() * 2e7;
    SpectrumPlan plan = build_plan(macro_w, guard_w);

    BandSet whole;
    for (int p = 0; p < 6; ++p) whole.push_back(full_fragment(p));
    normalize_bands(whole);

    for (int i = 1; i <= 3; ++i) {
      BandSet pool = femto_pool(plan, i);
      BandSet own = {full_fragment(SpectrumPlan::macro_parent(i))};
      if (!bands_disjoint(pool, own)) {
        ok = false;
        detail = fmt("macro %d pool overlaps its own band (plan %d)", i, trial);
        break;
      }
      if (!bands_equal(bands_union(pool, own), whole)) {
        ok = false;
        detail = fmt("macro %d pool + own band != whole spectrum (plan %d)", i, trial);
        break;
      }
      double pool_w = band_width_hz(plan, pool);
      if (!close_rel(pool_w, plan.total_hz - macro_w, 1e-9)) {
        ok = false;
        detail = fmt("macro %d pool width off by %.3g Hz (plan %d)", i,
                     pool_w - (plan.total_hz - macro_w), trial);
        break;
      }
      ++checked;
    }
    if (ok && !close_rel(plan.total_hz, 3.0 * (macro_w + guard_w), 1e-9)) {
      ok = false;
      detail = fmt("total width != 3*(macro+guard) (plan %d)", trial);
    }
    if (ok && !close_rel(band_width_hz(plan, whole), plan.total_hz, 1e-9)) {
      ok = false;
      detail = fmt("fragment widths do not sum to the total (plan %d)", trial);
    }
  }

  double dt = seconds_since(t0);
  if (ok && dt >= 1.0) {
    ok = false;
    detail = fmt("too slow: %.3f s", dt);
  }
  if (ok) detail = fmt("1000 plans, %d identities, %.3f s", checked * 2, dt);
  report(1, "spectrum partition identities", ok, detail);
}

// --- criterion 2: allocation split conformance ----------------------------

struct ScriptCtx {
  SpectrumPlan plan = build_plan(10e6, 2e6);
  std::array<NetworkNode, 3> macros;
  AllocationParams params;
  ZeroShadow shadow;

  ScriptCtx() {
    const double r3 = std::sqrt(3.0);
    macros = {NetworkNode{1, Tier::macro, {0.0, 0.0}, 1500.0, 50.0, 1},
              NetworkNode{2, Tier::macro, {r3 * 1000.0, 0.0}, 1500.0, 50.0, 2},
              NetworkNode{3, Tier::macro, {r3 * 500.0, 1500.0}, 1500.0, 50.0, 3}};
    params.s_th_w = dbm_to_watts(-56.0);
  }

  NetworkNode femto(int id, double x, double y) const {
    return NetworkNode{id, Tier::femto, {x, y}, 0.01, 2.0, 0};
  }
};

bool snapshot_matches(const World& world, const std::vector<BandSet>& expected,
                      std::string& detail, const char* step) {
  std::vector<FemtoAllocation> snap = world.snapshot();
  if (snap.size() != expected.size()) {
    detail = fmt("%s: expected %zu allocations, got %zu", step, expected.size(), snap.size());
    return false;
  }
  for (std::size_t i = 0; i < snap.size(); ++i) {
    if (!bands_equal(snap[i].bands, expected[i])) {
      detail = std::string(step) + ": member " + std::to_string(i) + " holds " +
               band_set_name(world.plan(), snap[i].bands);
      return false;
    }
  }
  return true;
}

void criterion_allocation_conformance() {
  auto t0 = std::chrono::steady_clock::now();
  ScriptCtx ctx;
  bool ok = true;
  std::string detail;
  int cases = 0;

  {
    // Cell-edge sequence: one, two, then three co-located edge femtos.
    World world(ctx.plan, ctx.macros, ctx.params);
    const double ex = 900.0 * std::sqrt(3.0) / 2.0;
    const double ey = 450.0;

    world.install_femto(ctx.femto(20, ex, ey), ctx.shadow);
    ok = ok && snapshot_matches(world, {{full_fragment(3), full_fragment(5)}}, detail,
                                "edge single");
    cases += 1;

    if (ok) {
      world.install_femto(ctx.femto(21, ex + 10.0, ey), ctx.shadow);
      ok = snapshot_matches(world,
                            {{part_fragment(1, 1, 2, 1, 1), full_fragment(3)},
                             {part_fragment(1, 0, 1, 1, 2), full_fragment(5)}},
                            detail, "edge pair");
      cases += 2;
    }
    if (ok) {
      world.install_femto(ctx.femto(22, ex, ey + 10.0), ctx.shadow);
      ok = snapshot_matches(
          world, {{full_fragment(1)}, {full_fragment(3)}, {full_fragment(5)}}, detail,
          "edge triple");
      cases += 3;
    }
  }

  if (ok) {
    // Inner sequence: one, two, then three co-located inner femtos.
    World world(ctx.plan, ctx.macros, ctx.params);
    world.install_femto(ctx.femto(40, 100.0, 0.0), ctx.shadow);
    ok = snapshot_matches(world, {{full_fragment(2), full_fragment(4)}}, detail,
                          "inner single");
    cases += 1;

    if (ok) {
      world.install_femto(ctx.femto(41, 110.0, 0.0), ctx.shadow);
      ok = snapshot_matches(world, {{full_fragment(2)}, {full_fragment(4)}}, detail,
                            "inner pair");
      cases += 2;
    }
    if (ok) {
      world.install_femto(ctx.femto(42, 100.0, 10.0), ctx.shadow);
      ok = snapshot_matches(world,
                            {{part_fragment(2, 0, 1, 2, 3)},
                             {part_fragment(2, 2, 3, 1, 1), part_fragment(4, 0, 1, 1, 3)},
                             {part_fragment(4, 1, 3, 1, 1)}},
                            detail, "inner triple");
    }
  }

  double dt = seconds_since(t0);
  if (ok && dt >= 1.0) {
    ok = false;
    detail = fmt("too slow: %.3f s", dt);
  }
  if (ok) detail = fmt("%d scripted band-set cases, %.3f s", cases, dt);
  report(2, "allocation split conformance", ok, detail);
}

// --- criterion 3: path-loss oracles ---------------------------------------

void criterion_pathloss_oracles() {
  MacroLinkParams link{900.0, 50.0, 1.5, 1.0, 0.0};
  double paper = hata_path_loss(link, HataMode::paper);
  double standard = hata_path_loss(link, HataMode::standard);
  double femto = femto_path_loss(FemtoLinkParams{900.0, 10.0, 30.0});

  double e1 = std::fabs(paper - 116.24233676115941);
  double e2 = std::fabs(standard - 123.44233676115941);
  double e3 = std::fabs(femto - 61.084850188786504);
  bool ok = e1 <= 0.01 && e2 <= 0.01 && e3 <= 0.01;
  report(3, "path-loss oracles", ok,
         fmt("|err| dB: %.2e, %.2e, %.2e", e1, e2, e3));
}

// --- criterion 4: outage identities ---------------------------------------

void criterion_outage_identities() {
  bool ok = true;
  std::string detail;
  const double expected = 1.0 - std::exp(-1.0);
  for (double z : {0.5, 1.0, std::pow(10.0, 0.7), 42.0}) {
    double err = std::fabs(outage_probability(z, z) - expected);
    if (err > 1e-12) {
      ok = false;
      detail = fmt("threshold-equals-mean identity off by %.2e at %.2f", err, z);
      break;
    }
  }

  if (ok) {
    // 100x100 grid: strictly increasing in the threshold, strictly
    // decreasing in the mean SINR, always inside (0, 1).
    std::vector<double> grid(100);
    for (int i = 0; i < 100; ++i) grid[i] = std::pow(10.0, -0.7 + 1.4 * i / 99.0);
    for (int i = 0; i < 100 && ok; ++i) {
      for (int j = 0; j < 100 && ok; ++j) {
        double p = outage_probability(grid[i], grid[j]);
        if (!(p > 0.0 && p < 1.0)) {
          ok = false;
          detail = fmt("left (0,1) at s=%.3f zeta=%.3f", grid[i], grid[j]);
        } else if (j > 0 && !(p > outage_probability(grid[i], grid[j - 1]))) {
          ok = false;
          detail = fmt("not increasing in threshold at s=%.3f", grid[i]);
        } else if (i > 0 && !(p < outage_probability(grid[i - 1], grid[j]))) {
          ok = false;
          detail = fmt("not decreasing in SINR at zeta=%.3f", grid[j]);
        }
      }
    }
    if (ok) detail = "identity within 1e-12, 100x100 grid strictly monotone";
  }
  report(4, "outage identities", ok, detail);
}

// --- criterion 5: guard protection at the edge operating point ------------

void criterion_guard_protection() {
  ExperimentConfig cfg;
  cfg.macro_shadow_sigma_db = 0.0;
  cfg.femto_shadow_sigma_db = 0.0;
  cfg.s_th_dbm = -56.0;
  cfg.seed = 1;
  const int n_interfering = 15;
  const long trials = 1000;
  SpectrumPlan plan = build_plan(cfg.macro_width_hz, cfg.guard_width_hz);
  BandSet macro_bands =
      normalized({full_fragment(0), full_fragment(2), full_fragment(4)});

  bool ok = true;
  std::string detail;
  double min_gain_db = 1e300;

  for (long t = 0; t < trials && ok; ++t) {
    Deployment dep = generate_deployment(cfg, n_interfering, t);
    auto sensed = classify_femtos(dep, cfg, t);
    for (const auto& [serving, zone] : sensed) {
      if (serving != 1 || zone != Zone::cell_edge) {
        ok = false;
        detail = fmt("trial %ld: cluster not uniformly cell-edge of macro 1", t);
        break;
      }
    }
    if (!ok) break;

    auto guard_alloc = apply_scheme(dep, Scheme::dfr_guard, plan, cfg, t);
    for (const FemtoAllocation& a : guard_alloc) {
      if (band_overlap_hz(plan, a.bands, macro_bands) != 0.0) {
        ok = false;
        detail = fmt("trial %ld: femto %d band overlaps the macro layer", t, a.femto_id);
        break;
      }
    }
    if (!ok) break;

    auto co_alloc = apply_scheme(dep, Scheme::cochannel, plan, cfg, t);
    TrialEvaluation guard = evaluate(dep, guard_alloc, Scheme::dfr_guard, plan, cfg, t);
    TrialEvaluation co = evaluate(dep, co_alloc, Scheme::cochannel, plan, cfg, t);
    for (std::size_t i = 0; i < dep.fues.size(); ++i) {
      double gain = guard.rows[i].sinr_db - co.rows[i].sinr_db;
      min_gain_db = std::min(min_gain_db, gain);
      if (gain < 0.0) {
        ok = false;
        detail = fmt("trial %ld user %d: SINR drops %.3f dB under guard bands", t,
                     guard.rows[i].user_id, -gain);
        break;
      }
    }
  }

  if (ok)
    detail = fmt("%ld trials x %d edge users: zero macro overlap, min gain %.1f dB", trials,
                 n_interfering + 1, min_gain_db);
  report(5, "guard protection at the edge operating point", ok, detail);
}

// --- criterion 6: scheme ordering under load -------------------------------

const SummaryRow& summary_cell(const ExperimentResult& res, Scheme s, int n,
                               const std::string& user_class) {
  for (const SummaryRow& row : res.summary) {
    if (row.scheme == s && row.n_femtos == n && row.user_class == user_class) return row;
  }
  throw std::logic_error("summary cell missing");
}

void criterion_scheme_ordering() {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.densities = {15, 20, 25, 30, 35, 40};
  cfg.trials = 1000;
  cfg.seed = 1;
  ExperimentResult res = run_experiment(cfg);
  double dt = seconds_since(t0);

  bool ok = true;
  std::string detail;

  // Edge femto users at the base density: protective schemes deliver more.
  const Scheme chain[] = {Scheme::dfr_guard, Scheme::dfr_plain, Scheme::hybrid,
                          Scheme::cochannel};
  double goodput[4];
  for (int i = 0; i < 4; ++i)
    goodput[i] = summary_cell(res, chain[i], 15, "edge_fue").mean_goodput_bps;
  for (int i = 0; i + 1 < 4; ++i) {
    if (!(goodput[i] >= goodput[i + 1])) {
      ok = false;
      detail = fmt("edge goodput: %s (%.0f) < %s (%.0f) at n=15",
                   std::string(scheme_name(chain[i])).c_str(), goodput[i],
                   std::string(scheme_name(chain[i + 1])).c_str(), goodput[i + 1]);
    }
  }

  // Femto-user outage orders the other way, at every density.
  double worst_margin = 1e300;
  for (int n : cfg.densities) {
    if (!ok) break;
    double outage[4];
    for (int i = 0; i < 4; ++i)
      outage[i] = summary_cell(res, chain[i], n, "fue_all").mean_outage;
    for (int i = 0; i + 1 < 4; ++i) {
      worst_margin = std::min(worst_margin, outage[i + 1] - outage[i]);
      if (!(outage[i] <= outage[i + 1])) {
        ok = false;
        detail = fmt("outage: %s (%.3f) > %s (%.3f) at n=%d",
                     std::string(scheme_name(chain[i])).c_str(), outage[i],
                     std::string(scheme_name(chain[i + 1])).c_str(), outage[i + 1], n);
        break;
      }
    }
  }

  if (ok && dt >= 60.0) {
    ok = false;
    detail = fmt("too slow: %.1f s", dt);
  }
  if (ok)
    detail = fmt("goodput chain at n=15 (%.2f:%.2f:%.2f:%.2f Mbps), outage chain at 6 "
                 "densities (min margin %.3f), %.1f s",
                 goodput[0] / 1e6, goodput[1] / 1e6, goodput[2] / 1e6, goodput[3] / 1e6,
                 worst_margin, dt);
  report(6, "scheme ordering under load", ok, detail);
}

// --- criterion 7: byte-identical reruns ------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_determinism() {
  ExperimentConfig cfg;
  cfg.trials = 50;
  cfg.seed = 1;

  fs::path dir = fs::temp_directory_path() / "dfrsim_acceptance";
  fs::create_directories(dir);
  fs::path a = dir / "results_a.csv";
  fs::path b = dir / "results_b.csv";

  write_results_csv(a.string(), run_experiment(cfg).rows);
  cfg.threads = 2;  // same bytes regardless of worker count
  write_results_csv(b.string(), run_experiment(cfg).rows);

  std::string bytes_a = slurp(a);
  std::string bytes_b = slurp(b);
  bool ok = !bytes_a.empty() && bytes_a == bytes_b;
  report(7, "byte-identical reruns", ok,
         ok ? fmt("%zu bytes, single- vs multi-threaded", bytes_a.size())
            : "rerun bytes differ");
}

// --- criterion 8: system sum-rate oracle -----------------------------------

void criterion_sum_rate_oracle() {
  Rand rand = substream({2024, 8});
  bool ok = true;
  std::string detail;
  double worst = 0.0;

  for (int pop = 0; pop < 50 && ok; ++pop) {
    UserClassRates rates;
    auto fill = [&](std::vector<double>& out, int max_n) {
      int n = static_cast<int>(rand.uniform01_halfopen() * (max_n + 1));
      for (int i = 0; i < n; ++i)
        out.push_back(1e3 + rand.uniform01_halfopen() * 1e7);
    };
    fill(rates.mue_rates, pop % 7 == 0 ? 0 : 40);  // exercise empty classes
    fill(rates.inner_fue_rates, pop % 5 == 0 ? 0 : 40);
    fill(rates.edge_fue_rates, 40);

    long double brute = 0.0L;
    for (const std::vector<double>* cls :
         {&rates.mue_rates, &rates.inner_fue_rates, &rates.edge_fue_rates}) {
      if (cls->empty()) continue;
      long double sum = 0.0L;
      for (double r : *cls) sum += r;
      brute += sum / static_cast<long double>(cls->size());
    }

    double got = average_sum_rate(rates);
    double rel = std::fabs(got - static_cast<double>(brute)) /
                 std::max(1.0, static_cast<double>(brute));
    worst = std::max(worst, rel);
    if (rel > 1e-9) {
      ok = false;
      detail = fmt("population %d: relative error %.2e", pop, rel);
    }
  }

  if (ok) detail = fmt("50 populations, worst relative error %.2e", worst);
  report(8, "system sum-rate oracle", ok, detail);
}

}  // namespace

int main() {
  criterion_partition_identities();
  criterion_allocation_conformance();
  criterion_pathloss_oracles();
  criterion_outage_identities();
  criterion_guard_protection();
  criterion_scheme_ordering();
  criterion_determinism();
  criterion_sum_rate_oracle();

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 8 criteria passed\n");
  return 0;
}
