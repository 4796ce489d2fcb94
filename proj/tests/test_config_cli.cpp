#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "dfrsim/config.hpp"
#include "dfrsim/errors.hpp"

namespace fs = std::filesystem;
using namespace dfrsim;

namespace {

constexpr const char* kTinyConfig =
    "[scenario]\n"
    "trials = 2\n"
    "seed = 3\n"
    "densities = 2\n"
    "schemes = dfr_guard,cochannel\n";

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("dfrsim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << text;
  REQUIRE(out.good());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(std::vector<const char*> args) {
  args.insert(args.begin(), "dfrsim");
  return cli_main(static_cast<int>(args.size()), args.data());
}

// Redirect fd 1 into a file for the duration of fn; returns what was printed.
std::string capture_stdout(const std::function<void()>& fn) {
  fs::path sink = fs::temp_directory_path() / "dfrsim_test_stdout.txt";
  std::fflush(stdout);
  int saved = dup(1);
  REQUIRE(saved >= 0);
  int fd = open(sink.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  REQUIRE(fd >= 0);
  dup2(fd, 1);
  close(fd);
  fn();
  std::fflush(stdout);
  dup2(saved, 1);
  close(saved);
  return slurp(sink);
}

std::string value_of(const LoadedConfig& loaded, const std::string& key) {
  for (const auto& [k, v] : loaded.resolved) {
    if (k == key) return v;
  }
  return "<missing>";
}

}  // namespace

TEST_CASE("a minimal config keeps every default") {
  LoadedConfig loaded = parse_config_text("[scenario]\ntrials = 5\nseed = 3\n", "mini.ini");
  const ExperimentConfig& cfg = loaded.experiment;
  CHECK(cfg.trials == 5);
  CHECK(cfg.seed == 3);
  CHECK(cfg.macro_width_hz == 10e6);
  CHECK(cfg.guard_width_hz == 2e6);
  CHECK(cfg.f_c_mhz == 900.0);
  CHECK(cfg.hata_mode == HataMode::paper);
  CHECK(!cfg.s_th_dbm.has_value());
  CHECK(cfg.schemes.size() == 5);
  CHECK(cfg.densities == std::vector<int>{15});
  CHECK(cfg.threads == 1);

  CHECK(loaded.resolved.size() == 27);
  CHECK(value_of(loaded, "allocation.s_th_dbm") == "auto");
  CHECK(value_of(loaded, "spectrum.macro_width_hz") == "10000000");
  CHECK(value_of(loaded, "scenario.schemes") ==
        "dfr_guard,dfr_plain,cochannel,dedicated,hybrid");
  CHECK(value_of(loaded, "scenario.trials") == "5");
}

TEST_CASE("overridden keys land in the right fields") {
  LoadedConfig loaded = parse_config_text(
      "# experiment\n"
      "[spectrum]\n"
      "macro_width_hz = 5e6\n"
      "guard_width_hz = 1e6\n"
      "[propagation]\n"
      "hata_constant_mode = standard\n"
      "macro_shadow_sigma_db = 0\n"
      "[allocation]\n"
      "s_th_dbm = -56\n"
      "; tighter cluster\n"
      "sensing_radius_m = 40\n"
      "[metrics]\n"
      "noise_figure_db = 7\n"
      "[scenario]\n"
      "schemes = cochannel , dfr_guard\n"
      "densities = 5, 10\n"
      "trials = 9\n"
      "seed = 17\n"
      "threads = 2\n",
      "full.ini");
  const ExperimentConfig& cfg = loaded.experiment;
  CHECK(cfg.macro_width_hz == 5e6);
  CHECK(cfg.guard_width_hz == 1e6);
  CHECK(cfg.hata_mode == HataMode::standard);
  CHECK(cfg.macro_shadow_sigma_db == 0.0);
  REQUIRE(cfg.s_th_dbm.has_value());
  CHECK(*cfg.s_th_dbm == -56.0);
  CHECK(cfg.sensing_radius_m == 40.0);
  CHECK(cfg.noise_figure_db == 7.0);
  CHECK(cfg.schemes == std::vector<Scheme>{Scheme::cochannel, Scheme::dfr_guard});
  CHECK(cfg.densities == std::vector<int>{5, 10});
  CHECK(cfg.trials == 9);
  CHECK(cfg.seed == 17);
  CHECK(cfg.threads == 2);
  CHECK(value_of(loaded, "allocation.s_th_dbm") == "-56");
  CHECK(value_of(loaded, "scenario.schemes") == "cochannel,dfr_guard");
}

TEST_CASE("config errors carry file and line") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config_text(text, "bad.ini");
    } catch (const ConfigError& e) {
      CHECK(e.file() == "bad.ini");
      return e.line();
    }
    return -1;
  };

  CHECK(line_of("[nope]\ntrials = 1\n") == 1);
  CHECK(line_of("[scenario]\nwibble = 1\n") == 2);
  CHECK(line_of("[scenario]\ntrials = 1\ntrials = 2\nseed = 1\n") == 3);
  CHECK(line_of("trials = 1\n") == 1);                       // key before section
  CHECK(line_of("[scenario]\ntrials =\nseed = 1\n") == 2);   // empty value
  CHECK(line_of("[scenario]\ntrials = soon\nseed = 1\n") == 2);
  CHECK(line_of("[scenario]\nschemes = cochannel,warp\ntrials = 1\nseed = 1\n") == 2);
  CHECK(line_of("[propagation]\nhata_constant_mode = maybe\n") == 2);
  CHECK(line_of("[scenario]\nseed = 1\n") == 0);             // missing trials
  CHECK(line_of("[scenario]\ntrials = 1\n") == 0);           // missing seed
  CHECK(line_of("[scenario]\ntrials = 0\nseed = 1\n") == 0); // validation failure

  CHECK_THROWS_AS(load_config_file("/no/such/dir/x.ini"), IoError);
}

TEST_CASE("resolved entries reparse to the same configuration") {
  LoadedConfig first = parse_config_text(
      "[allocation]\ns_th_dbm = -56\n[scenario]\ntrials = 4\nseed = 8\n"
      "schemes = hybrid,dedicated\ndensities = 1,2,3\n",
      "first.ini");

  // Rebuild an INI from the resolved list and parse it again.
  std::string text;
  std::string section;
  for (const auto& [key, value] : first.resolved) {
    std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      text += "[" + sec + "]\n";
      section = sec;
    }
    text += key.substr(key.find('.') + 1) + " = " + value + "\n";
  }
  LoadedConfig second = parse_config_text(text, "second.ini");
  CHECK(second.resolved == first.resolved);
}

TEST_CASE("cli: help and version succeed, bad invocations exit 2") {
  std::string help_out = capture_stdout([&] { CHECK(run_cli({"--help"}) == 0); });
  CHECK(help_out.find("run") != std::string::npos);
  std::string ver_out = capture_stdout([&] { CHECK(run_cli({"--version"}) == 0); });
  CHECK(ver_out.find("dfrsim") != std::string::npos);

  CHECK(run_cli({}) == 2);                         // missing subcommand
  CHECK(run_cli({"run"}) == 2);                    // missing --config
  CHECK(run_cli({"launch"}) == 2);                 // unknown subcommand
  CHECK(run_cli({"linkbudget", "--tier", "blimp"}) == 2);
}

TEST_CASE("cli: config problems exit 2, io problems exit 3") {
  fs::path dir = fresh_dir("cli_errors");
  fs::path bad = dir / "bad.ini";
  write_file(bad, "[scenario]\ntrials = zero\nseed = 1\n");
  CHECK(run_cli({"run", "--config", bad.c_str()}) == 2);

  CHECK(run_cli({"run", "--config", "/no/such/config.ini"}) == 3);

  fs::path good = dir / "good.ini";
  write_file(good, kTinyConfig);
  CHECK(run_cli({"run", "--config", good.c_str(), "--output-dir",
                 "/proc/definitely/not/writable"}) == 3);
}

TEST_CASE("cli: linkbudget prints the computed budget") {
  std::string out = capture_stdout([&] {
    CHECK(run_cli({"linkbudget", "--tier", "macro", "--distance-km", "1",
                   "--shadow-db", "0"}) == 0);
  });
  CHECK(out.find("path_loss_db: 116.2423368") != std::string::npos);
  CHECK(out.find("rx_power_w: 3.563342625e-09") != std::string::npos);

  std::string std_out = capture_stdout([&] {
    CHECK(run_cli({"linkbudget", "--tier", "macro", "--distance-km", "1",
                   "--shadow-db", "0", "--mode", "standard"}) == 0);
  });
  CHECK(std_out.find("path_loss_db: 123.4423368") != std::string::npos);

  std::string femto_out = capture_stdout([&] {
    CHECK(run_cli({"linkbudget", "--tier", "femto", "--distance-m", "10"}) == 0);
  });
  CHECK(femto_out.find("path_loss_db: 61.08485019") != std::string::npos);
  CHECK(femto_out.find("rx_power_w: 7.789596845e-09") != std::string::npos);

  CHECK(run_cli({"linkbudget", "--tier", "macro", "--distance-km", "-1"}) == 2);
  CHECK(run_cli({"linkbudget", "--tier", "femto", "--distance-m", "0"}) == 2);
}

TEST_CASE("cli: run writes deterministic outputs where asked") {
  fs::path dir = fresh_dir("cli_run");
  fs::path cfg = dir / "exp.ini";
  write_file(cfg, kTinyConfig);

  fs::path out_a = dir / "a";
  fs::path out_b = dir / "b";
  capture_stdout([&] {
    CHECK(run_cli({"run", "--config", cfg.c_str(), "--output-dir", out_a.c_str(),
                   "--dump-allocations"}) == 0);
    CHECK(run_cli({"run", "--config", cfg.c_str(), "--output-dir", out_b.c_str()}) == 0);
  });

  CHECK(fs::exists(out_a / "results.csv"));
  CHECK(fs::exists(out_a / "summary.csv"));
  CHECK(fs::exists(out_a / "manifest.json"));
  CHECK(fs::exists(out_a / "allocations_dfr_guard.csv"));
  CHECK(fs::exists(out_a / "allocations_cochannel.csv"));
  CHECK(!fs::exists(out_b / "allocations_dfr_guard.csv"));

  std::string results = slurp(out_a / "results.csv");
  CHECK(results.rfind("scheme,n_femtos,trial,user_class,user_id,sinr_db,rate_bps,outage_prob",
                      0) == 0);
  // 2 schemes x 2 trials x (3 + 3) users, plus the header line
  CHECK(std::count(results.begin(), results.end(), '\n') == 1 + 2 * 2 * 6);
  CHECK(results == slurp(out_b / "results.csv"));
  CHECK(slurp(out_a / "summary.csv") == slurp(out_b / "summary.csv"));

  std::string manifest = slurp(out_a / "manifest.json");
  CHECK(manifest.find("\"seed\": 3") != std::string::npos);
  CHECK(manifest.find("\"scenario.densities\": \"2\"") != std::string::npos);
  CHECK(manifest.find("results.csv") != std::string::npos);

  std::string alloc = slurp(out_a / "allocations_dfr_guard.csv");
  CHECK(alloc.rfind("femto_id,serving_macro,zone,group,band_names,total_width_hz", 0) == 0);

  // A different seed changes the sampled world and therefore the bytes.
  fs::path out_c = dir / "c";
  capture_stdout([&] {
    CHECK(run_cli({"run", "--config", cfg.c_str(), "--output-dir", out_c.c_str(), "--seed",
                   "77"}) == 0);
  });
  CHECK(slurp(out_c / "results.csv") != results);
  CHECK(slurp(out_c / "manifest.json").find("\"seed\": 77") != std::string::npos);
}

TEST_CASE("cli: the output directory env var is the default sink") {
  fs::path dir = fresh_dir("cli_env");
  fs::path cfg = dir / "exp.ini";
  write_file(cfg, kTinyConfig);
  fs::path sink = dir / "from_env";
  setenv("DFRSIM_OUTPUT_DIR", sink.c_str(), 1);
  capture_stdout([&] { CHECK(run_cli({"run", "--config", cfg.c_str()}) == 0); });
  unsetenv("DFRSIM_OUTPUT_DIR");
  CHECK(fs::exists(sink / "results.csv"));
}

TEST_CASE("cli: sweep emits per-value runs and plot files") {
  fs::path dir = fresh_dir("cli_sweep");
  fs::path cfg = dir / "exp.ini";
  write_file(cfg, kTinyConfig);
  fs::path out = dir / "sweep";

  capture_stdout([&] {
    CHECK(run_cli({"sweep", "--config", cfg.c_str(), "--key", "s_th_dbm", "--values",
                   "-54,-58", "--output-dir", out.c_str()}) == 0);
  });

  CHECK(fs::exists(out / "value_-54" / "results.csv"));
  CHECK(fs::exists(out / "value_-58" / "results.csv"));

  fs::path plot = out / "plot_dfr_guard_edge_fue_outage.dat";
  REQUIRE(fs::exists(plot));
  std::istringstream in(slurp(plot));
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("#", 0) == 0);
  double x1 = 0, m1 = 0, c1 = 0, x2 = 0, m2 = 0, c2 = 0;
  REQUIRE((in >> x1 >> m1 >> c1 >> x2 >> m2 >> c2));
  CHECK(x1 == -58.0);  // points sorted by the swept value
  CHECK(x2 == -54.0);
  CHECK(fs::exists(out / "plot_cochannel_fue_outage.dat"));
  CHECK(fs::exists(out / "plot_dfr_guard_system_avg_sum_rate_bps.dat"));

  CHECK(run_cli({"sweep", "--config", cfg.c_str(), "--key", "warp_factor", "--values", "1",
                 "--output-dir", out.c_str()}) == 2);
  CHECK(run_cli({"sweep", "--config", cfg.c_str(), "--key", "s_th_dbm", "--values",
                 "-54,speedy", "--output-dir", out.c_str()}) == 2);
  CHECK(run_cli({"sweep", "--config", cfg.c_str(), "--key", "n_interfering_femtos",
                 "--values", "2.5", "--output-dir", out.c_str()}) == 2);
}
