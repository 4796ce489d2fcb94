#include "dfrsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dfrsim/errors.hpp"

namespace dfrsim {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double parse_double(const std::string& value, const std::string& file, int line,
                    const std::string& key) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(file, line, "expected a number for '" + key + "', got '" + value + "'");
  }
}

long parse_long(const std::string& value, const std::string& file, int line,
                const std::string& key) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(file, line, "expected an integer for '" + key + "', got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& file, int line,
                        const std::string& key) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError(file, line,
                      "expected an unsigned integer for '" + key + "', got '" + value + "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

LoadedConfig parse_config_text(std::string_view text, const std::string& filename) {
  ExperimentConfig cfg;
  bool have_trials = false;
  bool have_seed = false;
  std::set<std::string> seen;

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(filename, line_no, "unterminated section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      static const std::set<std::string> kSections = {"spectrum", "propagation", "allocation",
                                                      "metrics", "scenario"};
      if (!kSections.count(section))
        throw ConfigError(filename, line_no, "unknown section '" + section + "'");
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(filename, line_no, "expected 'key = value', got '" + line + "'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(filename, line_no, "empty key");
    if (section.empty())
      throw ConfigError(filename, line_no, "key '" + key + "' appears before any [section]");
    if (value.empty()) throw ConfigError(filename, line_no, "empty value for '" + key + "'");

    std::string qualified = section + "." + key;
    if (!seen.insert(qualified).second)
      throw ConfigError(filename, line_no, "duplicate key '" + qualified + "'");

    if (qualified == "spectrum.macro_width_hz") {
      cfg.macro_width_hz = parse_double(value, filename, line_no, key);
    } else if (qualified == "spectrum.guard_width_hz") {
      cfg.guard_width_hz = parse_double(value, filename, line_no, key);
    } else if (qualified == "propagation.carrier_mhz") {
      cfg.f_c_mhz = parse_double(value, filename, line_no, key);
    } else if (qualified == "propagation.macro_bs_height_m") {
      cfg.macro_bs_height_m = parse_double(value, filename, line_no, key);
    } else if (qualified == "propagation.ue_height_m") {
      cfg.ue_height_m = parse_double(value, filename, line_no, key);
    } else if (qualified == "propagation.hata_constant_mode") {
      if (value == "paper") {
        cfg.hata_mode = HataMode::paper;
      } else if (value == "standard") {
        cfg.hata_mode = HataMode::standard;
      } else {
        throw ConfigError(filename, line_no,
                          "hata_constant_mode must be 'paper' or 'standard', got '" + value +
                              "'");
      }
    } else if (qualified == "propagation.macro_shadow_sigma_db") {
      cfg.macro_shadow_sigma_db = parse_double(value, filename, line_no, key);
    } else if (qualified == "propagation.femto_shadow_sigma_db") {
      cfg.femto_shadow_sigma_db = parse_double(value, filename, line_no, key);
    } else if (qualified == "propagation.femto_decay_index") {
      cfg.femto_decay_index = parse_double(value, filename, line_no, key);
    } else if (qualified == "allocation.s_th_dbm") {
      if (value == "auto") {
        cfg.s_th_dbm.reset();
      } else {
        cfg.s_th_dbm = parse_double(value, filename, line_no, key);
      }
    } else if (qualified == "allocation.sensing_radius_m") {
      cfg.sensing_radius_m = parse_double(value, filename, line_no, key);
    } else if (qualified == "metrics.macro_activity") {
      cfg.macro_activity = parse_double(value, filename, line_no, key);
    } else if (qualified == "metrics.femto_activity") {
      cfg.femto_activity = parse_double(value, filename, line_no, key);
    } else if (qualified == "metrics.noise_figure_db") {
      cfg.noise_figure_db = parse_double(value, filename, line_no, key);
    } else if (qualified == "metrics.subcarrier_hz") {
      cfg.subcarrier_hz = parse_double(value, filename, line_no, key);
    } else if (qualified == "scenario.schemes") {
      cfg.schemes.clear();
      if (value == "all") {
        cfg.schemes = {Scheme::dfr_guard, Scheme::dfr_plain, Scheme::cochannel,
                       Scheme::dedicated, Scheme::hybrid};
      } else {
        for (const std::string& name : split_list(value)) {
          std::optional<Scheme> s = parse_scheme(name);
          if (!s) throw ConfigError(filename, line_no, "unknown scheme '" + name + "'");
          cfg.schemes.push_back(*s);
        }
        if (cfg.schemes.empty())
          throw ConfigError(filename, line_no, "schemes list must not be empty");
      }
    } else if (qualified == "scenario.densities") {
      cfg.densities.clear();
      for (const std::string& item : split_list(value)) {
        cfg.densities.push_back(static_cast<int>(parse_long(item, filename, line_no, key)));
      }
      if (cfg.densities.empty())
        throw ConfigError(filename, line_no, "densities list must not be empty");
    } else if (qualified == "scenario.reference_distance_m") {
      cfg.reference_distance_m = parse_double(value, filename, line_no, key);
    } else if (qualified == "scenario.trials") {
      cfg.trials = parse_long(value, filename, line_no, key);
      have_trials = true;
    } else if (qualified == "scenario.seed") {
      cfg.seed = parse_u64(value, filename, line_no, key);
      have_seed = true;
    } else if (qualified == "scenario.macro_radius_m") {
      cfg.macro_radius_m = parse_double(value, filename, line_no, key);
    } else if (qualified == "scenario.femto_radius_m") {
      cfg.femto_radius_m = parse_double(value, filename, line_no, key);
    } else if (qualified == "scenario.macro_tx_w") {
      cfg.macro_tx_w = parse_double(value, filename, line_no, key);
    } else if (qualified == "scenario.femto_tx_w") {
      cfg.femto_tx_w = parse_double(value, filename, line_no, key);
    } else if (qualified == "scenario.femto_height_m") {
      cfg.femto_height_m = parse_double(value, filename, line_no, key);
    } else if (qualified == "scenario.zeta_db") {
      cfg.zeta_db = parse_double(value, filename, line_no, key);
    } else if (qualified == "scenario.threads") {
      cfg.threads = static_cast<int>(parse_long(value, filename, line_no, key));
    } else {
      throw ConfigError(filename, line_no,
                        "unknown key '" + key + "' in section [" + section + "]");
    }
  }

  if (!have_trials) throw ConfigError(filename, 0, "missing required key scenario.trials");
  if (!have_seed) throw ConfigError(filename, 0, "missing required key scenario.seed");

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(filename, 0, e.what());
  }
  return {cfg, resolved_entries(cfg)};
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file: " + path);
  return parse_config_text(buf.str(), path);
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  auto put = [&](const char* k, std::string v) { out.emplace_back(k, std::move(v)); };

  put("spectrum.macro_width_hz", format_double(cfg.macro_width_hz));
  put("spectrum.guard_width_hz", format_double(cfg.guard_width_hz));
  put("propagation.carrier_mhz", format_double(cfg.f_c_mhz));
  put("propagation.macro_bs_height_m", format_double(cfg.macro_bs_height_m));
  put("propagation.ue_height_m", format_double(cfg.ue_height_m));
  put("propagation.hata_constant_mode",
      cfg.hata_mode == HataMode::paper ? "paper" : "standard");
  put("propagation.macro_shadow_sigma_db", format_double(cfg.macro_shadow_sigma_db));
  put("propagation.femto_shadow_sigma_db", format_double(cfg.femto_shadow_sigma_db));
  put("propagation.femto_decay_index", format_double(cfg.femto_decay_index));
  put("allocation.s_th_dbm",
      cfg.s_th_dbm.has_value() ? format_double(*cfg.s_th_dbm) : std::string("auto"));
  put("allocation.sensing_radius_m", format_double(cfg.sensing_radius_m));
  put("metrics.macro_activity", format_double(cfg.macro_activity));
  put("metrics.femto_activity", format_double(cfg.femto_activity));
  put("metrics.noise_figure_db", format_double(cfg.noise_figure_db));
  put("metrics.subcarrier_hz", format_double(cfg.subcarrier_hz));

  std::string schemes;
  for (Scheme s : cfg.schemes) {
    if (!schemes.empty()) schemes += ",";
    schemes += scheme_name(s);
  }
  put("scenario.schemes", schemes);
  std::string densities;
  for (int n : cfg.densities) {
    if (!densities.empty()) densities += ",";
    densities += std::to_string(n);
  }
  put("scenario.densities", densities);
  put("scenario.reference_distance_m", format_double(cfg.reference_distance_m));
  put("scenario.trials", std::to_string(cfg.trials));
  put("scenario.seed", std::to_string(cfg.seed));
  put("scenario.macro_radius_m", format_double(cfg.macro_radius_m));
  put("scenario.femto_radius_m", format_double(cfg.femto_radius_m));
  put("scenario.macro_tx_w", format_double(cfg.macro_tx_w));
  put("scenario.femto_tx_w", format_double(cfg.femto_tx_w));
  put("scenario.femto_height_m", format_double(cfg.femto_height_m));
  put("scenario.zeta_db", format_double(cfg.zeta_db));
  put("scenario.threads", std::to_string(cfg.threads));
  return out;
}

}  // namespace dfrsim
