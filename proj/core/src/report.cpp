#include "dfrsim/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dfrsim/errors.hpp"
#include "dfrsim/version.hpp"

namespace dfrsim {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out.good()) throw IoError("write failed: " + path);
}

std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (int id : ids) {
    if (!s.empty()) s += ';';
    s += std::to_string(id);
  }
  return s;
}

}  // namespace

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out = open_out(path);
  out << "scheme,n_femtos,trial,user_class,user_id,sinr_db,rate_bps,outage_prob\n";
  for (const ResultRow& r : rows) {
    out << scheme_name(r.scheme) << ',' << r.n_femtos << ',' << r.trial << ','
        << user_class_name(r.user_class) << ',' << r.user_id << ',' << num(r.sinr_db) << ','
        << num(r.rate_bps) << ',' << num(r.outage_prob) << '\n';
  }
  finish(out, path);
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_out(path);
  out << "scheme,n_femtos,user_class,samples,mean_sinr_db,mean_rate_bps,rate_ci95_bps,"
         "mean_goodput_bps,goodput_ci95_bps,mean_outage,outage_ci95\n";
  for (const SummaryRow& r : rows) {
    out << scheme_name(r.scheme) << ',' << r.n_femtos << ',' << r.user_class << ',' << r.samples
        << ',' << num(r.mean_sinr_db) << ',' << num(r.mean_rate_bps) << ','
        << num(r.rate_ci95_bps) << ',' << num(r.mean_goodput_bps) << ','
        << num(r.goodput_ci95_bps) << ',' << num(r.mean_outage) << ',' << num(r.outage_ci95)
        << '\n';
  }
  finish(out, path);
}

void write_allocations_csv(const std::string& path, const SpectrumPlan& plan,
                           const std::vector<FemtoAllocation>& allocations) {
  std::ofstream out = open_out(path);
  out << "femto_id,serving_macro,zone,group,band_names,total_width_hz\n";
  for (const FemtoAllocation& a : allocations) {
    out << a.femto_id << ',' << a.serving_macro << ',' << zone_name(a.zone) << ','
        << join_ids(a.group) << ',' << band_set_name(plan, a.bands) << ','
        << num(band_width_hz(plan, a.bands)) << '\n';
  }
  finish(out, path);
}

void write_manifest(const std::string& path, const ManifestInfo& info) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config_path"] = info.config_path;
  j["output_dir"] = info.output_dir;
  j["seed"] = info.seed;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [key, value] : info.resolved_config) cfg[key] = value;
  j["config"] = cfg;
  j["outputs"] = info.outputs;

  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

void write_plot_data(const std::string& path, const std::vector<PlotPoint>& points) {
  std::ofstream out = open_out(path);
  out << "# x mean ci95\n";
  for (const PlotPoint& p : points) {
    out << num(p.x) << ' ' << num(p.mean) << ' ' << num(p.ci95) << '\n';
  }
  finish(out, path);
}

}  // namespace dfrsim
