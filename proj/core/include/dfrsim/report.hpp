#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dfrsim/allocation.hpp"
#include "dfrsim/scenario.hpp"
#include "dfrsim/spectrum_plan.hpp"

namespace dfrsim {

// All writers produce deterministic bytes for identical inputs and throw
// IoError when the target cannot be written.

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);

void write_allocations_csv(const std::string& path, const SpectrumPlan& plan,
                           const std::vector<FemtoAllocation>& allocations);

struct ManifestInfo {
  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> resolved_config;
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const ManifestInfo& info);

struct PlotPoint {
  double x = 0.0;
  double mean = 0.0;
  double ci95 = 0.0;
};

// Whitespace-separated columns (x, mean, 95% half-width) with a '#' header;
// loadable directly by gnuplot/numpy.
void write_plot_data(const std::string& path, const std::vector<PlotPoint>& points);

}  // namespace dfrsim
