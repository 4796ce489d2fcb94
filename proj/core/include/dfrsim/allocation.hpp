#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "dfrsim/propagation.hpp"
#include "dfrsim/spectrum_plan.hpp"

namespace dfrsim {

struct Pos {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Pos& a, const Pos& b);

enum class Tier { macro, femto };
enum class Zone { inner, cell_edge };

const char* zone_name(Zone z);

struct NetworkNode {
  int id = 0;
  Tier tier = Tier::femto;
  Pos position;
  double tx_power_w = 0.0;
  double height_m = 0.0;
  int serving_macro = 0;  // femto only; 0 when unassigned or macro
};

struct SensingReport {
  std::array<double, 3> s_w{};      // received power from each macro BS, watts
  std::vector<int> interferer_ids;  // femtos within sensing range, ascending id
};

// Per-femtocell allocation state: the sensed zone, the conflict group, and
// the currently assigned band set.
struct FemtoAllocation {
  int femto_id = 0;
  int serving_macro = 0;
  Zone zone = Zone::inner;
  std::vector<int> group;  // sorted ids, including self
  BandSet bands;
};

// Shadowing source for sensing and link evaluation. Implementations must be
// deterministic per (macro, site) so re-sensing reproduces the same report.
class ShadowSampler {
 public:
  virtual ~ShadowSampler() = default;
  virtual double macro_shadow_db(int macro_index, int site_id) const = 0;
};

class ZeroShadow : public ShadowSampler {
 public:
  double macro_shadow_db(int, int) const override { return 0.0; }
};

// serving macro = strongest sensed signal (ties to the lowest index); the
// femto is cell-edge iff any non-serving macro still exceeds the threshold.
std::pair<int, Zone> classify(const SensingReport& report, double s_th_w);

struct AllocationParams {
  double s_th_w = 0.0;
  double sensing_radius_m = 60.0;
  bool guard_enabled = true;  // when false, every femto is treated as inner
  double f_c_mhz = 900.0;
  HataMode hata_mode = HataMode::paper;
};

/// The allocation state machine. Femtocells are installed one at a time: each
// install senses the macro tier, classifies the newcomer, and rebalances the
// sub-band partition of every conflict group it touches. Installs are
// serialized; snapshots are immutable copies safe to read concurrently.
class World {
 public:
  World(SpectrumPlan plan, std::array<NetworkNode, 3> macros, AllocationParams params);

  SensingReport sense(const NetworkNode& femto, const ShadowSampler& shadow) const;

  const FemtoAllocation& install_femto(const NetworkNode& femto, const ShadowSampler& shadow);

  std::vector<FemtoAllocation> snapshot() const;

  const SpectrumPlan& plan() const { return plan_; }
  const std::vector<NetworkNode>& femtos() const { return femtos_; }

 private:
  void recompute();

  SpectrumPlan plan_;
  std::array<NetworkNode, 3> macros_;
  AllocationParams params_;
  std::vector<NetworkNode> femtos_;
  std::vector<Zone> sensed_zones_;  // parallel to femtos_
  std::vector<FemtoAllocation> allocations_;
};

// Connected components of the "within radius" graph restricted to ids with
// equal keys. Components are the order-insensitive closure of pairwise
// conflicts; each is returned sorted ascending, in order of smallest member.
std::vector<std::vector<int>> conflict_components(const std::vector<int>& ids,
                                                  const std::vector<Pos>& positions,
                                                  const std::vector<long>& keys, double radius_m);

// Band sets for one conflict group, ascending-id order. Sizes 1..3 use the
// per-zone split rules; larger groups tile the zone pool equally.
std::vector<BandSet> group_bands(const SpectrumPlan& plan, int serving_macro, Zone zone,
                                 int group_size);

}  // namespace dfrsim
