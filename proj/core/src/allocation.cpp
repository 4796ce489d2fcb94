#include "dfrsim/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfrsim {

double distance(const Pos& a, const Pos& b) { return std::hypot(a.x - b.x, a.y - b.y); }

const char* zone_name(Zone z) { return z == Zone::inner ? "inner" : "cell_edge"; }

std::pair<int, Zone> classify(const SensingReport& report, double s_th_w) {
  for (double s : report.s_w)
    if (s < 0.0) throw std::invalid_argument("sensed powers must be non-negative");
  if (report.s_w[0] == 0.0 && report.s_w[1] == 0.0 && report.s_w[2] == 0.0)
    throw std::domain_error("no macro coverage: all sensed signals are zero");
  int serving = 1;
  for (int i = 2; i <= 3; ++i)
    if (report.s_w[static_cast<std::size_t>(i - 1)] > report.s_w[static_cast<std::size_t>(serving - 1)])
      serving = i;
  Zone zone = Zone::inner;
  for (int i = 1; i <= 3; ++i)
    if (i != serving && report.s_w[static_cast<std::size_t>(i - 1)] > s_th_w) zone = Zone::cell_edge;
  return {serving, zone};
}

std::vector<std::vector<int>> conflict_components(const std::vector<int>& ids,
                                                  const std::vector<Pos>& positions,
                                                  const std::vector<long>& keys,
                                                  double radius_m) {
  if (ids.size() != positions.size() || ids.size() != keys.size())
    throw std::invalid_argument("ids, positions and keys must have equal length");
  std::size_t n = ids.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (keys[i] == keys[j] && distance(positions[i], positions[j]) <= radius_m)
        parent[find(i)] = find(j);

  std::vector<std::vector<int>> groups;
  std::vector<long> root_group(n, -1);
  // deterministic group order: by smallest member id
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  for (std::size_t i : order) {
    std::size_t r = find(i);
    if (root_group[r] < 0) {
      root_group[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(root_group[r])].push_back(ids[i]);
  }
  return groups;
}

std::vector<BandSet> group_bands(const SpectrumPlan& plan, int serving_macro, Zone zone,
                                 int group_size) {
  if (group_size < 1) throw std::invalid_argument("group size must be positive");
  if (zone == Zone::cell_edge) {
    if (group_size <= 3) return edge_subbands(plan, serving_macro, group_size);
    return tile_pool(plan, edge_pool_order(serving_macro), group_size);
  }
  if (group_size <= 3) return inner_subbands(plan, serving_macro, group_size);
  return tile_pool(plan, inner_pool_order(serving_macro), group_size);
}

World::World(SpectrumPlan plan, std::array<NetworkNode, 3> macros, AllocationParams params)
    : plan_(std::move(plan)), macros_(macros), params_(params) {
  for (int i = 0; i < 3; ++i) {
    if (macros_[static_cast<std::size_t>(i)].tier != Tier::macro)
      throw std::invalid_argument("macro slots must hold macro nodes");
    if (!(macros_[static_cast<std::size_t>(i)].tx_power_w > 0.0))
      throw std::invalid_argument("macro transmit power must be positive");
  }
}

SensingReport World::sense(const NetworkNode& femto, const ShadowSampler& shadow) const {
  if (femto.tier != Tier::femto) throw std::invalid_argument("sensing node must be a femto");
  SensingReport report;
  for (int i = 1; i <= 3; ++i) {
    const NetworkNode& bs = macros_[static_cast<std::size_t>(i - 1)];
    double d_km = std::max(distance(femto.position, bs.position), 1.0) / 1000.0;
    MacroLinkParams link{params_.f_c_mhz, bs.height_m, femto.height_m, d_km,
                         shadow.macro_shadow_db(i, femto.id)};
    report.s_w[static_cast<std::size_t>(i - 1)] =
        received_power_w(bs.tx_power_w, hata_path_loss(link, params_.hata_mode));
  }
  for (const NetworkNode& other : femtos_) {
    if (other.id == femto.id) continue;
    if (distance(other.position, femto.position) <= params_.sensing_radius_m)
      report.interferer_ids.push_back(other.id);
  }
  std::sort(report.interferer_ids.begin(), report.interferer_ids.end());
  return report;
}

const FemtoAllocation& World::install_femto(const NetworkNode& femto,
                                            const ShadowSampler& shadow) {
  if (femto.tier != Tier::femto) throw std::invalid_argument("installed node must be a femto");
  for (const NetworkNode& existing : femtos_)
    if (existing.id == femto.id) throw std::invalid_argument("duplicate femto id");
  for (const NetworkNode& bs : macros_)
    if (bs.id == femto.id) throw std::invalid_argument("femto id collides with a macro id");

  SensingReport report = sense(femto, shadow);
  auto [serving, zone] = classify(report, params_.s_th_w);

  NetworkNode stored = femto;
  stored.serving_macro = serving;
  femtos_.push_back(stored);
  sensed_zones_.push_back(zone);
  recompute();

  for (const FemtoAllocation& a : allocations_)
    if (a.femto_id == femto.id) return a;
  throw std::logic_error("installed femto missing from allocation table");
}

void World::recompute() {
  std::vector<int> ids;
  std::vector<Pos> positions;
  std::vector<long> keys;
  ids.reserve(femtos_.size());
  for (std::size_t i = 0; i < femtos_.size(); ++i) {
    const NetworkNode& f = femtos_[i];
    Zone effective = params_.guard_enabled ? sensed_zones_[i] : Zone::inner;
    ids.push_back(f.id);
    positions.push_back(f.position);
    keys.push_back(f.serving_macro * 2 + (effective == Zone::cell_edge ? 1 : 0));
  }

  allocations_.clear();
  allocations_.reserve(femtos_.size());
  auto groups = conflict_components(ids, positions, keys, params_.sensing_radius_m);
  for (const auto& group : groups) {
    int first = group.front();
    std::size_t idx = 0;
    while (femtos_[idx].id != first) ++idx;
    int serving = femtos_[idx].serving_macro;
    Zone effective = params_.guard_enabled ? sensed_zones_[idx] : Zone::inner;
    auto bands = group_bands(plan_, serving, effective, static_cast<int>(group.size()));
    for (std::size_t m = 0; m < group.size(); ++m)
      allocations_.push_back(FemtoAllocation{group[m], serving, effective, group, bands[m]});
  }
  std::sort(allocations_.begin(), allocations_.end(),
            [](const FemtoAllocation& a, const FemtoAllocation& b) {
              return a.femto_id < b.femto_id;
            });
}

std::vector<FemtoAllocation> World::snapshot() const { return allocations_; }

}  // namespace dfrsim
