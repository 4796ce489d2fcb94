#pragma once

#include <array>
#include <string>
#include <vector>

#include "dfrsim/bands.hpp"

namespace dfrsim {

// One primitive band: a named contiguous frequency interval.
struct Band {
  std::string name;
  double low_hz = 0.0;
  double width_hz = 0.0;
};

// The cluster-wide frequency partition. Six primitive bands laid out along
// the axis in the order m1, X, m2, Y, m3, Z: each macrocell band is followed
// by the guard band adjacent to it. Immutable after construction; all
// operations on it are pure functions.
struct SpectrumPlan {
  std::array<Band, 6> bands;
  double total_hz = 0.0;

  static constexpr int macro_parent(int macro_index) { return 2 * (macro_index - 1); }
  static constexpr int guard_parent(int macro_index) { return 2 * (macro_index - 1) + 1; }

  double parent_width_hz(int parent) const { return bands[static_cast<std::size_t>(parent)].width_hz; }
};

SpectrumPlan build_plan(double macro_width_hz, double guard_width_hz);

// Width of a (possibly composite) band set under a plan.
double band_width_hz(const SpectrumPlan& plan, const BandSet& set);

// Overlap width between two band sets. Exactly zero iff the sets are
// symbolically disjoint.
double band_overlap_hz(const SpectrumPlan& plan, const BandSet& a, const BandSet& b);

// Display name, e.g. "m2", "Y+Z", "Y+X[1/2..1]". Contains no commas.
std::string band_set_name(const SpectrumPlan& plan, const BandSet& set);

// The spectrum a femtocell served by the given macrocell may draw from: the
// two other macro bands plus all three guard bands.
BandSet femto_pool(const SpectrumPlan& plan, int serving_macro);

// Sub-band splits for a conflict group of cell-edge femtocells. Group sizes
// beyond 3 are handled by the allocation layer via tile_pool.
std::vector<BandSet> edge_subbands(const SpectrumPlan& plan, int serving_macro, int group_size);

// Sub-band splits for a conflict group of inner femtocells.
std::vector<BandSet> inner_subbands(const SpectrumPlan& plan, int serving_macro, int group_size);

// Splits a pool of equal-width primitive bands (given in pool order) into k
// equal contiguous slices. Cut points are exact rationals, so slices are
// pairwise disjoint and tile the pool exactly for any k.
std::vector<BandSet> tile_pool(const SpectrumPlan& plan, const std::vector<int>& pool_parents,
                               int k);

// Pool orders used by the allocation layer for groups larger than 3. Edge
// groups walk the guard bands starting at the serving macro's adjacent guard
// (matching the size-3 split, where the first member takes that band); inner
// groups walk the two other macro bands in cyclic order.
std::vector<int> edge_pool_order(int serving_macro);
std::vector<int> inner_pool_order(int serving_macro);

// Per-macrocell partition identity check. Works on hand-built (possibly
// inconsistent) plans, so it checks concrete intervals, not construction
// guarantees.
struct PartitionReport {
  struct MacroIdentity {
    int macro_index = 0;
    bool disjoint_ok = false;  // serving band does not overlap its femto pool
    bool union_ok = false;     // serving band plus pool cover the total exactly
  };
  std::array<MacroIdentity, 3> identities;
  bool layout_ok = false;  // six bands are contiguous and sum to total_hz

  bool all_ok() const {
    if (!layout_ok) return false;
    for (const auto& m : identities)
      if (!m.disjoint_ok || !m.union_ok) return false;
    return true;
  }
};

PartitionReport verify_partition(const SpectrumPlan& plan);

}  // namespace dfrsim
