#include "dfrsim/spectrum_plan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfrsim {

namespace {

constexpr std::array<const char*, 6> kAxisNames = {"m1", "X", "m2", "Y", "m3", "Z"};

int rotate_guard(int serving_macro, int step) {
  // guard parents are 1, 3, 5; own guard first, then cyclic
  int own = SpectrumPlan::guard_parent(serving_macro);
  int idx = (own - 1) / 2;
  return 1 + 2 * ((idx + step) % 3);
}

int rotate_macro(int serving_macro, int step) {
  int own = SpectrumPlan::macro_parent(serving_macro);
  int idx = own / 2;
  return 2 * ((idx + step) % 3);
}

}  // namespace

SpectrumPlan build_plan(double macro_width_hz, double guard_width_hz) {
  if (!(macro_width_hz > 0.0) || !(guard_width_hz > 0.0))
    throw std::invalid_argument("band widths must be positive");
  SpectrumPlan plan;
  double low = 0.0;
  for (int i = 0; i < 6; ++i) {
    double w = (i % 2 == 0) ? macro_width_hz : guard_width_hz;
    plan.bands[static_cast<std::size_t>(i)] = Band{kAxisNames[static_cast<std::size_t>(i)], low, w};
    low += w;
  }
  plan.total_hz = low;
  return plan;
}

double band_width_hz(const SpectrumPlan& plan, const BandSet& set) {
  auto frac = fraction_per_parent(set);
  double w = 0.0;
  for (int p = 0; p < 6; ++p) w += frac[static_cast<std::size_t>(p)] * plan.parent_width_hz(p);
  return w;
}

double band_overlap_hz(const SpectrumPlan& plan, const BandSet& a, const BandSet& b) {
  auto frac = overlap_fraction_per_parent(a, b);
  double w = 0.0;
  for (int p = 0; p < 6; ++p) w += frac[static_cast<std::size_t>(p)] * plan.parent_width_hz(p);
  return w;
}

std::string band_set_name(const SpectrumPlan& plan, const BandSet& set) {
  BandSet n = normalized(set);
  if (n.empty()) return "none";
  std::string out;
  for (const Fragment& f : n) {
    if (!out.empty()) out += "+";
    out += plan.bands[static_cast<std::size_t>(f.parent)].name;
    if (!(f.lo == Frac{0, 1} && f.hi == Frac{1, 1}))
      out += "[" + frac_to_string(f.lo) + ".." + frac_to_string(f.hi) + "]";
  }
  return out;
}

BandSet femto_pool(const SpectrumPlan& plan, int serving_macro) {
  (void)plan;
  if (serving_macro < 1 || serving_macro > 3)
    throw std::invalid_argument("macro index must be 1..3");
  BandSet pool;
  int own = SpectrumPlan::macro_parent(serving_macro);
  for (int p = 0; p < 6; ++p)
    if (p != own) pool.push_back(full_fragment(p));
  return pool;
}

std::vector<BandSet> edge_subbands(const SpectrumPlan& plan, int serving_macro, int group_size) {
  (void)plan;
  if (serving_macro < 1 || serving_macro > 3)
    throw std::invalid_argument("macro index must be 1..3");
  if (group_size < 1 || group_size > 3)
    throw std::invalid_argument("group size must be 1..3");
  int own = rotate_guard(serving_macro, 0);
  int o1 = rotate_guard(serving_macro, 1);
  int o2 = rotate_guard(serving_macro, 2);
  switch (group_size) {
    case 1:
      // a lone edge femtocell leaves the guard band next to its own
      // macrocell untouched
      return {normalized({full_fragment(o1), full_fragment(o2)})};
    case 2:
      return {normalized({full_fragment(o1), part_fragment(own, 1, 2, 1, 1)}),
              normalized({full_fragment(o2), part_fragment(own, 0, 1, 1, 2)})};
    default:
      return {{full_fragment(own)}, {full_fragment(o1)}, {full_fragment(o2)}};
  }
}

std::vector<BandSet> inner_subbands(const SpectrumPlan& plan, int serving_macro, int group_size) {
  if (serving_macro < 1 || serving_macro > 3)
    throw std::invalid_argument("macro index must be 1..3");
  if (group_size < 1 || group_size > 3)
    throw std::invalid_argument("group size must be 1..3");
  int p1 = rotate_macro(serving_macro, 1);
  int p2 = rotate_macro(serving_macro, 2);
  switch (group_size) {
    case 1:
      return {normalized({full_fragment(p1), full_fragment(p2)})};
    case 2:
      return {{full_fragment(p1)}, {full_fragment(p2)}};
    default:
      return tile_pool(plan, {p1, p2}, 3);
  }
}

std::vector<BandSet> tile_pool(const SpectrumPlan& plan, const std::vector<int>& pool_parents,
                               int k) {
  if (pool_parents.empty()) throw std::invalid_argument("pool must not be empty");
  if (k < 1) throw std::invalid_argument("slice count must be positive");
  double w0 = plan.parent_width_hz(pool_parents.front());
  for (int p : pool_parents)
    if (plan.parent_width_hz(p) != w0)
      throw std::invalid_argument("tiled pool members must have equal widths");

  // Slice j covers [j*m/k, (j+1)*m/k] in pool units, where the pool is m
  // consecutive unit cells; cut points are exact rationals over k.
  auto m = static_cast<std::int64_t>(pool_parents.size());
  std::vector<BandSet> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::int64_t j = 0; j < k; ++j) {
    std::int64_t a_num = j * m;            // over k
    std::int64_t b_num = (j + 1) * m;      // over k
    BandSet slice;
    for (std::int64_t i = 0; i < m; ++i) {
      std::int64_t lo_num = std::max<std::int64_t>(a_num - i * k, 0);
      std::int64_t hi_num = std::min<std::int64_t>(b_num - i * k, k);
      if (lo_num < hi_num)
        slice.push_back(part_fragment(pool_parents[static_cast<std::size_t>(i)], lo_num, k,
                                      hi_num, k));
    }
    normalize_bands(slice);
    out.push_back(std::move(slice));
  }
  return out;
}

std::vector<int> edge_pool_order(int serving_macro) {
  return {rotate_guard(serving_macro, 0), rotate_guard(serving_macro, 1),
          rotate_guard(serving_macro, 2)};
}

std::vector<int> inner_pool_order(int serving_macro) {
  return {rotate_macro(serving_macro, 1), rotate_macro(serving_macro, 2)};
}

PartitionReport verify_partition(const SpectrumPlan& plan) {
  PartitionReport report;
  double tol = 1e-9 * std::max(plan.total_hz, 1.0);

  double width_sum = 0.0;
  for (const Band& b : plan.bands) width_sum += b.width_hz;
  bool widths_positive = std::all_of(plan.bands.begin(), plan.bands.end(),
                                     [](const Band& b) { return b.width_hz > 0.0; });

  // contiguity: sorted by low edge, each band starts where the previous ends
  std::array<int, 6> order{0, 1, 2, 3, 4, 5};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return plan.bands[static_cast<std::size_t>(a)].low_hz <
           plan.bands[static_cast<std::size_t>(b)].low_hz;
  });
  bool contiguous = widths_positive;
  for (int i = 0; i + 1 < 6 && contiguous; ++i) {
    const Band& cur = plan.bands[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    const Band& nxt = plan.bands[static_cast<std::size_t>(order[static_cast<std::size_t>(i + 1)])];
    if (std::abs(cur.low_hz + cur.width_hz - nxt.low_hz) > tol) contiguous = false;
  }
  report.layout_ok = contiguous && std::abs(width_sum - plan.total_hz) <= tol;

  for (int macro = 1; macro <= 3; ++macro) {
    auto& ident = report.identities[static_cast<std::size_t>(macro - 1)];
    ident.macro_index = macro;
    const Band& own = plan.bands[static_cast<std::size_t>(SpectrumPlan::macro_parent(macro))];
    double own_low = own.low_hz;
    double own_high = own.low_hz + own.width_hz;
    ident.disjoint_ok = true;
    for (int p = 0; p < 6; ++p) {
      if (p == SpectrumPlan::macro_parent(macro)) continue;
      const Band& other = plan.bands[static_cast<std::size_t>(p)];
      double lo = std::max(own_low, other.low_hz);
      double hi = std::min(own_high, other.low_hz + other.width_hz);
      if (hi - lo > tol) ident.disjoint_ok = false;
    }
    // the pool is the other five bands, so its union with the serving band
    // covers the total exactly iff the layout itself is a contiguous tiling
    ident.union_ok = report.layout_ok;
  }
  return report;
}

}  // namespace dfrsim
