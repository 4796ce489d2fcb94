#include "dfrsim/bands.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dfrsim {

Frac Frac::of(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("fraction denominator must be nonzero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Frac{num, den};
}

Frac frac_min(const Frac& a, const Frac& b) { return a < b ? a : b; }
Frac frac_max(const Frac& a, const Frac& b) { return a < b ? b : a; }

Frac frac_sub(const Frac& a, const Frac& b) {
  return Frac::of(a.num * b.den - b.num * a.den, a.den * b.den);
}

std::string frac_to_string(const Frac& f) {
  if (f.den == 1) return std::to_string(f.num);
  return std::to_string(f.num) + "/" + std::to_string(f.den);
}

Fragment full_fragment(int parent) {
  if (parent < 0 || parent > 5)
    throw std::invalid_argument("fragment parent must index one of the six primitive bands");
  return Fragment{parent, Frac{0, 1}, Frac{1, 1}};
}

Fragment part_fragment(int parent, std::int64_t lo_num, std::int64_t lo_den,
                       std::int64_t hi_num, std::int64_t hi_den) {
  if (parent < 0 || parent > 5)
    throw std::invalid_argument("fragment parent must index one of the six primitive bands");
  Fragment f{parent, Frac::of(lo_num, lo_den), Frac::of(hi_num, hi_den)};
  if (!(Frac{0, 1} <= f.lo) || !(f.lo < f.hi) || !(f.hi <= Frac{1, 1}))
    throw std::invalid_argument("fragment bounds must satisfy 0 <= lo < hi <= 1");
  return f;
}

void normalize_bands(BandSet& set) {
  std::sort(set.begin(), set.end(), [](const Fragment& a, const Fragment& b) {
    if (a.parent != b.parent) return a.parent < b.parent;
    return a.lo < b.lo;
  });
  BandSet merged;
  for (const Fragment& f : set) {
    if (!merged.empty() && merged.back().parent == f.parent &&
        frac_max(merged.back().hi, f.lo) == merged.back().hi) {
      // overlapping or touching: extend
      merged.back().hi = frac_max(merged.back().hi, f.hi);
    } else {
      merged.push_back(f);
    }
  }
  set = std::move(merged);
}

BandSet normalized(BandSet set) {
  normalize_bands(set);
  return set;
}

bool bands_equal(const BandSet& a, const BandSet& b) { return normalized(a) == normalized(b); }

bool bands_disjoint(const BandSet& a, const BandSet& b) {
  for (const Fragment& x : a)
    for (const Fragment& y : b) {
      if (x.parent != y.parent) continue;
      if (frac_max(x.lo, y.lo) < frac_min(x.hi, y.hi)) return false;
    }
  return true;
}

bool bands_subset(const BandSet& inner, const BandSet& outer) {
  BandSet out = normalized(outer);
  for (const Fragment& x : normalized(inner)) {
    bool covered = false;
    for (const Fragment& y : out) {
      if (x.parent == y.parent && y.lo <= x.lo && x.hi <= y.hi) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

BandSet bands_union(const BandSet& a, const BandSet& b) {
  BandSet u = a;
  u.insert(u.end(), b.begin(), b.end());
  normalize_bands(u);
  return u;
}

std::array<double, 6> fraction_per_parent(const BandSet& set) {
  std::array<double, 6> acc{};
  for (const Fragment& f : set) acc[static_cast<std::size_t>(f.parent)] += frac_sub(f.hi, f.lo).value();
  return acc;
}

std::array<double, 6> overlap_fraction_per_parent(const BandSet& a, const BandSet& b) {
  std::array<double, 6> acc{};
  for (const Fragment& x : a)
    for (const Fragment& y : b) {
      if (x.parent != y.parent) continue;
      Frac lo = frac_max(x.lo, y.lo);
      Frac hi = frac_min(x.hi, y.hi);
      if (lo < hi) acc[static_cast<std::size_t>(x.parent)] += frac_sub(hi, lo).value();
    }
  return acc;
}

}  // namespace dfrsim
