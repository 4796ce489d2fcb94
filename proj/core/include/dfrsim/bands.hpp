#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dfrsim {

// Exact rational in [0, 1], always reduced, denominator positive. Sub-band
// boundaries are carried as fractions of a primitive band's width so overlap
// and disjointness are decided exactly, with no floating-point tolerance.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Frac of(std::int64_t num, std::int64_t den);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Frac& a, const Frac& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Frac& a, const Frac& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator<=(const Frac& a, const Frac& b) { return a.num * b.den <= b.num * a.den; }
};

Frac frac_min(const Frac& a, const Frac& b);
Frac frac_max(const Frac& a, const Frac& b);
Frac frac_sub(const Frac& a, const Frac& b);

std::string frac_to_string(const Frac& f);

// A contiguous slice of one primitive band: fractions of its width.
struct Fragment {
  int parent = 0;  // index into the plan's six primitive bands
  Frac lo;
  Frac hi;

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

// A (possibly composite) frequency assignment: a set of fragments, kept
// sorted by (parent, lo) with touching same-parent fragments coalesced.
using BandSet = std::vector<Fragment>;

Fragment full_fragment(int parent);
Fragment part_fragment(int parent, std::int64_t lo_num, std::int64_t lo_den,
                       std::int64_t hi_num, std::int64_t hi_den);

void normalize_bands(BandSet& set);
BandSet normalized(BandSet set);

bool bands_equal(const BandSet& a, const BandSet& b);
bool bands_disjoint(const BandSet& a, const BandSet& b);
bool bands_subset(const BandSet& inner, const BandSet& outer);
BandSet bands_union(const BandSet& a, const BandSet& b);

// Sum of fractional parent coverage per parent index, for width computations.
std::array<double, 6> fraction_per_parent(const BandSet& set);

// Exact fractional overlap between two sets, per parent index.
std::array<double, 6> overlap_fraction_per_parent(const BandSet& a, const BandSet& b);

}  // namespace dfrsim
