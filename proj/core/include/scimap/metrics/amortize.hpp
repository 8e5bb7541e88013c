#pragma once

// Citation-age amortization.
//
// Every item carries a year; its citable years are `reference_year - year + 1`
// (the current, incomplete year counts).  The pondering scalar of an item is
// `max_citable / citable`, and normalizing by the largest pondering scalar
// leaves `min_citable / citable` -- so the youngest item is a fixed point and
// older items are scaled down in proportion to their age.

#include <span>
#include <string>
#include <vector>

#include "scimap/metrics/series.hpp"

namespace scimap::metrics {

struct AmortizationRow {
  int year = 0;
  double metric = 0.0;
  int citable_years = 0;
  double pondering_scalar = 0.0;
  double normalized_ps = 0.0;
  double amortized = 0.0;
  /// amortized * display_scale; presentation only.
  double display = 0.0;
};

/// One row per series point.  Throws DomainError when a year lies after
/// `reference_year`.
std::vector<AmortizationRow> amortize(const AnnualSeries& series, int reference_year,
                                      double display_scale = 1.0);

/// Largest h such that at least h counts are >= h.
long long hIndex(std::span<const long long> citation_counts);

struct HIndexItem {
  std::string id;
  long long h = 0;
  int first_year = 0;
};

struct AmortizedItem {
  std::string id;
  long long h = 0;
  int first_year = 0;
  int citable_years = 0;
  /// Smallest citable_years over the item set (the normalization anchor).
  int anchor_citable_years = 1;
  double amortized = 0.0;
  /// h used for the reported value after tie resolution (== h otherwise).
  long long effective_h = 0;
  bool tie_flagged = false;
};

/// Amortized h-index for each item, ranked by descending value.  Equal values
/// (compared exactly as rationals) are ordered by earlier first_year, then id.
std::vector<AmortizedItem> amortizedHIndex(std::span<const HIndexItem> items, int reference_year);

/// Exact equality of two amortized values sharing the same anchor.
bool sameAmortized(const AmortizedItem& a, const AmortizedItem& b);

struct TieDecrement {
  std::string id;
  long long decrements = 0;
};

struct TieResolution {
  std::vector<AmortizedItem> ranked;
  std::vector<TieDecrement> ledger;
  bool unresolved = false;
};

/// Breaks exact ties by repeatedly lowering the h of every still-tied item by
/// one and re-amortizing, until the group is separated or an item reaches
/// h = 0.  A group stuck at zero keeps the earlier-first_year-first order and
/// is flagged.  Items outside a tie keep their positions.
TieResolution resolveAmortizedTies(std::vector<AmortizedItem> ranked);

}  // namespace scimap::metrics
