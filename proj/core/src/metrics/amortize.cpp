#include "scimap/metrics/amortize.hpp"

#include <algorithm>
#include <limits>

#include "scimap/error.hpp"

namespace scimap::metrics {

std::vector<AmortizationRow> amortize(const AnnualSeries& series, int reference_year,
                                      double display_scale) {
  std::vector<AmortizationRow> rows;
  if (series.points.empty()) return rows;

  int maxCitable = 0;
  int minCitable = std::numeric_limits<int>::max();
  for (const auto& [year, value] : series.points) {
    if (year > reference_year)
      throw DomainError("amortize: year " + std::to_string(year) + " after reference year " +
                        std::to_string(reference_year));
    const int citable = reference_year - year + 1;
    maxCitable = std::max(maxCitable, citable);
    minCitable = std::min(minCitable, citable);
  }
  // max pondering scalar = maxCitable / minCitable
  for (const auto& [year, value] : series.points) {
    AmortizationRow r;
    r.year = year;
    r.metric = value;
    r.citable_years = reference_year - year + 1;
    r.pondering_scalar = static_cast<double>(maxCitable) / r.citable_years;
    r.normalized_ps = static_cast<double>(minCitable) / r.citable_years;
    r.amortized = value * minCitable / r.citable_years;
    r.display = r.amortized * display_scale;
    rows.push_back(r);
  }
  return rows;
}

long long hIndex(std::span<const long long> citation_counts) {
  std::vector<long long> sorted(citation_counts.begin(), citation_counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  long long h = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= static_cast<long long>(i + 1))
      h = static_cast<long long>(i + 1);
    else
      break;
  }
  return h;
}

namespace {

// a.h / a.cy  vs  b.h / b.cy, exact.  h is bounded by a document count and cy
// by a span of years, so the cross products stay far from overflow.
int compareValue(long long ha, int cya, long long hb, int cyb) {
  const long long lhs = ha * cyb;
  const long long rhs = hb * cya;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

bool rankBefore(const AmortizedItem& a, const AmortizedItem& b) {
  const int c = compareValue(a.effective_h, a.citable_years, b.effective_h, b.citable_years);
  if (c != 0) return c > 0;
  if (a.first_year != b.first_year) return a.first_year < b.first_year;
  return a.id < b.id;
}

void refresh(AmortizedItem& item) {
  item.amortized = static_cast<double>(item.effective_h) * item.anchor_citable_years /
                   item.citable_years;
}

}  // namespace

bool sameAmortized(const AmortizedItem& a, const AmortizedItem& b) {
  return compareValue(a.effective_h, a.citable_years, b.effective_h, b.citable_years) == 0;
}

std::vector<AmortizedItem> amortizedHIndex(std::span<const HIndexItem> items, int reference_year) {
  std::vector<AmortizedItem> out;
  if (items.empty()) return out;
  int anchor = std::numeric_limits<int>::max();
  for (const auto& it : items) {
    if (it.first_year > reference_year)
      throw DomainError("amortizedHIndex: first year of '" + it.id + "' after reference year");
    if (it.h < 0) throw DomainError("amortizedHIndex: negative h for '" + it.id + "'");
    anchor = std::min(anchor, reference_year - it.first_year + 1);
  }
  for (const auto& it : items) {
    AmortizedItem a;
    a.id = it.id;
    a.h = it.h;
    a.effective_h = it.h;
    a.first_year = it.first_year;
    a.citable_years = reference_year - it.first_year + 1;
    a.anchor_citable_years = anchor;
    refresh(a);
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end(), rankBefore);
  return out;
}

TieResolution resolveAmortizedTies(std::vector<AmortizedItem> ranked) {
  TieResolution res;
  std::size_t start = 0;
  while (start < ranked.size()) {
    std::size_t end = start + 1;
    while (end < ranked.size() && sameAmortized(ranked[start], ranked[end])) ++end;
    if (end - start < 2) {
      start = end;
      continue;
    }

    const auto first = ranked.begin() + static_cast<std::ptrdiff_t>(start);
    const auto last = ranked.begin() + static_cast<std::ptrdiff_t>(end);
    std::vector<long long> decrements(end - start, 0);
    for (;;) {
      std::vector<bool> tied(end - start, false);
      bool any = false;
      for (std::size_t i = start; i < end; ++i)
        for (std::size_t j = i + 1; j < end; ++j)
          if (sameAmortized(ranked[i], ranked[j])) tied[i - start] = tied[j - start] = any = true;
      if (!any) break;

      bool floor = false;
      for (std::size_t i = start; i < end; ++i)
        if (tied[i - start] && ranked[i].effective_h == 0) floor = true;
      if (floor) {
        for (std::size_t i = start; i < end; ++i)
          if (tied[i - start]) ranked[i].tie_flagged = true;
        res.unresolved = true;
        break;
      }
      for (std::size_t i = start; i < end; ++i) {
        if (!tied[i - start]) continue;
        --ranked[i].effective_h;
        ++decrements[i - start];
      }
    }
    for (auto it = first; it != last; ++it) refresh(*it);
    // Record before reordering so ledger rows follow the incoming ranking.
    for (std::size_t i = start; i < end; ++i)
      if (decrements[i - start] > 0) res.ledger.push_back({ranked[i].id, decrements[i - start]});
    std::stable_sort(first, last, rankBefore);
    start = end;
  }
  res.ranked = std::move(ranked);
  return res;
}

}  // namespace scimap::metrics
