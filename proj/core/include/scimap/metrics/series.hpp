#pragma once

#include <string>
#include <utility>
#include <vector>

namespace scimap::metrics {

/// Year-indexed values, years strictly increasing.
struct AnnualSeries {
  std::vector<std::pair<int, double>> points;
  std::string unit;

  bool operator==(const AnnualSeries&) const = default;
};

}  // namespace scimap::metrics
