#include "scimap/metrics/laws.hpp"

#include <algorithm>

#include "scimap/error.hpp"

namespace scimap::metrics {

std::vector<SourceCount> sourceCounts(const ingest::Corpus& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& d : corpus.documents())
    if (!d.source.empty()) ++counts[d.source];
  std::vector<SourceCount> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const SourceCount& a, const SourceCount& b) { return a.second > b.second; });
  return out;
}

std::array<BradfordZone, 3> bradfordZones(std::vector<SourceCount> source_counts) {
  if (source_counts.size() < 3)
    throw DomainError("Bradford zones need at least three sources, got " +
                      std::to_string(source_counts.size()));
  std::stable_sort(source_counts.begin(), source_counts.end(),
                   [](const SourceCount& a, const SourceCount& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  std::size_t total = 0;
  for (const auto& s : source_counts) total += s.second;
  const std::size_t n = source_counts.size();
  const std::size_t cut1 = (total + 2) / 3;
  const std::size_t cut2 = (2 * total + 2) / 3;

  // End (exclusive) of zones 1 and 2: the last source whose running total
  // does not exceed the cut.
  std::size_t end1 = 0;
  std::size_t end2 = 0;
  std::size_t running = 0;
  for (std::size_t i = 0; i < n; ++i) {
    running += source_counts[i].second;
    if (running <= cut1) end1 = i + 1;
    if (running <= cut2) end2 = i + 1;
  }
  // Every zone keeps at least one source.
  end1 = std::clamp<std::size_t>(end1, 1, n - 2);
  end2 = std::clamp<std::size_t>(std::max(end2, end1 + 1), end1 + 1, n - 1);

  std::array<BradfordZone, 3> zones;
  const std::size_t bounds[4] = {0, end1, end2, n};
  running = 0;
  for (int z = 0; z < 3; ++z) {
    BradfordZone& zone = zones[static_cast<std::size_t>(z)];
    zone.zone_index = z + 1;
    for (std::size_t i = bounds[z]; i < bounds[z + 1]; ++i) {
      running += source_counts[i].second;
      zone.sources.push_back(source_counts[i]);
      zone.cumulative.push_back(running);
      zone.articles += source_counts[i].second;
    }
    zone.cumulative_articles = running;
    zone.source_share_pct = 100.0 * static_cast<double>(zone.sources.size()) / static_cast<double>(n);
    zone.article_share_pct =
        total == 0 ? 0.0 : 100.0 * static_cast<double>(zone.articles) / static_cast<double>(total);
  }
  return zones;
}

LotkaFit lotkaFit(const std::vector<std::pair<std::string, std::size_t>>& author_doc_counts) {
  LotkaFit fit;
  for (const auto& [author, n] : author_doc_counts)
    if (n > 0) ++fit.observed[n];
  const auto it = fit.observed.find(1);
  if (it == fit.observed.end())
    throw DomainError("Lotka fit needs at least one single-document author");
  fit.baseline_authors = it->second;
  for (const auto& [n, count] : fit.observed)
    fit.predicted[n] = static_cast<double>(fit.baseline_authors) / static_cast<double>(n * n);
  return fit;
}

std::vector<std::pair<std::string, std::size_t>> authorDocCounts(const ingest::Corpus& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& d : corpus.documents())
    for (const auto& a : d.authors) ++counts[a];
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace scimap::metrics
