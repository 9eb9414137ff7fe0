#include "pctrank/quantile.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pctrank {
namespace {

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

TieCounts counts_in_sorted(const std::vector<std::int64_t>& sorted, std::int64_t times_cited) {
  auto [first, last] = std::equal_range(sorted.begin(), sorted.end(), times_cited);
  return TieCounts{static_cast<std::size_t>(first - sorted.begin()),
                   static_cast<std::size_t>(last - first)};
}

void require_member(const TieCounts& counts, std::int64_t times_cited) {
  if (counts.tied == 0) {
    throw std::invalid_argument("no member of the reference set has times cited = " +
                                std::to_string(times_cited));
  }
}

}  // namespace

TieCounts count_below_tied(const ReferenceSet& set, std::int64_t times_cited) {
  TieCounts counts;
  for (const Document& doc : set.members()) {
    if (doc.times_cited() < times_cited) ++counts.below;
    if (doc.times_cited() == times_cited) ++counts.tied;
  }
  return counts;
}

Rational percentile_from_counts(std::size_t below, std::size_t tied, std::size_t n,
                                CountingRule rule) {
  if (tied == 0 || below + tied > n) {
    throw std::invalid_argument("percentile needs tied >= 1 and below + tied <= n");
  }
  // Everything over the common denominator 2n.
  std::int64_t doubled = 0;
  switch (rule) {
    case CountingRule::CitedLess:
      doubled = 2 * as_int(below);
      break;
    case CountingRule::CitedLessOrEqual:
      doubled = 2 * as_int(below + tied);
      break;
    case CountingRule::Midpoint:
      doubled = 2 * as_int(below) + as_int(tied);
      break;
  }
  return Rational(100 * doubled, 2 * as_int(n));
}

UncertaintyInterval uncertainty_interval(const ReferenceSet& set, std::int64_t times_cited) {
  TieCounts counts = count_below_tied(set, times_cited);
  require_member(counts, times_cited);
  return UncertaintyInterval(
      percentile_from_counts(counts.below, counts.tied, set.n(), CountingRule::CitedLess),
      percentile_from_counts(counts.below, counts.tied, set.n(), CountingRule::CitedLessOrEqual));
}

Rational percentile(const ReferenceSet& set, std::int64_t times_cited, CountingRule rule) {
  TieCounts counts = count_below_tied(set, times_cited);
  require_member(counts, times_cited);
  return percentile_from_counts(counts.below, counts.tied, set.n(), rule);
}

std::vector<QuantileResult> quantile_reference_set(const ReferenceSet& set) {
  std::vector<std::int64_t> sorted;
  sorted.reserve(set.n());
  for (const Document& doc : set.members()) sorted.push_back(doc.times_cited());
  std::sort(sorted.begin(), sorted.end());

  std::vector<QuantileResult> results;
  results.reserve(set.n());
  for (const Document& doc : set.members()) {
    TieCounts counts = counts_in_sorted(sorted, doc.times_cited());
    QuantileResult r;
    r.document_id = doc.id();
    r.group = set.key();
    r.times_cited = doc.times_cited();
    r.n = set.n();
    r.below = counts.below;
    r.tied = counts.tied;
    r.p_cited_less = percentile_from_counts(r.below, r.tied, r.n, CountingRule::CitedLess);
    r.p_cited_leq = percentile_from_counts(r.below, r.tied, r.n, CountingRule::CitedLessOrEqual);
    r.p_midpoint = percentile_from_counts(r.below, r.tied, r.n, CountingRule::Midpoint);
    r.interval = UncertaintyInterval(r.p_cited_less, r.p_cited_leq);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace pctrank
