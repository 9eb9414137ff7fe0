#pragma once

// Percentile ranks of documents within a reference set.
//
// With `below` members cited strictly less than a document and `tied`
// members (itself included) cited equally, among n members:
//   cited-less           100 * below / n
//   cited-less-or-equal  100 * (below + tied) / n
//   midpoint             100 * (below + tied / 2) / n
// The first two bound the uncertainty interval; the midpoint is its centre.
// All values are exact rationals.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pctrank/model.hpp"

namespace pctrank {

struct TieCounts {
  std::size_t below = 0;
  std::size_t tied = 0;

  friend bool operator==(const TieCounts&, const TieCounts&) = default;
};

TieCounts count_below_tied(const ReferenceSet& set, std::int64_t times_cited);

// Throws std::invalid_argument when no member has `times_cited` citations.
UncertaintyInterval uncertainty_interval(const ReferenceSet& set, std::int64_t times_cited);

Rational percentile(const ReferenceSet& set, std::int64_t times_cited, CountingRule rule);

// Same formulas from raw counts; requires tied >= 1 and below + tied <= n.
Rational percentile_from_counts(std::size_t below, std::size_t tied, std::size_t n,
                                CountingRule rule);

// One result per member, in member order. Sorts the counts once.
std::vector<QuantileResult> quantile_reference_set(const ReferenceSet& set);

}  // namespace pctrank
