#pragma once

// One-sample Wilcoxon signed-rank test.
//
// Differences equal to the hypothesised median are dropped, the remaining
// absolute differences are ranked (mid-ranks for ties) and W+ is the rank sum
// of the positive ones. With at most kExactMaxN nonzero differences and no
// tied magnitudes the two-sided p comes from the exact null distribution of
// W+; otherwise from the normal approximation with tie-corrected variance
// and a 0.5 continuity correction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pctrank/model.hpp"

namespace pctrank {

inline constexpr std::size_t kExactMaxN = 25;
inline constexpr double kContinuityCorrection = 0.5;

// Throws std::invalid_argument on empty input.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> values, double mu0);
WilcoxonResult wilcoxon_signed_rank(std::span<const Rational> values, const Rational& mu0);

// Selected percentile of each result against 50.
WilcoxonResult test_percentiles_vs_median(std::span<const QuantileResult> results,
                                          CountingRule rule);

// Class scores against the scheme's random-attribution baseline.
WilcoxonResult test_scores_vs_baseline(std::span<const Rational> scores, const ClassScheme& scheme);
WilcoxonResult test_scores_vs_baseline(std::span<const double> scores, const ClassScheme& scheme);

// counts[w] = number of subsets of {1..n} whose sum is w, i.e. the null
// distribution of W+ scaled by 2^n. Requires n <= 62.
std::vector<std::uint64_t> signed_rank_distribution(std::size_t n);

struct NormalApprox {
  double z = 0;
  double p_two_sided = 1;
};

// Normal approximation for W+ among n nonzero differences; tie_term is the
// sum of t^3 - t over tied magnitude blocks.
NormalApprox normal_approx(std::size_t n, double w_plus, double tie_term = 0);

// min(1, 2 * min(P(W+ <= w), P(W+ >= w))) under the exact null.
Rational exact_two_sided_p(std::size_t n, std::int64_t w_plus);

}  // namespace pctrank
