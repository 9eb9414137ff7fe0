#include "pctrank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pctrank/binning.hpp"

namespace pctrank {
namespace {

template <typename T>
T magnitude(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return v.abs();
  } else {
    return std::fabs(v);
  }
}

template <typename T>
int sign_of(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return v.sign();
  } else {
    return (v > 0) - (v < 0);
  }
}

template <typename T>
WilcoxonResult signed_rank(const std::vector<T>& differences) {
  std::vector<T> nonzero;
  nonzero.reserve(differences.size());
  for (const T& d : differences) {
    if (sign_of(d) != 0) nonzero.push_back(d);
  }

  WilcoxonResult result;
  const std::size_t n = nonzero.size();
  result.n_nonzero = n;
  if (n == 0) {
    result.p_exact = Rational(1);
    return result;
  }

  std::vector<T> magnitudes;
  magnitudes.reserve(n);
  for (const T& d : nonzero) magnitudes.push_back(magnitude(d));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return magnitudes[a] < magnitudes[b]; });

  bool has_ties = false;
  double tie_term = 0;  // sum of t^3 - t over tie blocks
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && magnitudes[order[j]] == magnitudes[order[i]]) ++j;
    const double t = static_cast<double>(j - i);
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    if (j - i > 1) {
      has_ties = true;
      tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k) {
      if (sign_of(nonzero[order[k]]) > 0) {
        result.w_plus += mid_rank;
      } else {
        result.w_minus += mid_rank;
      }
    }
    i = j;
  }

  if (n <= kExactMaxN && !has_ties) {
    result.method = WilcoxonMethod::Exact;
    Rational p = exact_two_sided_p(n, static_cast<std::int64_t>(result.w_plus));
    result.p_exact = p;
    result.p_two_sided = p.to_double();
    return result;
  }

  result.method = WilcoxonMethod::NormalApprox;
  NormalApprox approx = normal_approx(n, result.w_plus, tie_term);
  result.statistic_z = approx.z;
  result.p_two_sided = approx.p_two_sided;
  return result;
}

}  // namespace

NormalApprox normal_approx(std::size_t n, double w_plus, double tie_term) {
  if (n == 0) return {};
  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1) / 4.0;
  const double variance = nd * (nd + 1) * (2 * nd + 1) / 24.0 - tie_term / 48.0;
  const double deviation = w_plus - mean;
  const double corrected = std::max(0.0, std::fabs(deviation) - kContinuityCorrection);
  NormalApprox out;
  out.z = std::copysign(corrected / std::sqrt(variance), deviation);
  out.p_two_sided = std::min(1.0, std::erfc(std::fabs(out.z) / std::sqrt(2.0)));
  return out;
}

std::vector<std::uint64_t> signed_rank_distribution(std::size_t n) {
  if (n > 62) throw std::invalid_argument("exact signed-rank distribution limited to n <= 62");
  const std::size_t max_sum = n * (n + 1) / 2;
  std::vector<std::uint64_t> counts(max_sum + 1, 0);
  counts[0] = 1;
  for (std::size_t rank = 1; rank <= n; ++rank) {
    for (std::size_t s = rank * (rank + 1) / 2; s >= rank; --s) counts[s] += counts[s - rank];
  }
  return counts;
}

Rational exact_two_sided_p(std::size_t n, std::int64_t w_plus) {
  const auto counts = signed_rank_distribution(n);
  const auto max_sum = static_cast<std::int64_t>(counts.size()) - 1;
  if (w_plus < 0 || w_plus > max_sum) throw std::invalid_argument("W+ outside [0, n(n+1)/2]");
  std::uint64_t at_most = 0;
  std::uint64_t at_least = 0;
  for (std::int64_t s = 0; s <= max_sum; ++s) {
    if (s <= w_plus) at_most += counts[static_cast<std::size_t>(s)];
    if (s >= w_plus) at_least += counts[static_cast<std::size_t>(s)];
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t tail = std::min(at_most, at_least);
  if (2 * tail >= total) return Rational(1);
  return Rational(static_cast<std::int64_t>(2 * tail), static_cast<std::int64_t>(total));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> values, double mu0) {
  if (values.empty()) throw std::invalid_argument("signed-rank test needs at least one value");
  std::vector<double> differences;
  differences.reserve(values.size());
  for (double v : values) differences.push_back(v - mu0);
  return signed_rank(differences);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const Rational> values, const Rational& mu0) {
  if (values.empty()) throw std::invalid_argument("signed-rank test needs at least one value");
  std::vector<Rational> differences;
  differences.reserve(values.size());
  for (const Rational& v : values) differences.push_back(v - mu0);
  return signed_rank(differences);
}

WilcoxonResult test_percentiles_vs_median(std::span<const QuantileResult> results,
                                          CountingRule rule) {
  std::vector<Rational> values;
  values.reserve(results.size());
  for (const QuantileResult& r : results) values.push_back(r.percentile(rule));
  return wilcoxon_signed_rank(values, Rational(50));
}

WilcoxonResult test_scores_vs_baseline(std::span<const Rational> scores, const ClassScheme& scheme) {
  return wilcoxon_signed_rank(scores, scheme_expected_value(scheme));
}

WilcoxonResult test_scores_vs_baseline(std::span<const double> scores, const ClassScheme& scheme) {
  return wilcoxon_signed_rank(scores, scheme_expected_value(scheme).to_double());
}

}  // namespace pctrank
