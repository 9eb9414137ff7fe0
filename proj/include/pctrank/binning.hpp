#pragma once

// Class schemes over percentile space and attribution of documents to them.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "pctrank/model.hpp"

namespace pctrank {

// bottom-50% [0,50)=1, top-50% [50,75)=2, top-25% [75,90)=3,
// top-10% [90,95)=4, top-5% [95,99)=5, top-1% [99,100]=6.
ClassScheme pr6_scheme();

// Q1 [0,25)=1 .. Q4 [75,100]=4.
ClassScheme quartile_scheme();

// Spreads the interval over the classes in proportion to overlap; the score
// is the overlap-weighted mean class value.
ClassAttribution fractional_attribution(const UncertaintyInterval& interval,
                                        const ClassScheme& scheme);

// Class containing p. Throws std::out_of_range outside [0,100].
const ClassDef& point_attribution(const Rational& p, const ClassScheme& scheme);

// Expected class value of a uniformly random percentile: sum value * width / 100.
Rational scheme_expected_value(const ClassScheme& scheme);

// Class for score rounded half away from zero. When values skip integers the
// nearest class value wins, ties going to the higher class. Throws
// std::out_of_range for scores outside [min value, max value].
const ClassDef& rounded_class(const Rational& score, const ClassScheme& scheme);
std::size_t rounded_class_index(const Rational& score, const ClassScheme& scheme);

// Parses the `label,lower,upper,value` format. Blank lines and lines starting
// with '#' are skipped. Throws SchemeError carrying the offending line.
ClassScheme load_scheme(std::string_view definition, std::string name = "custom");
ClassScheme load_scheme_file(const std::filesystem::path& path);

// Inverse of load_scheme.
std::string format_scheme(const ClassScheme& scheme);

// Sum of the selected percentile over all results.
Rational aggregate_quantile_sum(std::span<const QuantileResult> results, CountingRule rule);

}  // namespace pctrank
