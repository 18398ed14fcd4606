#pragma once

#include <span>
#include <vector>

namespace cmcs {

double mean_of(std::span<const double> values);
double sample_stdev(std::span<const double> values);  // 0 for fewer than two values

/// Conventional median: midpoint of the two central order statistics for
/// even counts.
double median_of(std::vector<double> values);

/// Nearest-rank quantile: value at rank ceil(q*n) (1-based), clamped to
/// [1, n]. q = 0 gives the minimum, q = 1 the maximum.
double nearest_rank_quantile(const std::vector<double>& sorted_values, double q);

/// Average ranks (ties share their mean rank), 1-based.
std::vector<double> fractional_ranks(std::span<const double> values);

/// Spearman rank correlation; returns 0 when either side has zero rank
/// variance (constant input).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace cmcs
