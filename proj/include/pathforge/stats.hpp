#pragma once

#include <span>
#include <vector>

namespace pathforge::stats {

/// Median; even counts average the two central order statistics.
/// The input is copied, v must be nonempty.
double median(std::span<const double> v);

/// In-place variant that reorders `scratch`.
double median_inplace(std::span<double> scratch);

/// Empirical p-quantile with linear interpolation between order statistics
/// (h = (n-1)p). Reorders `scratch`. Requires 0 <= p <= 1 and nonempty input.
double quantile_inplace(std::span<double> scratch, double p);

double mean(std::span<const double> v);

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> v);

} // namespace pathforge::stats
