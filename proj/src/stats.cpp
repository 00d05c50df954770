#include "pathforge/stats.hpp"

#include "pathforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pathforge::stats {

double median_inplace(std::span<double> scratch)
{
    if (scratch.empty())
        throw DomainError("median of an empty range");
    const std::size_t n = scratch.size();
    const std::size_t mid = n / 2;
    std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
    const double upper = scratch[mid];
    if (n % 2 == 1)
        return upper;
    const double lower = *std::max_element(scratch.begin(), scratch.begin() + mid);
    return 0.5 * (lower + upper);
}

double median(std::span<const double> v)
{
    std::vector<double> copy(v.begin(), v.end());
    return median_inplace(copy);
}

double quantile_inplace(std::span<double> scratch, double p)
{
    if (scratch.empty())
        throw DomainError("quantile of an empty range");
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("quantile level must lie in [0, 1]");
    const std::size_t n = scratch.size();
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    std::nth_element(scratch.begin(), scratch.begin() + lo, scratch.end());
    const double x_lo = scratch[lo];
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= n || frac == 0.0)
        return x_lo;
    const double x_hi = *std::min_element(scratch.begin() + lo + 1, scratch.end());
    return x_lo + frac * (x_hi - x_lo);
}

double mean(std::span<const double> v)
{
    if (v.empty())
        return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v)
{
    if (v.size() < 2)
        return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double e : v)
        ss += (e - m) * (e - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace pathforge::stats
