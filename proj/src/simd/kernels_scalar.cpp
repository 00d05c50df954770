#include "pathforge/simd.hpp"

#include <cassert>
#include <cmath>

namespace pathforge::simd::scalar {

Moments weighted_moments(std::span<const double> t, std::span<const double> kernel,
                         std::span<const double> robust, std::span<const double> y)
{
    assert(t.size() == kernel.size() && t.size() == robust.size() && t.size() == y.size());
    Moments m;
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double w = kernel[j] * robust[j];
        const double t1 = t[j];
        const double wt1 = w * t1;
        const double wt2 = wt1 * t1;
        m.w[0] += w;
        m.w[1] += wt1;
        m.w[2] += wt2;
        m.w[3] += wt2 * t1;
        m.w[4] += wt2 * t1 * t1;
        m.wy[0] += w * y[j];
        m.wy[1] += wt1 * y[j];
        m.wy[2] += wt2 * y[j];
    }
    return m;
}

double path_length(std::span<const double> x, std::span<const double> y)
{
    assert(x.size() == y.size());
    double total = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double dx = x[i] - x[i - 1];
        const double dy = y[i] - y[i - 1];
        total += std::sqrt(dx * dx + dy * dy);
    }
    return total;
}

double max_value(std::span<const double> v)
{
    assert(!v.empty());
    double best = v[0];
    for (double e : v)
        best = e > best ? e : best;
    return best;
}

} // namespace pathforge::simd::scalar
