// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "pathforge/simd.hpp"

#include <immintrin.h>

#include <cassert>
#include <cmath>

namespace pathforge::simd::avx2 {

namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

Moments weighted_moments(std::span<const double> t, std::span<const double> kernel,
                         std::span<const double> robust, std::span<const double> y)
{
    assert(t.size() == kernel.size() && t.size() == robust.size() && t.size() == y.size());
    const std::size_t n = t.size();
    __m256d m0 = _mm256_setzero_pd(), m1 = m0, m2 = m0, m3 = m0, m4 = m0;
    __m256d b0 = m0, b1 = m0, b2 = m0;

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d tv = _mm256_loadu_pd(t.data() + j);
        const __m256d yv = _mm256_loadu_pd(y.data() + j);
        const __m256d w = _mm256_mul_pd(_mm256_loadu_pd(kernel.data() + j),
                                        _mm256_loadu_pd(robust.data() + j));
        const __m256d wt1 = _mm256_mul_pd(w, tv);
        const __m256d wt2 = _mm256_mul_pd(wt1, tv);
        const __m256d wt3 = _mm256_mul_pd(wt2, tv);
        m0 = _mm256_add_pd(m0, w);
        m1 = _mm256_add_pd(m1, wt1);
        m2 = _mm256_add_pd(m2, wt2);
        m3 = _mm256_add_pd(m3, wt3);
        m4 = _mm256_fmadd_pd(wt3, tv, m4);
        b0 = _mm256_fmadd_pd(w, yv, b0);
        b1 = _mm256_fmadd_pd(wt1, yv, b1);
        b2 = _mm256_fmadd_pd(wt2, yv, b2);
    }

    Moments m;
    m.w[0] = hsum(m0);
    m.w[1] = hsum(m1);
    m.w[2] = hsum(m2);
    m.w[3] = hsum(m3);
    m.w[4] = hsum(m4);
    m.wy[0] = hsum(b0);
    m.wy[1] = hsum(b1);
    m.wy[2] = hsum(b2);

    for (; j < n; ++j) {
        const double w = kernel[j] * robust[j];
        const double wt1 = w * t[j];
        const double wt2 = wt1 * t[j];
        m.w[0] += w;
        m.w[1] += wt1;
        m.w[2] += wt2;
        m.w[3] += wt2 * t[j];
        m.w[4] += wt2 * t[j] * t[j];
        m.wy[0] += w * y[j];
        m.wy[1] += wt1 * y[j];
        m.wy[2] += wt2 * y[j];
    }
    return m;
}

double path_length(std::span<const double> x, std::span<const double> y)
{
    assert(x.size() == y.size());
    const std::size_t n = x.size();
    if (n < 2)
        return 0.0;

    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 1;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(x.data() + i - 1));
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), _mm256_loadu_pd(y.data() + i - 1));
        const __m256d sq = _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx));
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double dx = x[i] - x[i - 1];
        const double dy = y[i] - y[i - 1];
        total += std::sqrt(dx * dx + dy * dy);
    }
    return total;
}

double max_value(std::span<const double> v)
{
    assert(!v.empty());
    const std::size_t n = v.size();
    std::size_t i = 0;
    double best = v[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(v.data());
        for (i = 4; i + 4 <= n; i += 4)
            acc = _mm256_max_pd(acc, _mm256_loadu_pd(v.data() + i));
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, acc);
        best = lanes[0];
        for (double e : lanes)
            best = e > best ? e : best;
    }
    for (; i < n; ++i)
        best = v[i] > best ? v[i] : best;
    return best;
}

} // namespace pathforge::simd::avx2
