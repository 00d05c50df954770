#include "pathforge/kinematics.hpp"

#include "pathforge/error.hpp"
#include "pathforge/simd.hpp"
#include "pathforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace pathforge::kinematics {

double tricube_weight(double u)
{
    if (!(u >= 0.0))
        throw DomainError("tricube weight requires a nonnegative distance");
    if (u >= 1.0)
        return 0.0;
    const double v = 1.0 - u * u * u;
    return v * v * v;
}

double bisquare_weight(double u)
{
    const double a = std::abs(u);
    if (!(a < 1.0))
        return 0.0;
    const double v = 1.0 - a * a;
    return v * v;
}

namespace {

// Solves the weighted normal equations of a polynomial of `degree` from its
// moments. Returns false when a pivot vanishes relative to the weight mass.
bool solve_normal(const simd::Moments& m, int degree, double coef[3])
{
    coef[0] = coef[1] = coef[2] = 0.0;
    const double mass = m.w[0];
    if (!(mass > 0.0))
        return false;
    const double tol = 1e-12 * mass;

    if (degree == 0) {
        coef[0] = m.wy[0] / mass;
        return true;
    }
    if (degree == 1) {
        const double det = m.w[0] * m.w[2] - m.w[1] * m.w[1];
        if (!(std::abs(det) > 1e-12 * m.w[0] * m.w[2]))
            return false;
        coef[0] = (m.wy[0] * m.w[2] - m.w[1] * m.wy[1]) / det;
        coef[1] = (m.w[0] * m.wy[1] - m.w[1] * m.wy[0]) / det;
        return true;
    }

    // 3x3 Gaussian elimination with partial pivoting.
    double a[3][4] = {
        {m.w[0], m.w[1], m.w[2], m.wy[0]},
        {m.w[1], m.w[2], m.w[3], m.wy[1]},
        {m.w[2], m.w[3], m.w[4], m.wy[2]},
    };
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col]))
                pivot = r;
        if (!(std::abs(a[pivot][col]) > tol))
            return false;
        if (pivot != col)
            for (int c = 0; c < 4; ++c)
                std::swap(a[col][c], a[pivot][c]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c)
                a[r][c] -= f * a[col][c];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = a[r][3];
        for (int c = r + 1; c < 3; ++c)
            s -= a[r][c] * coef[c];
        coef[r] = s / a[r][r];
    }
    return std::isfinite(coef[0]) && std::isfinite(coef[1]) && std::isfinite(coef[2]);
}

// Offsets, tricube kernel and unit weights for a window of half-width h.
struct WindowTables {
    std::vector<double> offset; // k / (h + 1), k = -h..h
    std::vector<double> kernel;
    std::vector<double> ones;

    explicit WindowTables(int h)
    {
        const double scale = static_cast<double>(h + 1);
        for (int k = -h; k <= h; ++k) {
            offset.push_back(static_cast<double>(k) / scale);
            kernel.push_back(tricube_weight(std::abs(static_cast<double>(k)) / scale));
            ones.push_back(1.0);
        }
    }
};

} // namespace

LocalFit fit_window(std::span<const Sample> samples, std::span<const double> weights)
{
    if (samples.size() != weights.size())
        throw DomainError("fit_window: samples and weights differ in length");
    if (samples.size() < 3)
        throw SingularFitError("fit_window: fewer than three samples");

    double scale = 0.0;
    std::set<double> distinct;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        if (!(weights[j] >= 0.0))
            throw DomainError("fit_window: weights must be nonnegative");
        if (weights[j] > 0.0)
            distinct.insert(samples[j].t);
        scale = std::max(scale, std::abs(samples[j].t));
    }
    if (distinct.size() < 3)
        throw SingularFitError("fit_window: fewer than three distinct abscissae with positive weight");

    std::vector<double> u(samples.size()), v(samples.size()), ones(samples.size(), 1.0);
    for (std::size_t j = 0; j < samples.size(); ++j) {
        u[j] = samples[j].t / scale;
        v[j] = samples[j].value;
    }
    const simd::Moments m = simd::weighted_moments(u, weights, ones, v);
    double coef[3];
    if (!solve_normal(m, 2, coef))
        throw SingularFitError("fit_window: normal equations are numerically singular");

    LocalFit fit;
    fit.a = coef[0];
    fit.b = coef[1] / scale;
    fit.c = coef[2] / (scale * scale);
    return fit;
}

std::vector<LocalFit> smooth_axis(std::span<const double> series, double fps, const SmoothingOptions& options)
{
    const int h = options.half_window;
    if (h < 2)
        throw DomainError("LOWESS half-window must be at least 2 frames");
    if (options.robustness_iters < 0)
        throw DomainError("robustness iterations must be nonnegative");
    if (!(fps > 0.0))
        throw DomainError("fps must be positive");
    const std::size_t n = series.size();
    const std::size_t min_len = 2 * static_cast<std::size_t>(h) + 1;
    if (n < min_len)
        throw DataError("series of length " + std::to_string(n) + " is too short for half-window " +
                        std::to_string(h) + "; need at least " + std::to_string(min_len) + " frames");

    const WindowTables tables(h);
    const double unit = fps / static_cast<double>(h + 1); // d(offset)/dt
    std::vector<double> robust(n, 1.0);
    std::vector<LocalFit> fits(n);
    std::vector<double> abs_resid(n);
    std::vector<double> centered(min_len);
    double magnitude = 1.0;
    for (double v : series)
        magnitude = std::max(magnitude, std::abs(v));
    const double tol = 1e-9 * magnitude;

    for (int pass = 0; pass <= options.robustness_iters; ++pass) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = i >= static_cast<std::size_t>(h) ? i - h : 0;
            const std::size_t hi = std::min(n - 1, i + h);
            const std::size_t len = hi - lo + 1;
            const std::size_t first = lo + h - i; // index into the window tables

            const std::span<const double> t(tables.offset.data() + first, len);
            const std::span<const double> kernel(tables.kernel.data() + first, len);
            const std::span<const double> rob(robust.data() + lo, len);
            // Fit deviations from the center value so flat stretches come out exact.
            const double ref = series[i];
            for (std::size_t j = 0; j < len; ++j)
                centered[j] = series[lo + j] - ref;
            const std::span<const double> y(centered.data(), len);

            int degree = len >= 5 ? 2 : 1;
            int positive = 0;
            for (std::size_t j = 0; j < len; ++j)
                positive += kernel[j] * rob[j] > 0.0 ? 1 : 0;

            double coef[3];
            bool ok = false;
            if (positive > 0) {
                const simd::Moments m = simd::weighted_moments(t, kernel, rob, y);
                for (int d = std::min(degree, positive - 1); d >= 0 && !ok; --d) {
                    ok = solve_normal(m, d, coef);
                    if (ok)
                        degree = d;
                }
            }
            if (!ok) {
                // No robust weight mass left in the window: refit with the kernel alone.
                const std::span<const double> ones(tables.ones.data(), len);
                const simd::Moments m = simd::weighted_moments(t, kernel, ones, y);
                for (; degree >= 0 && !ok; --degree)
                    ok = solve_normal(m, degree, coef);
                ++degree;
            }

            LocalFit& fit = fits[i];
            fit.frame = i;
            fit.degree = degree;
            fit.a = ref + coef[0];
            fit.b = coef[1] * unit;
            fit.c = coef[2] * unit * unit;
        }

        if (pass == options.robustness_iters)
            break;
        for (std::size_t i = 0; i < n; ++i)
            abs_resid[i] = std::abs(series[i] - fits[i].a);
        std::vector<double> scratch = abs_resid;
        const double s = stats::median_inplace(scratch);
        // A vanishing scale is the limit of the bisquare: fits exact up to
        // rounding keep full weight and every other sample is dropped.
        if (s > tol) {
            for (std::size_t i = 0; i < n; ++i)
                robust[i] = bisquare_weight((series[i] - fits[i].a) / (6.0 * s));
        } else {
            for (std::size_t i = 0; i < n; ++i)
                robust[i] = abs_resid[i] <= tol ? 1.0 : 0.0;
        }
    }
    return fits;
}

std::vector<bool> detect_outliers(std::span<const double> series, std::span<const LocalFit> fits,
                                  int half_window, double factor, double min_residual)
{
    if (series.size() != fits.size())
        throw DataError("detect_outliers: series and fits differ in length");
    if (half_window < 1)
        throw DomainError("detect_outliers: half-window must be positive");
    const std::size_t n = series.size();
    const auto h = static_cast<std::size_t>(half_window);

    std::vector<double> abs_resid(n);
    for (std::size_t i = 0; i < n; ++i)
        abs_resid[i] = std::abs(series[i] - fits[i].a);

    std::vector<bool> flags(n, false);
    std::vector<double> scratch;
    scratch.reserve(2 * h + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= h ? i - h : 0;
        const std::size_t hi = std::min(n - 1, i + h);
        scratch.assign(abs_resid.begin() + lo, abs_resid.begin() + hi + 1);
        const double med = stats::median_inplace(scratch);
        flags[i] = abs_resid[i] > factor * med && abs_resid[i] > min_residual;
    }
    return flags;
}

KinematicSeries smooth_path(const RawPath& path, const SmoothingOptions& options, double outlier_factor,
                            double outlier_min_residual)
{
    const auto fx = smooth_axis(path.x, path.fps, options);
    const auto fy = smooth_axis(path.y, path.fps, options);

    const std::size_t n = path.size();
    KinematicSeries k;
    k.x.resize(n);
    k.y.resize(n);
    k.vx.resize(n);
    k.vy.resize(n);
    k.ax.resize(n);
    k.ay.resize(n);
    k.speed.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        k.x[i] = fx[i].position();
        k.y[i] = fy[i].position();
        k.vx[i] = fx[i].velocity();
        k.vy[i] = fy[i].velocity();
        k.ax[i] = fx[i].acceleration();
        k.ay[i] = fy[i].acceleration();
        k.speed[i] = std::sqrt(k.vx[i] * k.vx[i] + k.vy[i] * k.vy[i]);
    }
    k.outlier_x = detect_outliers(path.x, fx, options.half_window, outlier_factor, outlier_min_residual);
    k.outlier_y = detect_outliers(path.y, fy, options.half_window, outlier_factor, outlier_min_residual);
    k.arrest.assign(n, false);
    return k;
}

} // namespace pathforge::kinematics
