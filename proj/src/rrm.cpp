#include "pathforge/rrm.hpp"

#include "pathforge/error.hpp"
#include "pathforge/stats.hpp"

#include <algorithm>
#include <cmath>

namespace pathforge::rrm {

void validate(const Schedule& schedule)
{
    if (schedule.half_windows.empty())
        throw DomainError("running-median schedule is empty");
    for (int h : schedule.half_windows)
        if (h < 1)
            throw DomainError("running-median half-windows must be at least 1");
}

std::vector<double> running_median(std::span<const double> series, int half_window)
{
    if (series.empty())
        throw DataError("running median of an empty series");
    if (half_window < 0)
        throw DomainError("running-median half-window must be nonnegative");

    const std::size_t n = series.size();
    const auto h = static_cast<std::size_t>(half_window);
    std::vector<double> out(n);
    std::vector<double> window;
    window.reserve(2 * h + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= h ? i - h : 0;
        const std::size_t hi = std::min(n - 1, i + h);
        window.assign(series.begin() + lo, series.begin() + hi + 1);
        out[i] = stats::median_inplace(window);
    }
    return out;
}

std::vector<double> repeated_running_median(std::span<const double> series, const Schedule& schedule)
{
    validate(schedule);
    std::vector<double> current(series.begin(), series.end());
    for (int h : schedule.half_windows)
        current = running_median(current, h);
    return current;
}

std::size_t min_arrest_frames(double min_duration_s, double fps)
{
    if (!(min_duration_s >= 0.0) || !(fps > 0.0))
        throw DomainError("arrest duration must be nonnegative and fps positive");
    const double frames = std::ceil(min_duration_s * fps - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(frames));
}

ArrestMask detect_arrests(std::span<const double> x_rrm, std::span<const double> y_rrm, double fps,
                          double min_duration_s)
{
    if (x_rrm.size() != y_rrm.size())
        throw DataError("detect_arrests: axis series differ in length");
    const std::size_t n = x_rrm.size();
    const std::size_t min_frames = min_arrest_frames(min_duration_s, fps);

    ArrestMask mask;
    mask.min_duration_s = min_duration_s;
    mask.frames.assign(n, false);

    std::size_t start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        const bool same = i < n && x_rrm[i] == x_rrm[start] && y_rrm[i] == y_rrm[start];
        if (same)
            continue;
        if (i - start >= min_frames)
            std::fill(mask.frames.begin() + start, mask.frames.begin() + i, true);
        start = i;
    }
    return mask;
}

std::vector<Run> true_runs(const std::vector<bool>& mask)
{
    std::vector<Run> runs;
    const std::size_t n = mask.size();
    std::size_t i = 0;
    while (i < n) {
        if (!mask[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && mask[j + 1])
            ++j;
        runs.push_back({i, j});
        i = j + 1;
    }
    return runs;
}

} // namespace pathforge::rrm
