#pragma once
// Repeated running median on raw locations and arrest declaration.

#include <span>
#include <vector>

namespace pathforge::rrm {

/// Half-window sizes applied in order, one running-median pass each.
struct Schedule {
    std::vector<int> half_windows{3, 2, 1, 1};
};

/// Throws DomainError for an empty schedule or a half-window below 1.
void validate(const Schedule& schedule);

/// Running median with windows truncated at the series ends.
/// Even-sized windows average the two central order statistics.
std::vector<double> running_median(std::span<const double> series, int half_window);

/// Sequential running-median passes, each consuming the previous output.
std::vector<double> repeated_running_median(std::span<const double> series, const Schedule& schedule = {});

/// Frames belonging to arrests.
struct ArrestMask {
    std::vector<bool> frames;
    double min_duration_s = 0.2;

    std::size_t size() const { return frames.size(); }
    bool operator[](std::size_t i) const { return frames[i]; }
};

/// ceil(min_duration_s * fps), guarded against representation error.
std::size_t min_arrest_frames(double min_duration_s, double fps);

/// Marks maximal runs where both smoothed axes stay exactly equal for at
/// least min_arrest_frames(min_duration_s, fps) frames.
ArrestMask detect_arrests(std::span<const double> x_rrm, std::span<const double> y_rrm, double fps,
                          double min_duration_s = 0.2);

/// Inclusive frame interval.
struct Run {
    std::size_t start;
    std::size_t end;

    std::size_t length() const { return end - start + 1; }
    friend bool operator==(const Run&, const Run&) = default;
};

/// Maximal runs of true values.
std::vector<Run> true_runs(const std::vector<bool>& mask);

} // namespace pathforge::rrm
