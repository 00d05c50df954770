#pragma once
// Combined path smoother: LOWESS kinematics overridden inside RRM arrests,
// followed by segmentation and endpoint summaries.

#include "pathforge/kinematics.hpp"
#include "pathforge/raw_path.hpp"
#include "pathforge/rrm.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace pathforge::pipeline {

enum class SegmentKind { Arrest, Lingering, Progression };

std::string_view to_string(SegmentKind kind);
/// Throws DataError for an unknown name.
SegmentKind segment_kind_from_string(std::string_view name);

struct Segment {
    std::size_t start = 0; ///< first frame
    std::size_t end = 0;   ///< last frame, inclusive
    SegmentKind kind = SegmentKind::Progression;
    double max_speed = 0.0; ///< cm/s

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Segments partition the session in frame order. `episodes` groups each
/// maximal run of adjacent arrest/lingering segments into one lingering
/// episode; progression segments carry over unchanged.
struct SegmentList {
    std::vector<Segment> segments;
    std::vector<Segment> episodes;
};

struct EndpointSummary {
    double total_distance_m = 0.0;
    double proportion_arrest = 0.0;
    double mean_speed_cm_s = 0.0;
    std::size_t arrest_segments = 0;
    std::size_t lingering_segments = 0;
    std::size_t progression_segments = 0;
    std::size_t lingering_episodes = 0;
};

/// Zeroes velocity, acceleration and speed inside every arrest run and
/// replaces positions there by the straight line between the LOWESS positions
/// at the run's first and last frames. Frames outside arrests are untouched.
kinematics::KinematicSeries combine(const kinematics::KinematicSeries& kin, const rrm::ArrestMask& mask);

/// Arrest runs become arrest segments; each maximal non-arrest run is
/// lingering when its max speed is below the threshold, else progression.
SegmentList classify_segments(const kinematics::KinematicSeries& combined, const rrm::ArrestMask& mask,
                              double lingering_speed_threshold);

/// Path length in cm of consecutive positions.
double path_length_cm(std::span<const double> x, std::span<const double> y);

EndpointSummary endpoints(const kinematics::KinematicSeries& combined, const SegmentList& segments);

struct Options {
    kinematics::SmoothingOptions lowess;
    double outlier_factor = 6.0;
    double outlier_min_residual_cm = 0.0; ///< residuals at or below this are never flagged
    rrm::Schedule schedule;
    double min_arrest_s = 0.2;
    double lingering_speed_cm_s = 5.0;
};

/// Every intermediate of the combined smoother for one session.
struct SessionResult {
    kinematics::KinematicSeries lowess;
    std::vector<double> rrm_x, rrm_y;
    rrm::ArrestMask mask;
    kinematics::KinematicSeries combined;
    SegmentList segments;
    EndpointSummary summary;
};

SessionResult run_session(const RawPath& path, const Options& options = {});

/// Locations of progression frames only, from the combined series.
void progression_points(const kinematics::KinematicSeries& combined, const SegmentList& segments,
                        std::vector<double>& xs, std::vector<double>& ys);

} // namespace pathforge::pipeline
