#include "pathforge/pipeline.hpp"

#include "pathforge/error.hpp"
#include "pathforge/simd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pathforge::pipeline {

std::string_view to_string(SegmentKind kind)
{
    switch (kind) {
    case SegmentKind::Arrest:
        return "arrest";
    case SegmentKind::Lingering:
        return "lingering";
    case SegmentKind::Progression:
        break;
    }
    return "progression";
}

SegmentKind segment_kind_from_string(std::string_view name)
{
    if (name == "arrest")
        return SegmentKind::Arrest;
    if (name == "lingering")
        return SegmentKind::Lingering;
    if (name == "progression")
        return SegmentKind::Progression;
    throw DataError("unknown segment kind '" + std::string(name) + "'");
}

kinematics::KinematicSeries combine(const kinematics::KinematicSeries& kin, const rrm::ArrestMask& mask)
{
    if (kin.size() != mask.size())
        throw DataError("combine: kinematic series and arrest mask differ in length");

    kinematics::KinematicSeries out = kin;
    out.arrest = mask.frames;
    for (const rrm::Run& run : rrm::true_runs(mask.frames)) {
        const double x0 = kin.x[run.start], x1 = kin.x[run.end];
        const double y0 = kin.y[run.start], y1 = kin.y[run.end];
        const double span = static_cast<double>(run.end - run.start);
        for (std::size_t i = run.start; i <= run.end; ++i) {
            const double f = span > 0.0 ? static_cast<double>(i - run.start) / span : 0.0;
            out.x[i] = x0 + f * (x1 - x0);
            out.y[i] = y0 + f * (y1 - y0);
            out.vx[i] = out.vy[i] = 0.0;
            out.ax[i] = out.ay[i] = 0.0;
            out.speed[i] = 0.0;
        }
    }
    return out;
}

SegmentList classify_segments(const kinematics::KinematicSeries& combined, const rrm::ArrestMask& mask,
                              double lingering_speed_threshold)
{
    if (!(lingering_speed_threshold >= 0.0))
        throw DomainError("lingering speed threshold must be nonnegative");
    if (combined.size() != mask.size())
        throw DataError("classify_segments: kinematic series and arrest mask differ in length");

    SegmentList list;
    const std::size_t n = mask.size();
    std::size_t start = 0;
    while (start < n) {
        const bool arrest = mask[start];
        std::size_t end = start;
        while (end + 1 < n && mask[end + 1] == arrest)
            ++end;

        Segment seg{start, end, SegmentKind::Arrest, 0.0};
        if (!arrest) {
            seg.max_speed = *std::max_element(combined.speed.begin() + start, combined.speed.begin() + end + 1);
            seg.kind = seg.max_speed < lingering_speed_threshold ? SegmentKind::Lingering : SegmentKind::Progression;
        }
        list.segments.push_back(seg);
        start = end + 1;
    }

    for (const Segment& seg : list.segments) {
        const bool still = seg.kind != SegmentKind::Progression;
        if (still && !list.episodes.empty() && list.episodes.back().kind == SegmentKind::Lingering) {
            Segment& ep = list.episodes.back();
            ep.end = seg.end;
            ep.max_speed = std::max(ep.max_speed, seg.max_speed);
            continue;
        }
        Segment ep = seg;
        if (still)
            ep.kind = SegmentKind::Lingering;
        list.episodes.push_back(ep);
    }
    return list;
}

double path_length_cm(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw DataError("path length: axis series differ in length");
    return simd::path_length(x, y);
}

EndpointSummary endpoints(const kinematics::KinematicSeries& combined, const SegmentList& segments)
{
    EndpointSummary s;
    const std::size_t n = combined.size();
    s.total_distance_m = path_length_cm(combined.x, combined.y) / 100.0;
    if (n > 0) {
        const auto zeros = std::count(combined.speed.begin(), combined.speed.end(), 0.0);
        s.proportion_arrest = static_cast<double>(zeros) / static_cast<double>(n);
        double total = 0.0;
        for (double v : combined.speed)
            total += v;
        s.mean_speed_cm_s = total / static_cast<double>(n);
    }
    for (const Segment& seg : segments.segments) {
        switch (seg.kind) {
        case SegmentKind::Arrest:
            ++s.arrest_segments;
            break;
        case SegmentKind::Lingering:
            ++s.lingering_segments;
            break;
        case SegmentKind::Progression:
            ++s.progression_segments;
            break;
        }
    }
    s.lingering_episodes = static_cast<std::size_t>(
        std::count_if(segments.episodes.begin(), segments.episodes.end(),
                      [](const Segment& e) { return e.kind == SegmentKind::Lingering; }));
    return s;
}

SessionResult run_session(const RawPath& path, const Options& options)
{
    validate(path, 1e-6);
    SessionResult r;
    r.lowess = kinematics::smooth_path(path, options.lowess, options.outlier_factor,
                                       options.outlier_min_residual_cm);
    r.rrm_x = rrm::repeated_running_median(path.x, options.schedule);
    r.rrm_y = rrm::repeated_running_median(path.y, options.schedule);
    r.mask = rrm::detect_arrests(r.rrm_x, r.rrm_y, path.fps, options.min_arrest_s);
    r.combined = combine(r.lowess, r.mask);
    r.segments = classify_segments(r.combined, r.mask, options.lingering_speed_cm_s);
    r.summary = endpoints(r.combined, r.segments);
    return r;
}

void progression_points(const kinematics::KinematicSeries& combined, const SegmentList& segments,
                        std::vector<double>& xs, std::vector<double>& ys)
{
    xs.clear();
    ys.clear();
    for (const Segment& seg : segments.segments) {
        if (seg.kind != SegmentKind::Progression)
            continue;
        for (std::size_t i = seg.start; i <= seg.end; ++i) {
            xs.push_back(combined.x[i]);
            ys.push_back(combined.y[i]);
        }
    }
}

} // namespace pathforge::pipeline
