#pragma once
// Arena wall estimation from behavioral locations: per-sector high quantiles
// of radius, a periodic linear LOWESS over angle, and an OLS center fit on the
// resulting curve.

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace pathforge::arena {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PolarSample {
    double r = 0.0;     ///< cm
    double theta = 0.0; ///< radians in [0, 2pi)
};

/// Polar coordinates of (x, y) about (origin_x, origin_y).
PolarSample to_polar(double x, double y, double origin_x = 0.0, double origin_y = 0.0);

/// Wraps an angle into [0, 2pi).
double wrap_angle(double theta);

struct SectorOptions {
    std::size_t sectors = 720;
    double width = kTwoPi / 360.0; ///< radians; sectors overlap when width > 2pi/sectors
    double quantile = 0.95;
    std::size_t min_count = 10;
};

/// Per-sector radius quantiles. Sectors with fewer than min_count samples are
/// empty and carry NaN.
struct SectorQuantiles {
    std::vector<double> alphas; ///< sector mid-angles s * 2pi / S
    std::vector<double> r_p;
    std::vector<std::size_t> counts;
    double delta = 0.0;
    double p = 0.0;
    std::size_t min_count = 0;

    std::size_t size() const { return alphas.size(); }
    bool empty_sector(std::size_t s) const { return counts[s] < min_count; }
};

/// Throws DomainError for invalid options and DataError when every sector is empty.
SectorQuantiles sector_quantiles(std::span<const PolarSample> samples, const SectorOptions& options = {});

/// Angular interval [start, end] in radians; end < start means the arc wraps through 0.
struct Arc {
    double start = 0.0;
    double end = 0.0;
};

/// Radius as a function of angle sampled on the sector grid; linear
/// interpolation between grid points, periodic in 2pi.
struct BoundaryCurve {
    std::vector<double> alphas;
    std::vector<double> radius;
    std::vector<bool> covered; ///< grid point's own sector had data

    double at(double theta) const;
    /// Covered state of the grid interval containing theta (both ends must be covered).
    bool covers(double theta) const;
    std::vector<Arc> uncovered_arcs() const;
};

/// Degree-1 LOWESS of sector quantiles on angle over a wrap-expanded series.
/// `bandwidth` is the fraction of the full circle spanned by the tricube window.
/// Grid points without any data in their window are filled by periodic linear
/// interpolation. Throws DataError with fewer than two nonempty sectors.
BoundaryCurve smooth_boundary(const SectorQuantiles& sq, double bandwidth = 0.15);

struct CenterEstimate {
    double R0 = 0.0;    ///< mean radius, cm
    double beta1 = 0.0; ///< cosine coefficient, cm
    double beta2 = 0.0; ///< sine coefficient, cm
    double r0 = 0.0;    ///< offset magnitude, cm
    double phi0 = 0.0;  ///< offset angle, radians (0 when r0 == 0)
    double x0 = 0.0;    ///< offset, cm
    double y0 = 0.0;
    double condition = 0.0; ///< condition number of the normal matrix
};

/// OLS fit of R = R0 + beta1 cos(theta) + beta2 sin(theta); the offset angle
/// uses atan2 so every direction is representable.
/// Throws DataError for fewer than three samples, samples leaving an angular
/// gap of pi or more, or an ill-conditioned design.
CenterEstimate estimate_center(std::span<const PolarSample> boundary);

struct BoundaryOptions {
    SectorOptions sectors;
    double bandwidth = 0.15;
    double origin_x = 0.0; ///< working origin, cm
    double origin_y = 0.0;
};

struct BoundaryEstimate {
    BoundaryCurve curve;        ///< radius about (center_x, center_y)
    double center_x = 0.0;      ///< cm, original coordinates
    double center_y = 0.0;
    CenterEstimate center;      ///< fit relative to the working origin
    std::vector<Arc> uncovered; ///< arcs without behavioral data
    std::vector<std::string> warnings;
};

/// Two passes: estimate curve and center about the working origin, recenter,
/// and estimate the curve again about the estimated center.
BoundaryEstimate estimate_boundary(std::span<const double> xs, std::span<const double> ys,
                                   const BoundaryOptions& options = {});

/// Radial distance R(theta) - r of a location from the wall, in the boundary's
/// centered polar coordinates. Negative outside the wall. Throws DataError
/// when the angle falls in an uncovered arc.
double distance_from_wall(double x, double y, const BoundaryEstimate& boundary);

std::string describe(const Arc& arc);

} // namespace pathforge::arena
