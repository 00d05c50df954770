#pragma once
// Local quadratic LOWESS for tracking data: per-frame position, velocity and
// acceleration per axis, plus windowed residual outlier flags.

#include "pathforge/raw_path.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pathforge::kinematics {

/// (1 - u^3)^3 for u < 1, 0 otherwise. Throws DomainError for negative or NaN u.
double tricube_weight(double u);

/// Bisquare robustness weight (1 - u^2)^2 for |u| < 1, 0 otherwise.
double bisquare_weight(double u);

/// Coefficients of value(t) ~ a + b t + c t^2 around a window center.
struct LocalFit {
    double a = 0.0; ///< position, cm
    double b = 0.0; ///< velocity, cm/s
    double c = 0.0; ///< half the acceleration, cm/s^2
    std::size_t frame = 0;
    int degree = 2; ///< degree actually fitted (edge windows and degenerate weights drop it)

    double position() const { return a; }
    double velocity() const { return b; }
    double acceleration() const { return 2.0 * c; }
};

struct Sample {
    double t;     ///< seconds relative to the window center
    double value; ///< cm
};

/// Weighted least-squares quadratic through `samples`.
/// Throws DomainError for negative weights or mismatched sizes and
/// SingularFitError when fewer than three distinct abscissae carry weight.
LocalFit fit_window(std::span<const Sample> samples, std::span<const double> weights);

struct SmoothingOptions {
    int half_window = 10;     ///< frames on each side of the center
    int robustness_iters = 2; ///< bisquare reweighting passes after the initial fit
};

/// LOWESS fit at every frame of an equally spaced series.
///
/// Interior frames use the full 2h+1 window with tricube weights on |k|/(h+1).
/// Edge frames shrink the window to the available samples and fit a line when
/// fewer than five remain. Robustness passes reweight every sample by the
/// bisquare of its residual over 6 x the median absolute residual.
/// Throws DataError when series.size() <= 2h and DomainError when h < 2.
std::vector<LocalFit> smooth_axis(std::span<const double> series, double fps,
                                  const SmoothingOptions& options = {});

/// Flags frame i when |series[i] - fits[i].a| exceeds `factor` times the median
/// absolute residual inside frame i's (edge-truncated) window and also exceeds
/// `min_residual` (cm). With the default floor of 0 a zero window median flags
/// every nonzero residual.
std::vector<bool> detect_outliers(std::span<const double> series, std::span<const LocalFit> fits,
                                  int half_window, double factor = 6.0, double min_residual = 0.0);

/// Per-frame smoothed kinematics of a session.
struct KinematicSeries {
    std::vector<double> x, y;   ///< cm
    std::vector<double> vx, vy; ///< cm/s
    std::vector<double> ax, ay; ///< cm/s^2
    std::vector<double> speed;  ///< cm/s
    std::vector<bool> outlier_x, outlier_y;
    std::vector<bool> arrest; ///< all false until combined with an arrest mask

    std::size_t size() const { return x.size(); }
};

/// LOWESS on both axes of a session plus outlier flags.
KinematicSeries smooth_path(const RawPath& path, const SmoothingOptions& options = {},
                            double outlier_factor = 6.0, double outlier_min_residual = 0.0);

} // namespace pathforge::kinematics
