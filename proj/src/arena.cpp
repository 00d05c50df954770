#include "pathforge/arena.hpp"

#include "pathforge/error.hpp"
#include "pathforge/kinematics.hpp"
#include "pathforge/simd.hpp"
#include "pathforge/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pathforge::arena {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double wrap_angle(double theta)
{
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    if (w >= kTwoPi)
        w = 0.0;
    return w;
}

PolarSample to_polar(double x, double y, double origin_x, double origin_y)
{
    const double dx = x - origin_x;
    const double dy = y - origin_y;
    return {std::hypot(dx, dy), wrap_angle(std::atan2(dy, dx))};
}

SectorQuantiles sector_quantiles(std::span<const PolarSample> samples, const SectorOptions& options)
{
    if (samples.empty())
        throw DataError("sector quantiles need at least one sample");
    if (options.sectors < 8)
        throw DomainError("at least 8 sectors are required");
    if (!(options.quantile > 0.0 && options.quantile <= 1.0))
        throw DomainError("sector quantile level must lie in (0, 1]");
    if (!(options.width > 0.0 && options.width < kTwoPi))
        throw DomainError("sector width must lie in (0, 2pi)");

    // Sort by angle so each sector is one or two contiguous ranges.
    std::vector<PolarSample> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(), [](const PolarSample& a, const PolarSample& b) { return a.theta < b.theta; });
    std::vector<double> thetas(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        thetas[i] = sorted[i].theta;

    const std::size_t S = options.sectors;
    SectorQuantiles sq;
    sq.delta = options.width;
    sq.p = options.quantile;
    sq.min_count = options.min_count;
    sq.alphas.resize(S);
    sq.r_p.assign(S, kNaN);
    sq.counts.assign(S, 0);

    auto append_range = [&](std::vector<double>& out, double lo, double hi) {
        const auto first = std::lower_bound(thetas.begin(), thetas.end(), lo);
        const auto last = std::upper_bound(thetas.begin(), thetas.end(), hi);
        for (auto it = first; it < last; ++it)
            out.push_back(sorted[static_cast<std::size_t>(it - thetas.begin())].r);
    };

    std::vector<double> radii;
    bool any = false;
    for (std::size_t s = 0; s < S; ++s) {
        const double alpha = kTwoPi * static_cast<double>(s) / static_cast<double>(S);
        sq.alphas[s] = alpha;
        const double lo = alpha - 0.5 * options.width;
        const double hi = alpha + 0.5 * options.width;
        radii.clear();
        if (lo < 0.0) {
            append_range(radii, lo + kTwoPi, kTwoPi);
            append_range(radii, 0.0, hi);
        } else if (hi >= kTwoPi) {
            append_range(radii, lo, kTwoPi);
            append_range(radii, 0.0, hi - kTwoPi);
        } else {
            append_range(radii, lo, hi);
        }
        sq.counts[s] = radii.size();
        if (radii.size() >= options.min_count && !radii.empty()) {
            sq.r_p[s] = stats::quantile_inplace(radii, options.quantile);
            any = true;
        }
    }
    if (!any)
        throw DataError("every sector has fewer than " + std::to_string(options.min_count) + " samples");
    return sq;
}

double BoundaryCurve::at(double theta) const
{
    const std::size_t S = alphas.size();
    const double pos = wrap_angle(theta) / kTwoPi * static_cast<double>(S);
    const auto i0 = std::min(static_cast<std::size_t>(pos), S - 1);
    const std::size_t i1 = (i0 + 1) % S;
    const double f = pos - static_cast<double>(i0);
    return radius[i0] + f * (radius[i1] - radius[i0]);
}

bool BoundaryCurve::covers(double theta) const
{
    const std::size_t S = alphas.size();
    const double pos = wrap_angle(theta) / kTwoPi * static_cast<double>(S);
    const auto i0 = std::min(static_cast<std::size_t>(pos), S - 1);
    const std::size_t i1 = (i0 + 1) % S;
    if (pos == static_cast<double>(i0))
        return covered[i0];
    return covered[i0] && covered[i1];
}

std::vector<Arc> BoundaryCurve::uncovered_arcs() const
{
    std::vector<Arc> arcs;
    const std::size_t S = covered.size();
    const auto first_covered = std::find(covered.begin(), covered.end(), true);
    if (first_covered == covered.end()) {
        arcs.push_back({0.0, kTwoPi});
        return arcs;
    }
    // Walk the circle starting at a covered grid point so wrapped gaps stay whole.
    const auto start = static_cast<std::size_t>(first_covered - covered.begin());
    std::size_t k = 0;
    while (k < S) {
        const std::size_t i = (start + k) % S;
        if (covered[i]) {
            ++k;
            continue;
        }
        std::size_t len = 0;
        while (k + len < S && !covered[(start + k + len) % S])
            ++len;
        arcs.push_back({alphas[i], alphas[(start + k + len - 1) % S]});
        k += len;
    }
    return arcs;
}

BoundaryCurve smooth_boundary(const SectorQuantiles& sq, double bandwidth)
{
    if (!(bandwidth > 0.0 && bandwidth <= 1.0))
        throw DomainError("boundary bandwidth must lie in (0, 1]");
    const std::size_t S = sq.size();

    std::vector<double> angle, value;
    for (std::size_t s = 0; s < S; ++s) {
        if (sq.empty_sector(s))
            continue;
        angle.push_back(sq.alphas[s]);
        value.push_back(sq.r_p[s]);
    }
    if (angle.size() < 2)
        throw DataError("boundary smoothing needs at least two nonempty sectors");

    // Duplicate the head after 2pi and the tail before 0.
    const double half_width = bandwidth * std::numbers::pi;
    const double expand = std::max(0.25 * kTwoPi, half_width);
    std::vector<double> ea, ev;
    for (std::size_t j = 0; j < angle.size(); ++j)
        if (angle[j] >= kTwoPi - expand) {
            ea.push_back(angle[j] - kTwoPi);
            ev.push_back(value[j]);
        }
    ea.insert(ea.end(), angle.begin(), angle.end());
    ev.insert(ev.end(), value.begin(), value.end());
    for (std::size_t j = 0; j < angle.size(); ++j)
        if (angle[j] <= expand) {
            ea.push_back(angle[j] + kTwoPi);
            ev.push_back(value[j]);
        }

    BoundaryCurve curve;
    curve.alphas = sq.alphas;
    curve.radius.assign(S, kNaN);
    curve.covered.resize(S);
    for (std::size_t s = 0; s < S; ++s)
        curve.covered[s] = !sq.empty_sector(s);

    std::vector<double> t, w, y, ones;
    std::size_t lo = 0;
    for (std::size_t g = 0; g < S; ++g) {
        const double a0 = curve.alphas[g];
        while (lo < ea.size() && ea[lo] <= a0 - half_width)
            ++lo;
        t.clear();
        w.clear();
        y.clear();
        // Deviations from a reference value keep a flat curve exactly flat.
        const double ref = lo < ea.size() ? ev[lo] : 0.0;
        for (std::size_t j = lo; j < ea.size() && ea[j] < a0 + half_width; ++j) {
            const double u = (ea[j] - a0) / half_width;
            const double wt = kinematics::tricube_weight(std::abs(u));
            if (wt <= 0.0)
                continue;
            t.push_back(u);
            w.push_back(wt);
            y.push_back(ev[j] - ref);
        }
        if (t.empty())
            continue;
        ones.assign(t.size(), 1.0);
        const simd::Moments m = simd::weighted_moments(t, w, ones, y);
        const double det = m.w[0] * m.w[2] - m.w[1] * m.w[1];
        if (t.size() >= 2 && std::abs(det) > 1e-12 * m.w[0] * m.w[2])
            curve.radius[g] = ref + (m.wy[0] * m.w[2] - m.w[1] * m.wy[1]) / det;
        else
            curve.radius[g] = ref + m.wy[0] / m.w[0];
    }

    // Fill grid points with no data in reach by periodic linear interpolation.
    std::vector<std::size_t> known;
    for (std::size_t g = 0; g < S; ++g)
        if (!std::isnan(curve.radius[g]))
            known.push_back(g);
    if (known.size() < S) {
        for (std::size_t k = 0; k < known.size(); ++k) {
            const std::size_t a = known[k];
            const std::size_t b = known[(k + 1) % known.size()];
            const std::size_t gap = (b + S - a) % S == 0 ? S : (b + S - a) % S;
            for (std::size_t step = 1; step < gap; ++step) {
                const double f = static_cast<double>(step) / static_cast<double>(gap);
                curve.radius[(a + step) % S] = curve.radius[a] + f * (curve.radius[b] - curve.radius[a]);
            }
        }
    }
    return curve;
}

CenterEstimate estimate_center(std::span<const PolarSample> boundary)
{
    if (boundary.size() < 3)
        throw DataError("center estimation needs at least three boundary samples");

    std::vector<double> angles(boundary.size());
    for (std::size_t i = 0; i < boundary.size(); ++i)
        angles[i] = wrap_angle(boundary[i].theta);
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + kTwoPi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i)
        gap = std::max(gap, angles[i] - angles[i - 1]);
    if (gap >= std::numbers::pi)
        throw DataError("boundary samples leave an angular gap of " + std::to_string(gap) +
                        " rad; center estimation needs coverage of more than half the circle");

    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (const PolarSample& s : boundary) {
        const Eigen::Vector3d row(1.0, std::cos(s.theta), std::sin(s.theta));
        normal += row * row.transpose();
        rhs += row * s.r;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    const double condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (!(condition < 1e10))
        throw DataError("center design is ill-conditioned (condition number " + std::to_string(condition) + ")");

    const Eigen::Vector3d beta = normal.ldlt().solve(rhs);
    CenterEstimate c;
    c.R0 = beta(0);
    c.beta1 = beta(1);
    c.beta2 = beta(2);
    c.r0 = std::hypot(c.beta1, c.beta2);
    c.phi0 = c.r0 > 0.0 ? std::atan2(c.beta2, c.beta1) : 0.0;
    c.x0 = c.r0 * std::cos(c.phi0);
    c.y0 = c.r0 * std::sin(c.phi0);
    c.condition = condition;
    return c;
}

namespace {

BoundaryCurve curve_about(std::span<const double> xs, std::span<const double> ys, double cx, double cy,
                          const BoundaryOptions& options)
{
    std::vector<PolarSample> polar(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        polar[i] = to_polar(xs[i], ys[i], cx, cy);
    return smooth_boundary(sector_quantiles(polar, options.sectors), options.bandwidth);
}

} // namespace

BoundaryEstimate estimate_boundary(std::span<const double> xs, std::span<const double> ys,
                                   const BoundaryOptions& options)
{
    if (xs.size() != ys.size())
        throw DataError("boundary estimation: coordinate arrays differ in length");
    if (xs.empty())
        throw DataError("boundary estimation: no progression locations");

    BoundaryEstimate est;
    est.center_x = options.origin_x;
    est.center_y = options.origin_y;
    const BoundaryCurve first = curve_about(xs, ys, options.origin_x, options.origin_y, options);

    std::vector<PolarSample> samples;
    for (std::size_t g = 0; g < first.alphas.size(); ++g)
        if (first.covered[g])
            samples.push_back({first.radius[g], first.alphas[g]});
    try {
        est.center = estimate_center(samples);
        est.center_x = options.origin_x + est.center.x0;
        est.center_y = options.origin_y + est.center.y0;
        est.curve = curve_about(xs, ys, est.center_x, est.center_y, options);
    } catch (const DataError& e) {
        est.warnings.push_back(std::string("center not estimated: ") + e.what());
        est.curve = first;
    }

    est.uncovered = est.curve.uncovered_arcs();
    for (const Arc& arc : est.uncovered)
        est.warnings.push_back("no behavioral data in arc " + describe(arc));
    return est;
}

double distance_from_wall(double x, double y, const BoundaryEstimate& boundary)
{
    const PolarSample p = to_polar(x, y, boundary.center_x, boundary.center_y);
    if (!boundary.curve.covers(p.theta)) {
        for (const Arc& arc : boundary.uncovered) {
            const bool inside = arc.start <= arc.end ? (p.theta >= arc.start - 1e-12 && p.theta <= arc.end + 1e-12)
                                                     : (p.theta >= arc.start || p.theta <= arc.end);
            if (inside)
                throw DataError("angle " + std::to_string(p.theta) + " rad lies in uncovered arc " + describe(arc));
        }
        throw DataError("angle " + std::to_string(p.theta) + " rad borders an uncovered sector");
    }
    return boundary.curve.at(p.theta) - p.r;
}

std::string describe(const Arc& arc)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%.4f, %.4f] rad", arc.start, arc.end);
    return buf;
}

} // namespace pathforge::arena
