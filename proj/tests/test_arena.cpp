#include "pathforge/arena.hpp"
#include "pathforge/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>

using namespace pathforge;
using namespace pathforge::arena;

namespace {

using Shape = std::function<double(double)>;

// Locations crowding the wall: r = R(theta) * U^(1/(p+1)), theta uniform.
void wall_hugging(std::size_t n, const Shape& shape, double cx, double cy, std::uint64_t seed,
                  std::vector<double>& xs, std::vector<double>& ys, double power = 8.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi), u(0.0, 1.0);
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < n; ++i) {
        const double th = angle(rng);
        const double r = shape(th) * std::pow(u(rng), 1.0 / (power + 1.0));
        xs.push_back(cx + r * std::cos(th));
        ys.push_back(cy + r * std::sin(th));
    }
}

SectorQuantiles grid_quantiles(std::size_t S, const Shape& shape)
{
    SectorQuantiles sq;
    sq.delta = kTwoPi / 360.0;
    sq.p = 0.95;
    sq.min_count = 10;
    for (std::size_t s = 0; s < S; ++s) {
        const double a = kTwoPi * static_cast<double>(s) / static_cast<double>(S);
        sq.alphas.push_back(a);
        sq.r_p.push_back(shape(a));
        sq.counts.push_back(100);
    }
    return sq;
}

BoundaryEstimate constant_boundary(double R, double cx = 0.0, double cy = 0.0)
{
    BoundaryEstimate b;
    b.center_x = cx;
    b.center_y = cy;
    b.curve.alphas.resize(720);
    for (std::size_t s = 0; s < 720; ++s)
        b.curve.alphas[s] = kTwoPi * static_cast<double>(s) / 720.0;
    b.curve.radius.assign(720, R);
    b.curve.covered.assign(720, true);
    return b;
}

} // namespace

TEST(SectorQuantiles, ConstantRadius)
{
    std::vector<PolarSample> s;
    for (int i = 0; i < 72000; ++i)
        s.push_back({125.0, kTwoPi * i / 72000.0});
    const SectorQuantiles sq = sector_quantiles(s);
    ASSERT_EQ(sq.size(), 720u);
    for (std::size_t k = 0; k < sq.size(); ++k) {
        EXPECT_EQ(sq.r_p[k], 125.0);
        EXPECT_NEAR(sq.alphas[k], kTwoPi * static_cast<double>(k) / 720.0, 1e-15);
    }
}

TEST(SectorQuantiles, OneSectorOfOneToHundred)
{
    std::vector<PolarSample> s;
    for (int r = 1; r <= 100; ++r)
        s.push_back({static_cast<double>(r), 1.0});
    const SectorQuantiles sq = sector_quantiles(s);
    const auto s_idx = static_cast<std::size_t>(std::lround(1.0 / kTwoPi * 720.0));
    EXPECT_NEAR(sq.r_p[s_idx], 95.05, 1e-12);
    EXPECT_EQ(sq.counts[s_idx], 100u);
    EXPECT_TRUE(sq.empty_sector(0));
    EXPECT_TRUE(std::isnan(sq.r_p[0]));
}

TEST(SectorQuantiles, WrapAroundZero)
{
    std::vector<PolarSample> s;
    for (int i = 0; i < 20; ++i) {
        s.push_back({10.0 + i, 0.001});
        s.push_back({50.0 + i, kTwoPi - 0.001});
    }
    const SectorQuantiles sq = sector_quantiles(s);
    // Sector 0 straddles the wrap; its neighbours each see one side only.
    EXPECT_EQ(sq.counts[0], 40u);
    EXPECT_EQ(sq.counts[1], 20u);
    EXPECT_EQ(sq.counts[719], 20u);
}

TEST(SectorQuantiles, QuantileOneIsSectorMaximum)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> a(0.0, kTwoPi), r(0.0, 100.0);
    std::vector<PolarSample> s(50000);
    for (PolarSample& p : s)
        p = {r(rng), a(rng)};
    SectorOptions opt;
    opt.quantile = 1.0;
    const SectorQuantiles sq = sector_quantiles(s, opt);
    for (std::size_t k = 0; k < sq.size(); k += 37) {
        double mx = -1.0;
        for (const PolarSample& p : s) {
            double d = std::abs(p.theta - sq.alphas[k]);
            d = std::min(d, kTwoPi - d);
            if (d <= 0.5 * opt.width)
                mx = std::max(mx, p.r);
        }
        EXPECT_EQ(sq.r_p[k], mx) << k;
    }
}

TEST(SectorQuantiles, MonotoneInQuantileLevel)
{
    std::vector<double> xs, ys;
    wall_hugging(30000, [](double) { return 125.0; }, 0, 0, 4, xs, ys);
    std::vector<PolarSample> s;
    for (std::size_t i = 0; i < xs.size(); ++i)
        s.push_back(to_polar(xs[i], ys[i]));
    SectorOptions lo, hi;
    lo.quantile = 0.9;
    hi.quantile = 0.97;
    const auto a = sector_quantiles(s, lo);
    const auto b = sector_quantiles(s, hi);
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!a.empty_sector(k))
            EXPECT_LE(a.r_p[k], b.r_p[k]);
}

TEST(SectorQuantiles, Errors)
{
    EXPECT_THROW(sector_quantiles({}), DataError);
    const std::vector<PolarSample> few{{1.0, 0.5}};
    EXPECT_THROW(sector_quantiles(few), DataError);
    SectorOptions bad;
    bad.sectors = 4;
    EXPECT_THROW(sector_quantiles(few, bad), DomainError);
}

TEST(SmoothBoundary, ConstantCurve)
{
    const BoundaryCurve c = smooth_boundary(grid_quantiles(720, [](double) { return 125.0; }));
    for (double r : c.radius)
        EXPECT_NEAR(r, 125.0, 1e-9);
}

TEST(SmoothBoundary, SinusoidWithinTwoTenths)
{
    const Shape shape = [](double a) { return 125.0 + 3.0 * std::sin(2.0 * a); };
    const BoundaryCurve c = smooth_boundary(grid_quantiles(720, shape));
    for (std::size_t g = 0; g < c.alphas.size(); ++g)
        EXPECT_LE(std::abs(c.radius[g] - shape(c.alphas[g])), 0.2) << g;
}

TEST(SmoothBoundary, Periodic)
{
    const Shape shape = [](double a) { return 125.0 + 3.0 * std::sin(2.0 * a) + std::cos(a); };
    const BoundaryCurve c = smooth_boundary(grid_quantiles(720, shape));
    EXPECT_NEAR(c.at(0.0), c.at(kTwoPi), 1e-6);
    EXPECT_NEAR(c.at(1e-9), c.at(kTwoPi - 1e-9), 1e-6);
}

TEST(SmoothBoundary, EmptySectorsFilled)
{
    SectorQuantiles sq = grid_quantiles(720, [](double) { return 100.0; });
    for (std::size_t s = 100; s < 300; ++s) {
        sq.counts[s] = 0;
        sq.r_p[s] = std::nan("");
    }
    const BoundaryCurve c = smooth_boundary(sq);
    for (std::size_t s = 0; s < 720; ++s) {
        EXPECT_NEAR(c.radius[s], 100.0, 1e-9);
        EXPECT_EQ(c.covered[s], s < 100 || s >= 300);
    }
    const auto arcs = c.uncovered_arcs();
    ASSERT_EQ(arcs.size(), 1u);
    EXPECT_NEAR(arcs[0].start, c.alphas[100], 1e-12);
    EXPECT_NEAR(arcs[0].end, c.alphas[299], 1e-12);
}

TEST(SmoothBoundary, TooFewSectors)
{
    SectorQuantiles sq = grid_quantiles(720, [](double) { return 100.0; });
    for (std::size_t s = 1; s < 720; ++s)
        sq.counts[s] = 0;
    EXPECT_THROW(smooth_boundary(sq), DataError);
}

TEST(EstimateCenter, CenteredCircle)
{
    std::vector<PolarSample> s;
    for (int i = 0; i < 720; ++i)
        s.push_back({125.0, kTwoPi * i / 720.0});
    const CenterEstimate c = estimate_center(s);
    EXPECT_LE(c.r0, 1e-9);
    EXPECT_NEAR(c.R0, 125.0, 1e-9);
    EXPECT_EQ(c.phi0 == 0.0 || c.r0 > 0.0, true);
}

TEST(EstimateCenter, ExactGeometryOffsetCircle)
{
    // Distance from the origin to the circle of radius 125 centered at (3, 4) along theta.
    std::vector<PolarSample> s;
    for (int i = 0; i < 720; ++i) {
        const double th = kTwoPi * i / 720.0;
        const double proj = 3.0 * std::cos(th) + 4.0 * std::sin(th);
        const double r = proj + std::sqrt(proj * proj - (25.0 - 125.0 * 125.0));
        s.push_back({r, th});
    }
    const CenterEstimate c = estimate_center(s);
    EXPECT_LE(std::hypot(c.x0 - 3.0, c.y0 - 4.0), 0.25);
    EXPECT_NEAR(c.r0, std::hypot(c.beta1, c.beta2), 1e-12);
    EXPECT_NEAR(c.x0, c.r0 * std::cos(c.phi0), 1e-12);
    EXPECT_NEAR(c.y0, c.r0 * std::sin(c.phi0), 1e-12);
}

TEST(EstimateCenter, NegativeSineDirectionKeepsSign)
{
    std::vector<PolarSample> s;
    for (int i = 0; i < 720; ++i) {
        const double th = kTwoPi * i / 720.0;
        const double proj = -5.0 * std::sin(th);
        s.push_back({proj + std::sqrt(proj * proj - (25.0 - 125.0 * 125.0)), th});
    }
    const CenterEstimate c = estimate_center(s);
    EXPECT_NEAR(c.phi0, -std::numbers::pi / 2.0, 1e-3);
    EXPECT_NEAR(c.y0, -5.0, 0.25);
}

TEST(EstimateCenter, HalfCircleCoverageRejected)
{
    std::vector<PolarSample> s;
    for (int i = 0; i < 100; ++i)
        s.push_back({125.0, 0.1 + 3.0 * i / 100.0});
    EXPECT_THROW(estimate_center(s), DataError);
    EXPECT_THROW(estimate_center(std::vector<PolarSample>{{1, 0}, {1, 2}}), DataError);
}

TEST(EstimateBoundary, PerfectCircleDispersion)
{
    std::vector<double> xs, ys;
    wall_hugging(40000, [](double) { return 125.0; }, 0.0, 0.0, 1, xs, ys);
    const BoundaryEstimate b = estimate_boundary(xs, ys);
    const auto [lo, hi] = std::minmax_element(b.curve.radius.begin(), b.curve.radius.end());
    EXPECT_LE(*hi - *lo, 1.0);
    EXPECT_TRUE(b.warnings.empty());
    EXPECT_GT(b.center.R0, 0.0);
}

TEST(EstimateBoundary, ShiftedCenterRecovered)
{
    std::vector<double> xs, ys;
    wall_hugging(40000, [](double) { return 125.0; }, 5.0, 0.0, 2, xs, ys);
    const BoundaryEstimate b = estimate_boundary(xs, ys);
    EXPECT_LE(std::hypot(b.center_x - 5.0, b.center_y), 0.5);
}

TEST(EstimateBoundary, TranslationCovariance)
{
    std::vector<double> xs, ys;
    wall_hugging(40000, [](double a) { return 125.0 + 3.0 * std::sin(2.0 * a); }, 0.0, 0.0, 3, xs, ys);
    std::vector<double> tx(xs), ty(ys);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        tx[i] += 4.0;
        ty[i] -= 3.0;
    }
    const BoundaryEstimate a = estimate_boundary(xs, ys);
    const BoundaryEstimate b = estimate_boundary(tx, ty);
    EXPECT_LE(std::hypot(b.center_x - a.center_x - 4.0, b.center_y - a.center_y + 3.0), 0.25);
    for (std::size_t g = 0; g < a.curve.radius.size(); ++g)
        EXPECT_LE(std::abs(a.curve.radius[g] - b.curve.radius[g]), 0.2) << g;
}

TEST(EstimateBoundary, RotationEquivariance)
{
    std::vector<double> xs, ys;
    wall_hugging(40000, [](double a) { return 125.0 + 3.0 * std::sin(2.0 * a); }, 0.0, 0.0, 5, xs, ys);
    const double phi = 0.7;
    std::vector<double> rx(xs.size()), ry(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        rx[i] = std::cos(phi) * xs[i] - std::sin(phi) * ys[i];
        ry[i] = std::sin(phi) * xs[i] + std::cos(phi) * ys[i];
    }
    const BoundaryEstimate a = estimate_boundary(xs, ys);
    const BoundaryEstimate b = estimate_boundary(rx, ry);
    // One sector's interpolation error on the sin(2 theta) shape: 3 * 2 * (2pi/720) / 2 plus sampling noise.
    for (std::size_t g = 0; g < a.curve.alphas.size(); ++g) {
        const double th = a.curve.alphas[g];
        EXPECT_LE(std::abs(b.curve.at(th + phi) - a.curve.at(th)), 0.1) << g;
    }
    // Rotation reassigns points to sectors, so the centers agree to resampling noise only.
    EXPECT_LE(std::hypot(b.center_x - (std::cos(phi) * a.center_x - std::sin(phi) * a.center_y),
                         b.center_y - (std::sin(phi) * a.center_x + std::cos(phi) * a.center_y)),
              0.05);
}

TEST(EstimateBoundary, PartialCoverageWarns)
{
    std::vector<double> xs, ys;
    wall_hugging(40000, [](double) { return 125.0; }, 0.0, 0.0, 6, xs, ys);
    std::vector<double> px, py;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!(xs[i] > 0 && ys[i] > 0)) {
            px.push_back(xs[i]);
            py.push_back(ys[i]);
        }
    const BoundaryEstimate b = estimate_boundary(px, py);
    ASSERT_FALSE(b.uncovered.empty());
    ASSERT_FALSE(b.warnings.empty());
    EXPECT_NE(b.warnings.back().find("no behavioral data"), std::string::npos);
    EXPECT_THROW(distance_from_wall(50.0, 50.0, b), DataError);
    EXPECT_NO_THROW(distance_from_wall(-50.0, -50.0, b));
}

TEST(DistanceFromWall, ConstantBoundary)
{
    const BoundaryEstimate b = constant_boundary(125.0);
    EXPECT_NEAR(distance_from_wall(120.0, 0.0, b), 5.0, 1e-12);
    EXPECT_NEAR(distance_from_wall(0.0, -125.0, b), 0.0, 1e-12);
    EXPECT_NEAR(distance_from_wall(130.0, 0.0, b), -5.0, 1e-12);
}

TEST(DistanceFromWall, DistortedBoundary)
{
    BoundaryEstimate b = constant_boundary(0.0, 2.0, -1.0);
    for (std::size_t g = 0; g < 720; ++g)
        b.curve.radius[g] = 125.0 + 3.0 * std::sin(2.0 * b.curve.alphas[g]);
    const double th = std::numbers::pi / 4.0;
    EXPECT_NEAR(distance_from_wall(2.0 + 120.0 * std::cos(th), -1.0 + 120.0 * std::sin(th), b), 8.0, 1e-9);
}

TEST(Polar, WrapAndConvert)
{
    EXPECT_NEAR(wrap_angle(-0.5), kTwoPi - 0.5, 1e-15);
    EXPECT_EQ(wrap_angle(kTwoPi), 0.0);
    const PolarSample p = to_polar(0.0, -2.0, 0.0, 1.0);
    EXPECT_EQ(p.r, 3.0);
    EXPECT_NEAR(p.theta, 1.5 * std::numbers::pi, 1e-15);
}
