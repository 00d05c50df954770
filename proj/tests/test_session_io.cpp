#include "pathforge/error.hpp"
#include "pathforge/session_io.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

using namespace pathforge;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("pathforge_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

RawPath simulated_session(std::uint64_t seed, std::size_t n = 31250)
{
    sim::Scenario s;
    s.n_frames = n;
    return sim::simulate(s, sim::scenario_pool(s, seed), seed, 0).raw_path();
}

} // namespace

TEST(ParseSession, WellFormed)
{
    const RawPath p = io::parse_session("frame,t,x,y\n0,0,1,2\n1,0.04,1.5,2\n2,0.08,2,-3\n");
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p.fps, 25.0);
    EXPECT_EQ(p.x[1], 1.5);
    EXPECT_EQ(p.y[2], -3.0);
    EXPECT_EQ(p.frames[2], 2);
}

TEST(ParseSession, CrlfAndTrailingBlankLines)
{
    const RawPath p = io::parse_session("frame,t,x,y\r\n5,1.0,1,2\r\n6,1.04,1,2\r\n\r\n");
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p.frames[0], 5);
}

namespace {

void expect_error_at_line(const std::string& text, int line)
{
    try {
        io::parse_session(text, "s.csv");
        FAIL() << "expected DataError for:\n" << text;
    } catch (const DataError& e) {
        const std::string want = "s.csv:" + std::to_string(line) + ":";
        EXPECT_NE(std::string(e.what()).find(want), std::string::npos) << e.what();
    }
}

} // namespace

TEST(ParseSession, ErrorsNameTheLine)
{
    expect_error_at_line("frame,time,x,y\n0,0,1,2\n", 1);
    expect_error_at_line("frame,t,x,y\n0,0,1,2\n1,0.04,1,2\n1,0.08,1,2\n", 4);
    expect_error_at_line("frame,t,x,y\n0,0,1,2\n1,0.04,,2\n", 3);
    expect_error_at_line("frame,t,x,y\n0,0,1,2\n1,0.04,1,2\n2,0.09,1,2\n", 4);
    expect_error_at_line("frame,t,x,y\n0,0,1,2\n1,0.04,1,2,7\n", 3);
    expect_error_at_line("frame,t,x,y\n0,0,1,2\n1,0.04,nan,2\n", 3);
    EXPECT_THROW(io::parse_session(""), DataError);
    EXPECT_THROW(io::parse_session("frame,t,x,y\n"), DataError);
}

TEST(ParseSession, SpacingToleranceIsOneMicrosecond)
{
    EXPECT_NO_THROW(io::parse_session("frame,t,x,y\n0,0,0,0\n1,0.04,0,0\n2,0.0800005,0,0\n"));
    EXPECT_THROW(io::parse_session("frame,t,x,y\n0,0,0,0\n1,0.04,0,0\n2,0.080002,0,0\n"), DataError);
}

TEST(SessionIo, RoundTripExact)
{
    RawPath p = simulated_session(3, 2000);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> d(0.0, 10.0);
    for (double& x : p.x)
        x += d(rng) * 1e-3; // non-grid values exercise shortest round-trip formatting
    std::ostringstream out;
    io::write_session(out, p);
    const RawPath back = io::parse_session(out.str());
    EXPECT_EQ(back, p);
}

TEST(SessionIo, ParsesLongSessionQuickly)
{
    const RawPath p = simulated_session(4, 45000);
    std::ostringstream out;
    io::write_session(out, p);
    const std::string text = out.str();
    const auto start = std::chrono::steady_clock::now();
    const RawPath back = io::parse_session(text);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_EQ(back.size(), 45000u);
    EXPECT_LT(secs, 1.0);
}

TEST(RunPipeline, WritesBundle)
{
    const fs::path dir = scratch("bundle");
    const io::Bundle b = io::run_pipeline(SessionConfig{}, simulated_session(5), dir);
    for (const char* f : {"smoothed.csv", "arrests.csv", "segments.csv", "endpoints.csv", "boundary.csv",
                          "wall_distance.csv", "manifest.txt"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    const std::string smoothed = slurp(dir / "smoothed.csv");
    EXPECT_EQ(smoothed.substr(0, smoothed.find('\n')), "frame,xhat,yhat,vx,vy,ax,ay,speed,arrest");
    EXPECT_EQ(slurp(dir / "segments.csv").substr(0, 27), "start,end,kind,max_speed\n0,");
    const std::string boundary = slurp(dir / "boundary.csv");
    EXPECT_EQ(boundary.rfind("# center ", 0), 0u);
    EXPECT_NE(boundary.find("\nangle_rad,radius_cm\n"), std::string::npos);
    EXPECT_GT(b.result.summary.total_distance_m, 0.0);
    fs::remove_all(dir);
}

TEST(RunPipeline, StationarySession)
{
    RawPath p;
    for (int i = 0; i < 500; ++i) {
        p.frames.push_back(i);
        p.t.push_back(i / 25.0);
        p.x.push_back(10.0);
        p.y.push_back(-4.0);
    }
    const fs::path dir = scratch("stationary");
    const io::Bundle b = io::run_pipeline(SessionConfig{}, p, dir);
    EXPECT_EQ(b.result.summary.total_distance_m, 0.0);
    EXPECT_EQ(b.result.summary.proportion_arrest, 1.0);
    // No progression at all: boundary skipped with a warning, the rest intact.
    EXPECT_FALSE(b.warnings.empty());
    EXPECT_FALSE(fs::exists(dir / "boundary.csv"));
    EXPECT_TRUE(fs::exists(dir / "endpoints.csv"));
    EXPECT_NE(slurp(dir / "manifest.txt").find("# warning=boundary"), std::string::npos);
    fs::remove_all(dir);
}

TEST(RunPipeline, CoverageWarningKeepsOtherOutputs)
{
    // Progression confined to one quadrant.
    RawPath p;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> turn(-0.3, 0.3);
    double x = 20, y = 20, h = 0.0;
    for (int i = 0; i < 6000; ++i) {
        h += turn(rng);
        x = std::clamp(x + 1.5 * std::cos(h), 5.0, 60.0);
        y = std::clamp(y + 1.5 * std::sin(h), 5.0, 60.0);
        p.frames.push_back(i);
        p.t.push_back(i / 25.0);
        p.x.push_back(std::round(x));
        p.y.push_back(std::round(y));
    }
    const fs::path dir = scratch("coverage");
    const io::Bundle b = io::run_pipeline(SessionConfig{}, p, dir);
    ASSERT_FALSE(b.warnings.empty());
    bool coverage = false;
    for (const std::string& w : b.warnings)
        coverage = coverage || w.find("arc") != std::string::npos || w.find("center") != std::string::npos;
    EXPECT_TRUE(coverage);
    EXPECT_TRUE(fs::exists(dir / "smoothed.csv"));
    EXPECT_TRUE(fs::exists(dir / "endpoints.csv"));
    fs::remove_all(dir);
}

TEST(RunPipeline, FailureRemovesPartialOutputs)
{
    RawPath p;
    for (int i = 0; i < 10; ++i) { // too short for the smoothing window
        p.frames.push_back(i);
        p.t.push_back(i / 25.0);
        p.x.push_back(i);
        p.y.push_back(0);
    }
    const fs::path dir = scratch("failure");
    EXPECT_THROW(io::run_pipeline(SessionConfig{}, p, dir), DataError);
    EXPECT_FALSE(fs::exists(dir));
}

TEST(RunBatch, DeterministicBundles)
{
    const fs::path in = scratch("batch_in");
    fs::create_directories(in);
    std::vector<fs::path> inputs;
    for (std::uint64_t s = 0; s < 4; ++s) {
        std::ostringstream out;
        io::write_session(out, simulated_session(100 + s, 5000));
        const fs::path f = in / ("session" + std::to_string(s) + ".csv");
        io::write_file(f, out.str());
        inputs.push_back(f);
    }
    const fs::path a = scratch("batch_a"), b = scratch("batch_b");
    const auto ba = io::run_batch(SessionConfig{}, inputs, a);
    const auto bb = io::run_batch(SessionConfig{}, inputs, b);
    ASSERT_EQ(ba.size(), 4u);
    for (std::size_t i = 0; i < ba.size(); ++i) {
        ASSERT_EQ(ba[i].files.size(), bb[i].files.size());
        for (std::size_t f = 0; f < ba[i].files.size(); ++f)
            EXPECT_EQ(slurp(ba[i].files[f]), slurp(bb[i].files[f])) << ba[i].files[f];
    }
    EXPECT_TRUE(fs::exists(a / "session2" / "endpoints.csv"));
    fs::remove_all(in);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Manifest, ReproducesBundle)
{
    SessionConfig c;
    c.pipeline.lowess.half_window = 8;
    const RawPath p = simulated_session(6, 8000);
    const fs::path a = scratch("manifest_a"), b = scratch("manifest_b");
    io::run_pipeline(c, p, a);
    const SessionConfig again = load_config(a / "manifest.txt");
    io::run_pipeline(again, p, b);
    for (const char* f : {"smoothed.csv", "segments.csv", "endpoints.csv", "boundary.csv", "manifest.txt"})
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Boundary, WriteReadRoundTrip)
{
    arena::BoundaryEstimate b;
    b.center_x = 1.25;
    b.center_y = -3.5;
    for (int i = 0; i < 720; ++i) {
        b.curve.alphas.push_back(arena::kTwoPi * i / 720.0);
        b.curve.radius.push_back(125.0 + std::sin(i / 50.0));
    }
    b.curve.covered.assign(720, true);
    const fs::path dir = scratch("boundary_rt");
    std::ostringstream out;
    io::write_boundary(out, b);
    io::write_file(dir / "b.csv", out.str());
    const arena::BoundaryEstimate back = io::read_boundary(dir / "b.csv");
    EXPECT_EQ(back.center_x, 1.25);
    EXPECT_EQ(back.center_y, -3.5);
    ASSERT_EQ(back.curve.radius.size(), 720u);
    for (std::size_t i = 0; i < 720; ++i)
        EXPECT_NEAR(back.curve.radius[i], b.curve.radius[i], 1e-6);
    fs::remove_all(dir);
}

TEST(MseTable, EveryRowWithinThreeSe)
{
    const auto rows = io::mse_table(20000, 3);
    EXPECT_GE(rows.size(), 12u);
    std::size_t passed = 0;
    for (const io::MseRow& r : rows)
        passed += r.pass ? 1 : 0;
    // 3 SE bands fail about 0.3% of the time each; allow none at this seed.
    EXPECT_EQ(passed, rows.size());
    std::ostringstream out;
    io::write_mse_table(out, rows);
    EXPECT_EQ(out.str().rfind("law,power,R,n,N,sigma,estimator,closed_form,empirical,se,reps,pass\n", 0), 0u);
}
