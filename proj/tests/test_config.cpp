#include "pathforge/config.hpp"
#include "pathforge/error.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace pathforge;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Config, DefaultsMatchGoldenFile)
{
    EXPECT_EQ(to_text(SessionConfig{}), slurp(PATHFORGE_TEST_DATA "/default_config.txt"));
}

TEST(Config, GoldenFileParsesToDefaults)
{
    const SessionConfig c = load_config(PATHFORGE_TEST_DATA "/default_config.txt");
    EXPECT_EQ(to_text(c), to_text(SessionConfig{}));
}

TEST(Config, ProtocolValues)
{
    const SessionConfig c;
    EXPECT_EQ(c.pipeline.lowess.half_window, 10);
    EXPECT_EQ(c.pipeline.schedule.half_windows, (std::vector<int>{3, 2, 1, 1}));
    EXPECT_EQ(c.pipeline.min_arrest_s, 0.2);
    EXPECT_EQ(c.pipeline.outlier_factor, 6.0);
    EXPECT_EQ(c.boundary.sectors.sectors, 720u);
    EXPECT_DOUBLE_EQ(c.boundary.sectors.width, 2.0 * std::numbers::pi / 360.0);
    EXPECT_EQ(c.boundary.sectors.quantile, 0.95);
    EXPECT_EQ(c.boundary.bandwidth, 0.15);
    EXPECT_EQ(c.scenario.outlier_rate, 0.04);
    EXPECT_EQ(c.scenario.shifts_cm, (std::vector<double>{5, 10, 15}));
    EXPECT_EQ(c.replications, 50u);
    EXPECT_GT(c.scenario.n_frames, 30000u);
}

TEST(Config, RoundTripsNonDefaultValues)
{
    SessionConfig c;
    set_value(c, "lowess.half_window", "12");
    set_value(c, "rrm.schedule", "2,1");
    set_value(c, "boundary.quantile", "0.1");
    set_value(c, "sim.outlier_shifts_cm", "2.5, 7");
    set_value(c, "boundary.enabled", "false");
    set_value(c, "seed", "18446744073709551615");
    set_value(c, "session.fps", "30");
    std::istringstream in(to_text(c));
    const SessionConfig back = parse_config(in);
    EXPECT_EQ(to_text(back), to_text(c));
    EXPECT_EQ(back.pipeline.schedule.half_windows, (std::vector<int>{2, 1}));
    EXPECT_EQ(back.scenario.shifts_cm, (std::vector<double>{2.5, 7.0}));
    EXPECT_EQ(back.seed, 18446744073709551615ULL);
    EXPECT_EQ(back.scenario.fps, 30.0);
    EXPECT_FALSE(back.boundary_enabled);
}

TEST(Config, CommentsAndBlankLines)
{
    std::istringstream in("# protocol\n\n  lowess.half_window = 8  # narrower\n");
    EXPECT_EQ(parse_config(in).pipeline.lowess.half_window, 8);
}

TEST(Config, ErrorsNameTheLine)
{
    std::istringstream unknown("seed=3\nlowess.width=4\n");
    try {
        parse_config(unknown, "cfg");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("cfg:2"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("lowess.width"), std::string::npos) << e.what();
    }
    std::istringstream bad_number("session.fps=fast\n");
    EXPECT_THROW(parse_config(bad_number), ConfigError);
    std::istringstream no_eq("session.fps\n");
    EXPECT_THROW(parse_config(no_eq), ConfigError);
}

TEST(Config, ValidationRejectsOutOfRange)
{
    for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{
             {"session.fps", "0"},
             {"lowess.half_window", "1"},
             {"rrm.schedule", "3,0"},
             {"rrm.schedule", ""},
             {"boundary.quantile", "1.5"},
             {"boundary.sectors", "4"},
             {"sim.outlier_rate", "2"},
             {"sim.replications", "1"},
         }) {
        std::istringstream in(key + "=" + value + "\n");
        EXPECT_THROW(parse_config(in), ConfigError) << key << "=" << value;
    }
}

TEST(Config, KeysAreUnique)
{
    auto keys = config_keys();
    std::sort(keys.begin(), keys.end());
    EXPECT_EQ(std::adjacent_find(keys.begin(), keys.end()), keys.end());
    EXPECT_THROW(get_value(SessionConfig{}, "nope"), ConfigError);
}

TEST(Format, ExactAndResult)
{
    EXPECT_EQ(format_exact(0.1), "0.1");
    EXPECT_EQ(std::stod(format_exact(1.0 / 3.0)), 1.0 / 3.0);
    EXPECT_EQ(format_result(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_result(123456.789012), "123456.789");
}
