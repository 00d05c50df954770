#include "pathforge/config.hpp"

#include "pathforge/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace pathforge {

std::string format_exact(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_result(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view text)
{
    text = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ConfigError(std::string(key) + ": not a number: '" + std::string(text) + "'");
    return v;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text)
{
    text = trim(text);
    Int v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ConfigError(std::string(key) + ": not an integer: '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    text = trim(text);
    if (text == "true" || text == "1")
        return true;
    if (text == "false" || text == "0")
        return false;
    throw ConfigError(std::string(key) + ": expected true or false: '" + std::string(text) + "'");
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text)
{
    std::vector<T> out;
    text = trim(text);
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        if constexpr (std::is_floating_point_v<T>)
            out.push_back(parse_double(key, item));
        else
            out.push_back(parse_int<T>(key, item));
        if (comma == std::string_view::npos)
            break;
        text = text.substr(comma + 1);
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ',';
        if constexpr (std::is_floating_point_v<T>)
            s += format_exact(v[i]);
        else
            s += std::to_string(v[i]);
    }
    return s;
}

struct Entry {
    std::string key;
    std::function<std::string(const SessionConfig&)> get;
    std::function<void(SessionConfig&, std::string_view)> set;
};

template <class F>
Entry real(std::string key, F field)
{
    return {key, [field](const SessionConfig& c) { return format_exact(field(const_cast<SessionConfig&>(c))); },
            [field, key](SessionConfig& c, std::string_view v) { field(c) = parse_double(key, v); }};
}

template <class F>
Entry integer(std::string key, F field)
{
    using T = std::remove_reference_t<decltype(field(std::declval<SessionConfig&>()))>;
    return {key, [field](const SessionConfig& c) { return std::to_string(field(const_cast<SessionConfig&>(c))); },
            [field, key](SessionConfig& c, std::string_view v) { field(c) = parse_int<T>(key, v); }};
}

template <class F>
Entry boolean(std::string key, F field)
{
    return {key, [field](const SessionConfig& c) { return std::string(field(const_cast<SessionConfig&>(c)) ? "true" : "false"); },
            [field, key](SessionConfig& c, std::string_view v) { field(c) = parse_bool(key, v); }};
}

template <class F>
Entry list(std::string key, F field)
{
    using V = std::remove_reference_t<decltype(field(std::declval<SessionConfig&>()))>;
    return {key, [field](const SessionConfig& c) { return join(field(const_cast<SessionConfig&>(c))); },
            [field, key](SessionConfig& c, std::string_view v) {
                field(c) = parse_list<typename V::value_type>(key, v);
            }};
}

#define FIELD(expr) [](SessionConfig& c) -> auto& { return c.expr; }

const std::vector<Entry>& entries()
{
    static const std::vector<Entry> table{
        real("session.fps", FIELD(fps)),
        real("session.grid_cm", FIELD(grid_cm)),
        integer("lowess.half_window", FIELD(pipeline.lowess.half_window)),
        integer("lowess.robustness_iters", FIELD(pipeline.lowess.robustness_iters)),
        real("outlier.threshold_factor", FIELD(pipeline.outlier_factor)),
        real("outlier.min_residual_cm", FIELD(pipeline.outlier_min_residual_cm)),
        list("rrm.schedule", FIELD(pipeline.schedule.half_windows)),
        real("arrest.min_duration_s", FIELD(pipeline.min_arrest_s)),
        real("segments.lingering_speed_cm_s", FIELD(pipeline.lingering_speed_cm_s)),
        boolean("boundary.enabled", FIELD(boundary_enabled)),
        integer("boundary.sectors", FIELD(boundary.sectors.sectors)),
        real("boundary.sector_width_rad", FIELD(boundary.sectors.width)),
        real("boundary.quantile", FIELD(boundary.sectors.quantile)),
        real("boundary.bandwidth", FIELD(boundary.bandwidth)),
        integer("boundary.min_sector_count", FIELD(boundary.sectors.min_count)),
        real("boundary.origin_x", FIELD(boundary.origin_x)),
        real("boundary.origin_y", FIELD(boundary.origin_y)),
        real("sim.sigma_cm", FIELD(scenario.sigma_cm)),
        real("sim.target_arrest_proportion", FIELD(scenario.target_p)),
        integer("sim.n_frames", FIELD(scenario.n_frames)),
        real("sim.outlier_rate", FIELD(scenario.outlier_rate)),
        list("sim.outlier_shifts_cm", FIELD(scenario.shifts_cm)),
        integer("sim.profile_pool_size", FIELD(scenario.profiles.pool_size)),
        real("sim.profile_peak_min_cm_s", FIELD(scenario.profiles.peak_min_cm_s)),
        real("sim.profile_peak_max_cm_s", FIELD(scenario.profiles.peak_max_cm_s)),
        real("sim.profile_duration_min_s", FIELD(scenario.profiles.duration_min_s)),
        real("sim.profile_duration_max_s", FIELD(scenario.profiles.duration_max_s)),
        integer("sim.replications", FIELD(replications)),
        real("sim.anesthetized_sigma_cm", FIELD(anesthetized_sigma_cm)),
        integer("sim.anesthetized_n_frames", FIELD(anesthetized_n_frames)),
        integer("sim.anesthetized_replications", FIELD(anesthetized_replications)),
        integer("seed", FIELD(seed)),
    };
    return table;
}

#undef FIELD

const Entry& find(std::string_view key)
{
    for (const Entry& e : entries())
        if (e.key == key)
            return e;
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void require(bool ok, std::string_view key, std::string_view what)
{
    if (!ok)
        throw ConfigError(std::string(key) + ": " + std::string(what));
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const Entry& e : entries())
            k.push_back(e.key);
        return k;
    }();
    return keys;
}

std::string get_value(const SessionConfig& config, std::string_view key)
{
    return find(key).get(config);
}

void set_value(SessionConfig& config, std::string_view key, std::string_view value)
{
    find(trim(key)).set(config, value);
    config.scenario.fps = config.fps;
    config.scenario.profiles.fps = config.fps;
}

void SessionConfig::validate() const
{
    require(fps > 0.0, "session.fps", "must be positive");
    require(grid_cm > 0.0, "session.grid_cm", "must be positive");
    require(pipeline.lowess.half_window >= 2, "lowess.half_window", "must be at least 2");
    require(pipeline.lowess.robustness_iters >= 0, "lowess.robustness_iters", "must be nonnegative");
    require(pipeline.outlier_factor > 0.0, "outlier.threshold_factor", "must be positive");
    require(pipeline.outlier_min_residual_cm >= 0.0, "outlier.min_residual_cm", "must be nonnegative");
    require(!pipeline.schedule.half_windows.empty(), "rrm.schedule", "must not be empty");
    for (int h : pipeline.schedule.half_windows)
        require(h >= 1, "rrm.schedule", "half-windows must be at least 1");
    require(pipeline.min_arrest_s > 0.0, "arrest.min_duration_s", "must be positive");
    require(pipeline.lingering_speed_cm_s >= 0.0, "segments.lingering_speed_cm_s", "must be nonnegative");
    require(boundary.sectors.sectors >= 8, "boundary.sectors", "must be at least 8");
    require(boundary.sectors.width > 0.0 && boundary.sectors.width < arena::kTwoPi, "boundary.sector_width_rad",
            "must lie in (0, 2pi)");
    require(boundary.sectors.quantile > 0.0 && boundary.sectors.quantile <= 1.0, "boundary.quantile",
            "must lie in (0, 1]");
    require(boundary.bandwidth > 0.0 && boundary.bandwidth <= 1.0, "boundary.bandwidth", "must lie in (0, 1]");
    require(boundary.sectors.min_count >= 1, "boundary.min_sector_count", "must be at least 1");
    require(scenario.sigma_cm >= 0.0, "sim.sigma_cm", "must be nonnegative");
    require(scenario.target_p >= 0.0 && scenario.target_p < 1.0, "sim.target_arrest_proportion",
            "must lie in [0, 1)");
    require(scenario.n_frames > 0, "sim.n_frames", "must be positive");
    require(scenario.outlier_rate >= 0.0 && scenario.outlier_rate <= 1.0, "sim.outlier_rate", "must lie in [0, 1]");
    require(!scenario.shifts_cm.empty(), "sim.outlier_shifts_cm", "must not be empty");
    require(scenario.profiles.pool_size >= 1, "sim.profile_pool_size", "must be positive");
    require(scenario.profiles.peak_min_cm_s >= 0.0 && scenario.profiles.peak_max_cm_s >= scenario.profiles.peak_min_cm_s,
            "sim.profile_peak_max_cm_s", "must be at least the minimum peak");
    require(scenario.profiles.duration_min_s > 0.0 &&
                scenario.profiles.duration_max_s >= scenario.profiles.duration_min_s,
            "sim.profile_duration_max_s", "must be at least the positive minimum duration");
    require(replications >= 2, "sim.replications", "must be at least 2");
    require(anesthetized_sigma_cm >= 0.0, "sim.anesthetized_sigma_cm", "must be nonnegative");
    require(anesthetized_n_frames > 0, "sim.anesthetized_n_frames", "must be positive");
    require(anesthetized_replications >= 2, "sim.anesthetized_replications", "must be at least 2");
}

SessionConfig parse_config(std::istream& in, std::string_view source)
{
    SessionConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos)
            text = text.substr(0, hash);
        text = trim(text);
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        try {
            if (eq == std::string_view::npos)
                throw ConfigError("expected key=value");
            set_value(config, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    config.validate();
    return config;
}

SessionConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

void write_config(std::ostream& out, const SessionConfig& config)
{
    for (const Entry& e : entries())
        out << e.key << '=' << e.get(config) << '\n';
}

std::string to_text(const SessionConfig& config)
{
    std::ostringstream s;
    write_config(s, config);
    return s.str();
}

} // namespace pathforge
