#pragma once
// Flat `dotted.key=value` configuration covering every tunable of the pipeline,
// the boundary estimator and the simulator.

#include "pathforge/arena.hpp"
#include "pathforge/pipeline.hpp"
#include "pathforge/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pathforge {

struct SessionConfig {
    double fps = 25.0;
    double grid_cm = 1.0;
    pipeline::Options pipeline;

    bool boundary_enabled = true;
    arena::BoundaryOptions boundary;

    sim::Scenario scenario;
    std::size_t replications = 50;
    double anesthetized_sigma_cm = 0.5;
    std::size_t anesthetized_n_frames = 22500;
    std::size_t anesthetized_replications = 100;

    std::uint64_t seed = 1;

    /// Throws ConfigError naming the first invalid key.
    void validate() const;
};

/// Every key in canonical order.
const std::vector<std::string>& config_keys();

/// Current value of `key` in canonical text form. Throws ConfigError for unknown keys.
std::string get_value(const SessionConfig& config, std::string_view key);

/// Assigns one key. Throws ConfigError for unknown keys or unparsable values.
void set_value(SessionConfig& config, std::string_view key, std::string_view value);

/// Parses `key=value` lines on top of the defaults; `#` starts a comment.
/// Errors name the line. The result is validated.
SessionConfig parse_config(std::istream& in, std::string_view source = "<config>");
SessionConfig load_config(const std::filesystem::path& path);

/// Writes every key, one per line, in canonical order.
void write_config(std::ostream& out, const SessionConfig& config);
std::string to_text(const SessionConfig& config);

/// Shortest text that parses back to the same double.
std::string format_exact(double v);
/// Fixed 9 significant digits, used for result tables.
std::string format_result(double v);

} // namespace pathforge
