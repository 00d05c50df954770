#pragma once
// CSV ingestion and result serialization, the per-session pipeline driver and
// the batch runner.

#include "pathforge/arena.hpp"
#include "pathforge/config.hpp"
#include "pathforge/pipeline.hpp"
#include "pathforge/radius_mse.hpp"
#include "pathforge/raw_path.hpp"
#include "pathforge/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathforge::io {

/// Parses `frame,t,x,y` CSV text. fps is inferred from the time column (snapped
/// to 1e-3 when within 1e-6 of it); single-row sessions use `default_fps`.
/// Errors name the first offending line.
RawPath parse_session(std::string_view text, std::string_view source = "<input>", double default_fps = 25.0,
                      double grid_cm = 1.0);
RawPath read_session(const std::filesystem::path& path, double default_fps = 25.0, double grid_cm = 1.0);

/// Writes `frame,t,x,y` with round-trip exact numbers.
void write_session(std::ostream& out, const RawPath& path);

void write_smoothed(std::ostream& out, const std::vector<std::int64_t>& frames,
                    const kinematics::KinematicSeries& series, const rrm::ArrestMask& mask);
void write_arrests(std::ostream& out, const std::vector<std::int64_t>& frames, const rrm::ArrestMask& mask);
void write_segments(std::ostream& out, const std::vector<std::int64_t>& frames, const pipeline::SegmentList& segments);
void write_endpoints(std::ostream& out, const pipeline::EndpointSummary& summary);
void write_boundary(std::ostream& out, const arena::BoundaryEstimate& boundary);
/// Distance from wall per frame; frames at uncovered angles get an empty field.
void write_wall_distance(std::ostream& out, const std::vector<std::int64_t>& frames, std::span<const double> xs,
                         std::span<const double> ys, const arena::BoundaryEstimate& boundary);

/// Reads the boundary CSV back (curve and center; coverage is taken as full).
arena::BoundaryEstimate read_boundary(const std::filesystem::path& path);

/// One row per replication: truth and the estimates of every method.
void write_replications(std::ostream& out, const std::vector<sim::SimulationMetrics>& runs);
/// Method x configuration table of mean and MSE for distance and arrest proportion.
void write_metrics(std::ostream& out, const std::vector<sim::SimulationMetrics>& runs);

struct MseRow {
    radius::RadialModel model;
    radius::Estimator estimator = radius::Estimator::Max;
    double closed_form = 0.0;
    radius::MonteCarloResult mc;
    bool pass = false; ///< |closed - empirical| <= 3 SE
};

/// Grid of models used by `mse-table` and `validate-mse`.
std::vector<MseRow> mse_table(long reps, std::uint64_t seed);
void write_mse_table(std::ostream& out, const std::vector<MseRow>& rows);

/// Run manifest: the full config plus comment lines with provenance.
void write_manifest(std::ostream& out, const SessionConfig& config, std::string_view command,
                    std::string_view input);

struct Stages {
    bool smoothed = true, arrests = true, segments = true, endpoints = true, boundary = true, wall_distance = true;
};

struct Bundle {
    std::filesystem::path dir;
    std::vector<std::filesystem::path> files;
    pipeline::SessionResult result;
    std::optional<arena::BoundaryEstimate> boundary;
    std::vector<std::string> warnings;
};

/// Runs the combined smoother and, when enabled, boundary estimation on one
/// session; writes the requested CSVs and `manifest.txt` into `out_dir`.
/// Files written before a failure are removed.
Bundle run_pipeline(const SessionConfig& config, const RawPath& session, const std::filesystem::path& out_dir,
                    const Stages& stages = {}, std::string_view command = "run", std::string_view input = "");

/// Runs every input into `out_root/<stem>` on up to batch_threads() workers.
std::vector<Bundle> run_batch(const SessionConfig& config, const std::vector<std::filesystem::path>& inputs,
                              const std::filesystem::path& out_root, const Stages& stages = {});

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view text);

} // namespace pathforge::io
