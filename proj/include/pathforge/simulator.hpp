#pragma once
// Ground-truth path simulation, corruption by tracking noise and outliers, and
// scoring of the raw / LOWESS / RRM / combined smoothers.

#include "pathforge/pipeline.hpp"
#include "pathforge/raw_path.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace pathforge::sim {

using Rng = std::mt19937_64;

/// Deterministic generator for (seed, stream...) so replications are independent
/// of scheduling.
Rng make_rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b = 0);

/// Speeds (cm/s) of one progression bout; starts and ends at 0.
struct VelocityProfile {
    std::vector<double> speeds;

    std::size_t duration() const { return speeds.size(); }
    /// Distance covered by the bout in cm when sampled at fps.
    double distance_cm(double fps) const;
};

/// Half-sine bump: peak * sin(pi j / (L-1)), L = max(3, round(duration_s * fps)).
VelocityProfile half_sine_profile(double peak_cm_s, double duration_s, double fps);

struct ProfileOptions {
    std::size_t pool_size = 100;
    double peak_min_cm_s = 50.0;
    double peak_max_cm_s = 240.0;
    double duration_min_s = 0.5;
    double duration_max_s = 5.0;
    double fps = 25.0;
};

std::vector<VelocityProfile> generate_profile_pool(const ProfileOptions& options, Rng& rng);

/// Ground truth of one simulated session.
struct Truth {
    std::vector<double> x, y;   ///< cm
    std::vector<double> speed;  ///< cm/s
    std::vector<bool> arrest;   ///< speed == 0
    double distance_cm = 0.0;   ///< sum of speed / fps
    double arrest_proportion = 0.0;
    double fps = 25.0;

    std::size_t size() const { return x.size(); }
};

/// Mean (frames) of the exponential law whose floor gives the arrest lengths
/// needed to reach `target_p` in expectation with this pool. 0 when the pool's
/// own zero-speed frames already reach the target.
double arrest_mean_for_target(const std::vector<VelocityProfile>& pool, double target_p);

/// Chains randomly chosen profiles, each followed by an arrest of random
/// length, until n_frames are filled. Each bout moves along a random heading;
/// the location starts at the origin.
Truth synthesize_path(const std::vector<VelocityProfile>& pool, double target_p, std::size_t n_frames, double fps,
                      Rng& rng);

struct CorruptOptions {
    double sigma_cm = 0.6;
    double outlier_rate = 0.04;
    std::vector<double> shifts_cm{5.0, 10.0, 15.0};
    double grid_cm = 1.0;
};

struct Observed {
    std::vector<double> x, y;
    std::vector<std::size_t> outliers; ///< sorted frame indices
};

/// Gaussian noise per axis, outliers at round(rate * #moving frames) moving
/// frames (uniform shift magnitude, uniform direction), then rounding to the grid.
Observed corrupt(const Truth& truth, const CorruptOptions& options, Rng& rng);

struct Scenario {
    double sigma_cm = 0.6;
    double target_p = 0.36;
    std::size_t n_frames = 31250;
    double fps = 25.0;
    double outlier_rate = 0.04;
    bool stationary = false; ///< pool of all-zero profiles (anesthetized animal)
    ProfileOptions profiles;
    std::vector<double> shifts_cm{5.0, 10.0, 15.0};
};

struct SimulatedPath {
    Truth truth;
    Observed observed;
    Scenario scenario;
    std::uint64_t seed = 0;
    std::size_t replication = 0;

    RawPath raw_path() const;
};

/// The profile pool of a scenario; shared by all its replications.
std::vector<VelocityProfile> scenario_pool(const Scenario& scenario, std::uint64_t seed);

SimulatedPath simulate(const Scenario& scenario, const std::vector<VelocityProfile>& pool, std::uint64_t seed,
                       std::size_t replication);

enum class Method { Raw = 0, Lowess = 1, Rrm = 2, Combined = 3 };
inline constexpr std::array<Method, 4> kMethods{Method::Raw, Method::Lowess, Method::Rrm, Method::Combined};
std::string_view to_string(Method m);

struct ReplicationResult {
    std::size_t replication = 0;
    double theta_m = 0.0; ///< true distance, m
    double p = 0.0;       ///< true arrest proportion
    std::array<double, 4> theta_hat_m{};
    std::array<double, 4> p_hat{};
};

/// Fraction of frames whose position equals the previous frame's (frame 0
/// compares with frame 1).
double zero_step_fraction(std::span<const double> x, std::span<const double> y);

ReplicationResult score(const SimulatedPath& path, const pipeline::Options& options);

struct MethodAggregate {
    double mean_theta_m = 0.0, sd_theta_m = 0.0, mse_theta = 0.0;
    double mean_p = 0.0, sd_p = 0.0, mse_p = 0.0;
};

struct SimulationMetrics {
    Scenario scenario;
    std::vector<ReplicationResult> replications;
    double mean_theta_m = 0.0, sd_theta_m = 0.0, mean_p = 0.0;
    std::array<MethodAggregate, 4> methods{};

    const MethodAggregate& operator[](Method m) const { return methods[static_cast<std::size_t>(m)]; }
};

/// Aggregates MSE(theta) = sum (theta_i - theta_hat_i)^2 / reps and the same for p.
SimulationMetrics aggregate(const Scenario& scenario, std::vector<ReplicationResult> replications);

/// Simulates and scores `replications` paths (at least 2) in parallel.
SimulationMetrics evaluate(const Scenario& scenario, std::size_t replications, std::uint64_t seed,
                           const pipeline::Options& options, std::uint64_t scenario_index = 0);

/// The five (sigma, target p) settings of the distance / arrest comparison.
std::vector<Scenario> comparison_scenarios(const Scenario& base);

/// Stationary animal without outliers.
Scenario anesthetized_scenario(const Scenario& base, double sigma_cm, std::size_t n_frames);

struct OutlierScore {
    std::size_t injected = 0;
    std::size_t detected = 0;     ///< injected frames flagged on either axis
    std::size_t clean = 0;
    std::size_t false_flags = 0;  ///< clean frames flagged on either axis

    double detection_rate() const { return injected ? double(detected) / double(injected) : 1.0; }
    double false_flag_rate() const { return clean ? double(false_flags) / double(clean) : 0.0; }
};

OutlierScore score_outliers(const SimulatedPath& path, const kinematics::KinematicSeries& lowess);

} // namespace pathforge::sim
