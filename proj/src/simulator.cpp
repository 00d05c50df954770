#include "pathforge/simulator.hpp"

#include "pathforge/error.hpp"
#include "pathforge/parallel.hpp"
#include "pathforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pathforge::sim {

Rng make_rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_a), static_cast<std::uint32_t>(stream_a >> 32),
                      static_cast<std::uint32_t>(stream_b), static_cast<std::uint32_t>(stream_b >> 32)};
    return Rng(seq);
}

double VelocityProfile::distance_cm(double fps) const
{
    double total = 0.0;
    for (std::size_t j = 1; j < speeds.size(); ++j)
        total += speeds[j];
    return total / fps;
}

VelocityProfile half_sine_profile(double peak_cm_s, double duration_s, double fps)
{
    if (!(peak_cm_s >= 0.0) || !(duration_s > 0.0) || !(fps > 0.0))
        throw DomainError("half-sine profile needs peak >= 0, duration > 0 and fps > 0");
    const auto len = std::max<std::size_t>(3, static_cast<std::size_t>(std::lround(duration_s * fps)));
    VelocityProfile p;
    p.speeds.resize(len);
    for (std::size_t j = 0; j < len; ++j)
        p.speeds[j] = peak_cm_s * std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(len - 1));
    // sin(pi) is not exactly zero.
    p.speeds.front() = 0.0;
    p.speeds.back() = 0.0;
    return p;
}

std::vector<VelocityProfile> generate_profile_pool(const ProfileOptions& options, Rng& rng)
{
    if (options.pool_size == 0)
        throw DomainError("profile pool must not be empty");
    if (!(options.peak_min_cm_s >= 0.0 && options.peak_max_cm_s >= options.peak_min_cm_s))
        throw DomainError("invalid peak speed range");
    if (!(options.duration_min_s > 0.0 && options.duration_max_s >= options.duration_min_s))
        throw DomainError("invalid profile duration range");

    std::uniform_real_distribution<double> peak(options.peak_min_cm_s, options.peak_max_cm_s);
    std::uniform_real_distribution<double> duration(options.duration_min_s, options.duration_max_s);
    std::vector<VelocityProfile> pool;
    pool.reserve(options.pool_size);
    for (std::size_t i = 0; i < options.pool_size; ++i) {
        const double pk = peak(rng);
        const double d = duration(rng);
        pool.push_back(half_sine_profile(pk, d, options.fps));
    }
    return pool;
}

double arrest_mean_for_target(const std::vector<VelocityProfile>& pool, double target_p)
{
    if (pool.empty())
        throw DomainError("profile pool must not be empty");
    if (!(target_p >= 0.0 && target_p < 1.0))
        throw DomainError("target arrest proportion must lie in [0, 1)");

    double len = 0.0, zeros = 0.0;
    for (const VelocityProfile& p : pool) {
        len += static_cast<double>(p.duration());
        zeros += static_cast<double>(std::count(p.speeds.begin(), p.speeds.end(), 0.0));
    }
    len /= static_cast<double>(pool.size());
    zeros /= static_cast<double>(pool.size());

    // Expected arrest frames A per bout solves (zeros + A) / (len + A) = target.
    const double needed = (target_p * len - zeros) / (1.0 - target_p);
    if (needed <= 0.0)
        return 0.0;
    // floor(Exp(mu)) is geometric with mean 1 / (exp(1/mu) - 1).
    return 1.0 / std::log1p(1.0 / needed);
}

Truth synthesize_path(const std::vector<VelocityProfile>& pool, double target_p, std::size_t n_frames, double fps,
                      Rng& rng)
{
    if (pool.empty())
        throw DomainError("profile pool must not be empty");
    if (!(fps > 0.0))
        throw DomainError("fps must be positive");

    const double mu = arrest_mean_for_target(pool, target_p);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);
    std::exponential_distribution<double> arrest_len(mu > 0.0 ? 1.0 / mu : 1.0);

    Truth t;
    t.fps = fps;
    t.x.reserve(n_frames);
    t.y.reserve(n_frames);
    t.speed.reserve(n_frames);

    double x = 0.0, y = 0.0;
    auto push = [&](double v, double c, double s) {
        if (!t.x.empty()) {
            x += v * c / fps;
            y += v * s / fps;
        }
        t.x.push_back(x);
        t.y.push_back(y);
        t.speed.push_back(v);
    };

    while (t.x.size() < n_frames) {
        const VelocityProfile& prof = pool[pick(rng)];
        const double h = heading(rng);
        const double c = std::cos(h), s = std::sin(h);
        for (std::size_t j = 0; j < prof.duration() && t.x.size() < n_frames; ++j)
            push(prof.speeds[j], c, s);
        const auto rest = mu > 0.0 ? static_cast<std::size_t>(std::floor(arrest_len(rng))) : 0;
        for (std::size_t j = 0; j < rest && t.x.size() < n_frames; ++j)
            push(0.0, 1.0, 0.0);
    }

    t.arrest.resize(n_frames);
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < n_frames; ++i) {
        t.arrest[i] = t.speed[i] == 0.0;
        zeros += t.arrest[i] ? 1 : 0;
        if (i > 0)
            t.distance_cm += t.speed[i] / fps;
    }
    t.arrest_proportion = n_frames ? static_cast<double>(zeros) / static_cast<double>(n_frames) : 0.0;
    return t;
}

Observed corrupt(const Truth& truth, const CorruptOptions& options, Rng& rng)
{
    if (!(options.sigma_cm >= 0.0))
        throw DomainError("noise sigma must be nonnegative");
    if (!(options.outlier_rate >= 0.0 && options.outlier_rate <= 1.0))
        throw DomainError("outlier rate must lie in [0, 1]");
    if (options.shifts_cm.empty() && options.outlier_rate > 0.0)
        throw DomainError("outlier shifts must not be empty");
    if (!(options.grid_cm > 0.0))
        throw DomainError("grid size must be positive");

    const std::size_t n = truth.size();
    Observed obs;
    obs.x = truth.x;
    obs.y = truth.y;

    if (options.sigma_cm > 0.0) {
        std::normal_distribution<double> noise(0.0, options.sigma_cm);
        for (std::size_t i = 0; i < n; ++i) {
            obs.x[i] += noise(rng);
            obs.y[i] += noise(rng);
        }
    }

    std::vector<std::size_t> moving;
    for (std::size_t i = 0; i < n; ++i)
        if (!truth.arrest[i])
            moving.push_back(i);
    const auto k = static_cast<std::size_t>(std::llround(options.outlier_rate * static_cast<double>(moving.size())));
    // Partial Fisher-Yates: the first k entries become a uniform sample without replacement.
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, moving.size() - 1);
        std::swap(moving[i], moving[pick(rng)]);
    }
    obs.outliers.assign(moving.begin(), moving.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(obs.outliers.begin(), obs.outliers.end());

    if (k > 0) {
        std::uniform_int_distribution<std::size_t> which(0, options.shifts_cm.size() - 1);
        std::uniform_real_distribution<double> direction(0.0, 2.0 * std::numbers::pi);
        for (std::size_t i : obs.outliers) {
            const double mag = options.shifts_cm[which(rng)];
            const double dir = direction(rng);
            obs.x[i] += mag * std::cos(dir);
            obs.y[i] += mag * std::sin(dir);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        obs.x[i] = std::round(obs.x[i] / options.grid_cm) * options.grid_cm;
        obs.y[i] = std::round(obs.y[i] / options.grid_cm) * options.grid_cm;
    }
    return obs;
}

RawPath SimulatedPath::raw_path() const
{
    RawPath p;
    const std::size_t n = observed.x.size();
    p.fps = scenario.fps;
    p.grid_cm = 1.0;
    p.frames.resize(n);
    p.t.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.frames[i] = static_cast<std::int64_t>(i);
        p.t[i] = static_cast<double>(i) / scenario.fps;
    }
    p.x = observed.x;
    p.y = observed.y;
    return p;
}

std::vector<VelocityProfile> scenario_pool(const Scenario& scenario, std::uint64_t seed)
{
    if (scenario.stationary)
        return {VelocityProfile{std::vector<double>(3, 0.0)}};
    ProfileOptions po = scenario.profiles;
    po.fps = scenario.fps;
    Rng rng = make_rng(seed, 0x706f6f6cULL); // "pool"
    return generate_profile_pool(po, rng);
}

SimulatedPath simulate(const Scenario& scenario, const std::vector<VelocityProfile>& pool, std::uint64_t seed,
                       std::size_t replication)
{
    Rng rng = make_rng(seed, 1, replication);
    SimulatedPath path;
    path.scenario = scenario;
    path.seed = seed;
    path.replication = replication;
    path.truth = synthesize_path(pool, scenario.stationary ? 0.0 : scenario.target_p, scenario.n_frames,
                                 scenario.fps, rng);
    CorruptOptions co;
    co.sigma_cm = scenario.sigma_cm;
    co.outlier_rate = scenario.outlier_rate;
    co.shifts_cm = scenario.shifts_cm;
    path.observed = corrupt(path.truth, co, rng);
    return path;
}

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::Raw:
        return "raw";
    case Method::Lowess:
        return "lowess";
    case Method::Rrm:
        return "rrm";
    case Method::Combined:
        break;
    }
    return "combined";
}

double zero_step_fraction(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    if (n < 2)
        return n == 1 ? 1.0 : 0.0;
    std::size_t zeros = (x[0] == x[1] && y[0] == y[1]) ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i)
        zeros += (x[i] == x[i - 1] && y[i] == y[i - 1]) ? 1 : 0;
    return static_cast<double>(zeros) / static_cast<double>(n);
}

ReplicationResult score(const SimulatedPath& path, const pipeline::Options& options)
{
    const RawPath raw = path.raw_path();
    const pipeline::SessionResult r = pipeline::run_session(raw, options);

    ReplicationResult out;
    out.replication = path.replication;
    out.theta_m = path.truth.distance_cm / 100.0;
    out.p = path.truth.arrest_proportion;

    auto set = [&](Method m, double theta_cm, double p_hat) {
        out.theta_hat_m[static_cast<std::size_t>(m)] = theta_cm / 100.0;
        out.p_hat[static_cast<std::size_t>(m)] = p_hat;
    };
    set(Method::Raw, pipeline::path_length_cm(raw.x, raw.y), zero_step_fraction(raw.x, raw.y));

    const auto lowess_zero = std::count(r.lowess.speed.begin(), r.lowess.speed.end(), 0.0);
    set(Method::Lowess, pipeline::path_length_cm(r.lowess.x, r.lowess.y),
        static_cast<double>(lowess_zero) / static_cast<double>(raw.size()));
    set(Method::Rrm, pipeline::path_length_cm(r.rrm_x, r.rrm_y), zero_step_fraction(r.rrm_x, r.rrm_y));
    out.theta_hat_m[static_cast<std::size_t>(Method::Combined)] = r.summary.total_distance_m;
    out.p_hat[static_cast<std::size_t>(Method::Combined)] = r.summary.proportion_arrest;
    return out;
}

SimulationMetrics aggregate(const Scenario& scenario, std::vector<ReplicationResult> replications)
{
    SimulationMetrics m;
    m.scenario = scenario;
    std::sort(replications.begin(), replications.end(),
              [](const ReplicationResult& a, const ReplicationResult& b) { return a.replication < b.replication; });
    m.replications = std::move(replications);
    const auto reps = static_cast<double>(m.replications.size());
    if (m.replications.empty())
        return m;

    std::vector<double> theta, p;
    for (const auto& r : m.replications) {
        theta.push_back(r.theta_m);
        p.push_back(r.p);
    }
    m.mean_theta_m = stats::mean(theta);
    m.sd_theta_m = stats::stddev(theta);
    m.mean_p = stats::mean(p);

    for (Method method : kMethods) {
        const auto k = static_cast<std::size_t>(method);
        std::vector<double> th, ph;
        double se_theta = 0.0, se_p = 0.0;
        for (const auto& r : m.replications) {
            th.push_back(r.theta_hat_m[k]);
            ph.push_back(r.p_hat[k]);
            se_theta += (r.theta_m - r.theta_hat_m[k]) * (r.theta_m - r.theta_hat_m[k]);
            se_p += (r.p - r.p_hat[k]) * (r.p - r.p_hat[k]);
        }
        MethodAggregate& a = m.methods[k];
        a.mean_theta_m = stats::mean(th);
        a.sd_theta_m = stats::stddev(th);
        a.mse_theta = se_theta / reps;
        a.mean_p = stats::mean(ph);
        a.sd_p = stats::stddev(ph);
        a.mse_p = se_p / reps;
    }
    return m;
}

SimulationMetrics evaluate(const Scenario& scenario, std::size_t replications, std::uint64_t seed,
                           const pipeline::Options& options, std::uint64_t scenario_index)
{
    if (replications < 2)
        throw DomainError("evaluation needs at least two replications");
    const std::uint64_t scenario_seed = seed * 1000003ULL + scenario_index;
    const auto pool = scenario_pool(scenario, scenario_seed);
    std::vector<ReplicationResult> results(replications);
    parallel_for(replications, [&](std::size_t i) {
        const SimulatedPath path = simulate(scenario, pool, scenario_seed, i);
        results[i] = score(path, options);
    });
    return aggregate(scenario, std::move(results));
}

std::vector<Scenario> comparison_scenarios(const Scenario& base)
{
    const std::array<std::pair<double, double>, 5> settings{
        {{0.6, 0.36}, {0.6, 0.74}, {0.6, 0.64}, {1.0, 0.36}, {0.4, 0.34}}};
    std::vector<Scenario> out;
    for (const auto& [sigma, p] : settings) {
        Scenario s = base;
        s.sigma_cm = sigma;
        s.target_p = p;
        s.stationary = false;
        out.push_back(s);
    }
    return out;
}

Scenario anesthetized_scenario(const Scenario& base, double sigma_cm, std::size_t n_frames)
{
    Scenario s = base;
    s.sigma_cm = sigma_cm;
    s.n_frames = n_frames;
    s.stationary = true;
    s.outlier_rate = 0.0;
    s.target_p = 0.0;
    return s;
}

OutlierScore score_outliers(const SimulatedPath& path, const kinematics::KinematicSeries& lowess)
{
    OutlierScore s;
    const std::size_t n = lowess.size();
    std::vector<bool> injected(n, false);
    for (std::size_t i : path.observed.outliers)
        injected[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
        const bool flagged = lowess.outlier_x[i] || lowess.outlier_y[i];
        if (injected[i]) {
            ++s.injected;
            s.detected += flagged ? 1 : 0;
        } else {
            ++s.clean;
            s.false_flags += flagged ? 1 : 0;
        }
    }
    return s;
}

} // namespace pathforge::sim
