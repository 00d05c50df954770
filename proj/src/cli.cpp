#include "pathforge/cli.hpp"

#include "pathforge/config.hpp"
#include "pathforge/error.hpp"
#include "pathforge/session_io.hpp"
#include "pathforge/parallel.hpp"
#include "pathforge/simd.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace pathforge::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config_file;
    std::vector<std::string> inputs;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* sub, Common& c, bool needs_input)
{
    sub->add_option("--config", c.config_file, "Configuration file (key=value lines)")->check(CLI::ExistingFile);
    if (needs_input)
        sub->add_option("--input,-i", c.inputs, "Session CSV file(s) with columns frame,t,x,y")
            ->required()
            ->check(CLI::ExistingFile);
    sub->add_option("--out,-o", c.out, "Output directory");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--set", c.sets, "Override a config key: key=value (repeatable)");
    for (const std::string& key : config_keys()) {
        if (key == "seed")
            continue;
        sub->add_option_function<std::string>("--" + key, [&c, key](const std::string& v) { c.overrides[key] = v; },
                                              "Override " + key);
    }
}

SessionConfig resolve(const Common& c)
{
    SessionConfig config = c.config_file.empty() ? SessionConfig{} : load_config(c.config_file);
    for (const auto& [key, value] : c.overrides)
        set_value(config, key, value);
    for (const std::string& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        set_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed)
        config.seed = *c.seed;
    config.validate();
    return config;
}

std::string fixed(double v, int digits)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

void print_summary(std::ostream& out, const fs::path& input, const io::Bundle& b)
{
    const pipeline::EndpointSummary& s = b.result.summary;
    out << input.string() << ": distance " << fixed(s.total_distance_m, 3) << " m, arrest proportion "
        << fixed(s.proportion_arrest, 4) << ", mean speed " << fixed(s.mean_speed_cm_s, 3) << " cm/s, segments "
        << s.arrest_segments << " arrest / " << s.lingering_segments << " lingering / " << s.progression_segments
        << " progression\n";
    if (b.boundary)
        out << "  boundary center (" << fixed(b.boundary->center_x, 3) << ", " << fixed(b.boundary->center_y, 3)
            << ") cm\n";
    for (const std::string& w : b.warnings)
        out << "  warning: " << w << '\n';
}

int session_command(const std::string& name, const Common& c, const io::Stages& stages, const std::string& boundary_file,
                    std::ostream& out)
{
    SessionConfig config = resolve(c);
    if (!boundary_file.empty())
        config.boundary_enabled = false;
    const bool batch = c.inputs.size() > 1;
    std::vector<io::Bundle> bundles(c.inputs.size());
    std::vector<RawPath> sessions(c.inputs.size());
    parallel_for(c.inputs.size(), [&](std::size_t i) {
        sessions[i] = io::read_session(c.inputs[i], config.fps, config.grid_cm);
        const fs::path dir = batch ? fs::path(c.out) / fs::path(c.inputs[i]).stem() : fs::path(c.out);
        bundles[i] = io::run_pipeline(config, sessions[i], dir, stages, name, c.inputs[i]);
        if (!boundary_file.empty()) {
            const arena::BoundaryEstimate b = io::read_boundary(boundary_file);
            std::ostringstream s;
            io::write_wall_distance(s, sessions[i].frames, bundles[i].result.combined.x,
                                    bundles[i].result.combined.y, b);
            io::write_file(dir / "wall_distance.csv", s.str());
        }
    });
    for (std::size_t i = 0; i < bundles.size(); ++i)
        print_summary(out, c.inputs[i], bundles[i]);
    return 0;
}

void print_metrics(std::ostream& out, const std::vector<sim::SimulationMetrics>& runs)
{
    out << "distance traveled (m): mean [MSE]\n";
    out << std::left << std::setw(10) << "config";
    for (std::size_t c = 0; c < runs.size(); ++c)
        out << std::setw(22) << ("s=" + fixed(runs[c].scenario.sigma_cm, 1) + " p=" + fixed(runs[c].mean_p, 2));
    out << '\n' << std::setw(10) << "true";
    for (const auto& r : runs)
        out << std::setw(22) << fixed(r.mean_theta_m, 2);
    out << '\n';
    for (sim::Method m : sim::kMethods) {
        out << std::setw(10) << sim::to_string(m);
        for (const auto& r : runs)
            out << std::setw(22) << (fixed(r[m].mean_theta_m, 2) + " [" + format_result(r[m].mse_theta) + "]");
        out << '\n';
    }
    out << "arrest proportion: mean [MSE]\n";
    for (sim::Method m : sim::kMethods) {
        out << std::setw(10) << sim::to_string(m);
        for (const auto& r : runs)
            out << std::setw(22) << (fixed(r[m].mean_p, 3) + " [" + format_result(r[m].mse_p) + "]");
        out << '\n';
    }
    out << std::right;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Path smoothing, arrest detection, arena boundary estimation and simulation for open-field tracking"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pathforge 1.0.0");

    Common c;
    io::Stages stages;
    std::string boundary_file;
    std::size_t replication = 0;
    bool anesthetized = false;
    long reps = 100000;

    auto stage_only = [](bool smoothed, bool arrests, bool segments, bool endpoints, bool boundary, bool wall) {
        io::Stages s;
        s.smoothed = smoothed;
        s.arrests = arrests;
        s.segments = segments;
        s.endpoints = endpoints;
        s.boundary = boundary;
        s.wall_distance = wall;
        return s;
    };

    struct SessionSub {
        const char* name;
        const char* help;
        io::Stages stages;
    };
    const std::vector<SessionSub> session_subs{
        {"smooth", "Combined smoother: smoothed.csv with positions, velocities, accelerations and arrest flags",
         stage_only(true, false, false, false, false, false)},
        {"arrests", "Arrest intervals detected by the repeated running median", stage_only(false, true, false, false, false, false)},
        {"segments", "Arrest / lingering / progression segments", stage_only(false, false, true, false, false, false)},
        {"endpoints", "Distance traveled, arrest proportion and mean speed", stage_only(false, false, false, true, false, false)},
        {"boundary", "Arena boundary curve and center from progression locations",
         stage_only(false, false, false, false, true, false)},
        {"wall-distance", "Radial distance from the estimated (or given) boundary per frame",
         stage_only(false, false, false, false, false, true)},
    };
    std::map<CLI::App*, const SessionSub*> session_apps;
    for (const SessionSub& s : session_subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        add_common(sub, c, true);
        if (std::string_view(s.name) == "wall-distance")
            sub->add_option("--boundary", boundary_file, "Boundary CSV to measure against instead of estimating one")
                ->check(CLI::ExistingFile);
        session_apps[sub] = &s;
    }

    CLI::App* simulate = app.add_subcommand("simulate", "Write one simulated session (observed and truth)");
    add_common(simulate, c, false);
    simulate->add_option("--replication", replication, "Replication index within the seed");
    simulate->add_flag("--anesthetized", anesthetized, "Stationary animal without outliers");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Score raw, LOWESS, RRM and combined smoothers on simulations");
    add_common(evaluate, c, false);
    evaluate->add_flag("--anesthetized", anesthetized, "Stationary-animal ensemble instead of the five moving configs");

    CLI::App* mse = app.add_subcommand("mse-table", "Closed-form vs Monte-Carlo MSE of the radius estimators");
    add_common(mse, c, false);
    mse->add_option("--reps", reps, "Monte-Carlo replications per model")->check(CLI::Range(1000L, 100000000L));

    CLI::App* validate = app.add_subcommand("validate-mse", "Exit 0 only if every Monte-Carlo MSE is within 3 SE");
    add_common(validate, c, false);
    validate->add_option("--reps", reps, "Monte-Carlo replications per model")->check(CLI::Range(1000L, 100000000L));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        for (const auto& [sub, info] : session_apps)
            if (sub->parsed())
                return session_command(info->name, c, info->stages, boundary_file, out);

        const SessionConfig config = resolve(c);
        const fs::path dir(c.out);

        if (simulate->parsed()) {
            sim::Scenario scenario = config.scenario;
            if (anesthetized)
                scenario = sim::anesthetized_scenario(scenario, config.anesthetized_sigma_cm,
                                                      config.anesthetized_n_frames);
            const auto pool = sim::scenario_pool(scenario, config.seed);
            const sim::SimulatedPath path = sim::simulate(scenario, pool, config.seed, replication);
            std::ostringstream obs, truth, manifest;
            io::write_session(obs, path.raw_path());
            truth << "frame,x,y,speed,arrest\n";
            for (std::size_t i = 0; i < path.truth.size(); ++i)
                truth << i << ',' << format_exact(path.truth.x[i]) << ',' << format_exact(path.truth.y[i]) << ','
                      << format_exact(path.truth.speed[i]) << ',' << (path.truth.arrest[i] ? 1 : 0) << '\n';
            io::write_manifest(manifest, config, anesthetized ? "simulate --anesthetized" : "simulate", "");
            manifest << "# replication=" << replication << '\n';
            io::write_file(dir / "session.csv", obs.str());
            io::write_file(dir / "truth.csv", truth.str());
            io::write_file(dir / "manifest.txt", manifest.str());
            out << "simulated " << path.truth.size() << " frames: distance " << fixed(path.truth.distance_cm / 100.0, 3)
                << " m, arrest proportion " << fixed(path.truth.arrest_proportion, 4) << ", "
                << path.observed.outliers.size() << " outliers\n";
            return 0;
        }

        if (evaluate->parsed()) {
            std::vector<sim::SimulationMetrics> runs;
            if (anesthetized) {
                const sim::Scenario s = sim::anesthetized_scenario(config.scenario, config.anesthetized_sigma_cm,
                                                                   config.anesthetized_n_frames);
                runs.push_back(sim::evaluate(s, config.anesthetized_replications, config.seed, config.pipeline, 0));
            } else {
                const auto scenarios = sim::comparison_scenarios(config.scenario);
                for (std::size_t i = 0; i < scenarios.size(); ++i)
                    runs.push_back(sim::evaluate(scenarios[i], config.replications, config.seed, config.pipeline, i + 1));
            }
            std::ostringstream metrics, reps_csv, manifest;
            io::write_metrics(metrics, runs);
            io::write_replications(reps_csv, runs);
            io::write_manifest(manifest, config, anesthetized ? "evaluate --anesthetized" : "evaluate", "");
            io::write_file(dir / "metrics.csv", metrics.str());
            io::write_file(dir / "replications.csv", reps_csv.str());
            io::write_file(dir / "manifest.txt", manifest.str());
            print_metrics(out, runs);
            return 0;
        }

        if (mse->parsed() || validate->parsed()) {
            const auto rows = io::mse_table(reps, config.seed);
            std::ostringstream table;
            io::write_mse_table(table, rows);
            if (mse->parsed()) {
                io::write_file(dir / "mse_table.csv", table.str());
            }
            out << table.str();
            const bool all = std::all_of(rows.begin(), rows.end(), [](const io::MseRow& r) { return r.pass; });
            if (validate->parsed()) {
                out << (all ? "all models within 3 SE\n" : "validation FAILED\n");
                return all ? 0 : 2;
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

} // namespace pathforge::cli
