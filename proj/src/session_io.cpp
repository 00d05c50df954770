#include "pathforge/session_io.hpp"

#include "pathforge/error.hpp"
#include "pathforge/parallel.hpp"
#include "pathforge/simd.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pathforge::io {

namespace fs = std::filesystem;

namespace {

std::string_view strip_cr(std::string_view s)
{
    if (!s.empty() && s.back() == '\r')
        s.remove_suffix(1);
    return s;
}

std::string at_line(std::string_view source, std::size_t line)
{
    return std::string(source) + ":" + std::to_string(line) + ": ";
}

template <class T>
bool parse_field(std::string_view& rest, T& out)
{
    const auto comma = rest.find(',');
    std::string_view field = rest.substr(0, comma);
    while (!field.empty() && field.front() == ' ')
        field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ')
        field.remove_suffix(1);
    if (field.empty())
        return false;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        return false;
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    return true;
}

double snap_fps(double fps)
{
    const double snapped = std::round(fps * 1000.0) / 1000.0;
    return std::abs(fps - snapped) <= 1e-6 ? snapped : fps;
}

std::string cell(double v)
{
    return format_result(v);
}

} // namespace

RawPath parse_session(std::string_view text, std::string_view source, double default_fps, double grid_cm)
{
    RawPath path;
    path.grid_cm = grid_cm;
    std::size_t lineno = 0;
    bool header = false;
    double step = 0.0;

    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = strip_cr(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (line.empty())
            continue;
        if (!header) {
            if (line != "frame,t,x,y")
                throw DataError(at_line(source, lineno) + "expected header 'frame,t,x,y', got '" + std::string(line) + "'");
            header = true;
            continue;
        }

        std::string_view rest = line;
        std::int64_t frame = 0;
        double t = 0.0, x = 0.0, y = 0.0;
        if (!parse_field(rest, frame) || !parse_field(rest, t) || !parse_field(rest, x) || !parse_field(rest, y) ||
            !rest.empty())
            throw DataError(at_line(source, lineno) + "expected four numeric fields frame,t,x,y");
        if (!std::isfinite(t) || !std::isfinite(x) || !std::isfinite(y))
            throw DataError(at_line(source, lineno) + "non-finite value");

        const std::size_t n = path.size();
        if (n > 0 && frame <= path.frames.back())
            throw DataError(at_line(source, lineno) + "frame " + std::to_string(frame) +
                            " does not increase (previous " + std::to_string(path.frames.back()) + ")");
        if (n == 1) {
            step = t - path.t[0];
            if (!(step > 0.0))
                throw DataError(at_line(source, lineno) + "time does not increase");
        } else if (n > 1 && std::abs(t - path.t.back() - step) > 1e-6) {
            throw DataError(at_line(source, lineno) + "irregular time spacing");
        }
        path.frames.push_back(frame);
        path.t.push_back(t);
        path.x.push_back(x);
        path.y.push_back(y);
    }
    if (!header)
        throw DataError(std::string(source) + ": empty input, expected header 'frame,t,x,y'");
    if (path.size() == 0)
        throw DataError(std::string(source) + ": no data rows");

    path.fps = path.size() > 1 ? snap_fps(static_cast<double>(path.size() - 1) / (path.t.back() - path.t.front()))
                               : default_fps;
    return path;
}

RawPath read_session(const fs::path& file, double default_fps, double grid_cm)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_session(text, file.string(), default_fps, grid_cm);
}

void write_session(std::ostream& out, const RawPath& path)
{
    out << "frame,t,x,y\n";
    for (std::size_t i = 0; i < path.size(); ++i)
        out << path.frames[i] << ',' << format_exact(path.t[i]) << ',' << format_exact(path.x[i]) << ','
            << format_exact(path.y[i]) << '\n';
}

void write_smoothed(std::ostream& out, const std::vector<std::int64_t>& frames,
                    const kinematics::KinematicSeries& s, const rrm::ArrestMask& mask)
{
    out << "frame,xhat,yhat,vx,vy,ax,ay,speed,arrest\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << frames[i] << ',' << cell(s.x[i]) << ',' << cell(s.y[i]) << ',' << cell(s.vx[i]) << ','
            << cell(s.vy[i]) << ',' << cell(s.ax[i]) << ',' << cell(s.ay[i]) << ',' << cell(s.speed[i]) << ','
            << (mask[i] ? 1 : 0) << '\n';
}

void write_arrests(std::ostream& out, const std::vector<std::int64_t>& frames, const rrm::ArrestMask& mask)
{
    out << "start,end,frames\n";
    for (const rrm::Run& r : rrm::true_runs(mask.frames))
        out << frames[r.start] << ',' << frames[r.end] << ',' << r.end - r.start + 1 << '\n';
}

void write_segments(std::ostream& out, const std::vector<std::int64_t>& frames, const pipeline::SegmentList& list)
{
    out << "start,end,kind,max_speed\n";
    for (const pipeline::Segment& s : list.segments)
        out << frames[s.start] << ',' << frames[s.end] << ',' << pipeline::to_string(s.kind) << ','
            << cell(s.max_speed) << '\n';
}

void write_endpoints(std::ostream& out, const pipeline::EndpointSummary& s)
{
    out << "total_distance_m,proportion_arrest,mean_speed_cm_s,arrest_segments,lingering_segments,"
           "progression_segments,lingering_episodes\n";
    out << cell(s.total_distance_m) << ',' << cell(s.proportion_arrest) << ',' << cell(s.mean_speed_cm_s) << ','
        << s.arrest_segments << ',' << s.lingering_segments << ',' << s.progression_segments << ','
        << s.lingering_episodes << '\n';
}

void write_boundary(std::ostream& out, const arena::BoundaryEstimate& b)
{
    out << "# center " << cell(b.center_x) << ' ' << cell(b.center_y) << '\n';
    out << "angle_rad,radius_cm\n";
    for (std::size_t i = 0; i < b.curve.alphas.size(); ++i)
        out << cell(b.curve.alphas[i]) << ',' << cell(b.curve.radius[i]) << '\n';
}

void write_wall_distance(std::ostream& out, const std::vector<std::int64_t>& frames, std::span<const double> xs,
                         std::span<const double> ys, const arena::BoundaryEstimate& b)
{
    out << "frame,angle_rad,distance_cm\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const arena::PolarSample p = arena::to_polar(xs[i], ys[i], b.center_x, b.center_y);
        out << frames[i] << ',' << cell(p.theta) << ',';
        if (b.curve.covers(p.theta))
            out << cell(arena::distance_from_wall(xs[i], ys[i], b));
        out << '\n';
    }
}

arena::BoundaryEstimate read_boundary(const fs::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw DataError("cannot open " + file.string());
    arena::BoundaryEstimate b;
    bool have_center = false, have_header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view text = strip_cr(line);
        if (text.empty())
            continue;
        if (text.starts_with("# center ")) {
            std::istringstream s{std::string(text.substr(9))};
            if (!(s >> b.center_x >> b.center_y))
                throw DataError(at_line(file.string(), lineno) + "malformed center line");
            have_center = true;
            continue;
        }
        if (text.starts_with('#'))
            continue;
        if (!have_header) {
            if (text != "angle_rad,radius_cm")
                throw DataError(at_line(file.string(), lineno) + "expected header 'angle_rad,radius_cm'");
            have_header = true;
            continue;
        }
        double a = 0.0, r = 0.0;
        std::string_view rest = text;
        if (!parse_field(rest, a) || !parse_field(rest, r) || !rest.empty())
            throw DataError(at_line(file.string(), lineno) + "expected angle_rad,radius_cm");
        b.curve.alphas.push_back(a);
        b.curve.radius.push_back(r);
    }
    if (!have_center || b.curve.alphas.size() < 2)
        throw DataError(file.string() + ": boundary file needs a center line and at least two rows");
    b.curve.covered.assign(b.curve.alphas.size(), true);
    return b;
}

void write_replications(std::ostream& out, const std::vector<sim::SimulationMetrics>& runs)
{
    out << "config,sigma_cm,target_p,replication,theta_m,p";
    for (sim::Method m : sim::kMethods)
        out << ",theta_" << sim::to_string(m);
    for (sim::Method m : sim::kMethods)
        out << ",p_" << sim::to_string(m);
    out << '\n';
    for (std::size_t c = 0; c < runs.size(); ++c)
        for (const sim::ReplicationResult& r : runs[c].replications) {
            out << c + 1 << ',' << cell(runs[c].scenario.sigma_cm) << ','
                << cell(runs[c].scenario.stationary ? 0.0 : runs[c].scenario.target_p) << ',' << r.replication
                << ',' << cell(r.theta_m) << ',' << cell(r.p);
            for (double v : r.theta_hat_m)
                out << ',' << cell(v);
            for (double v : r.p_hat)
                out << ',' << cell(v);
            out << '\n';
        }
}

void write_metrics(std::ostream& out, const std::vector<sim::SimulationMetrics>& runs)
{
    out << "config,sigma_cm,target_p,replications,mean_theta_m,sd_theta_m,mean_p,method,mean_theta_hat_m,"
           "sd_theta_hat_m,mse_theta,mean_p_hat,sd_p_hat,mse_p\n";
    for (std::size_t c = 0; c < runs.size(); ++c) {
        const sim::SimulationMetrics& m = runs[c];
        for (sim::Method method : sim::kMethods) {
            const sim::MethodAggregate& a = m[method];
            out << c + 1 << ',' << cell(m.scenario.sigma_cm) << ','
                << cell(m.scenario.stationary ? 0.0 : m.scenario.target_p) << ',' << m.replications.size() << ','
                << cell(m.mean_theta_m) << ',' << cell(m.sd_theta_m) << ',' << cell(m.mean_p) << ','
                << sim::to_string(method) << ',' << cell(a.mean_theta_m) << ',' << cell(a.sd_theta_m) << ','
                << cell(a.mse_theta) << ',' << cell(a.mean_p) << ',' << cell(a.sd_p) << ',' << cell(a.mse_p)
                << '\n';
        }
    }
}

std::vector<MseRow> mse_table(long reps, std::uint64_t seed)
{
    using radius::Estimator;
    using radius::Law;
    std::vector<radius::RadialModel> models;
    const std::vector<std::pair<long, long>> sizes{{1, 1}, {2, 5}, {10, 10}};
    for (const auto& [n, N] : sizes) {
        models.push_back({125.0, n, N, Law::Uniform, 2.0, 1.0});
        models.push_back({10.0, n, N, Law::Power, 3.0, 1.0});
        models.push_back({1.0, n, N, Law::Power, 8.0, 1.0});
    }
    models.push_back({125.0, 100, 1, Law::Uniform, 2.0, 1.0});

    std::vector<MseRow> rows;
    std::uint64_t stream = 0;
    for (const radius::RadialModel& model : models)
        for (Estimator e : {Estimator::Max, Estimator::Corrected}) {
            MseRow row;
            row.model = model;
            row.estimator = e;
            rows.push_back(row);
        }
    radius::RadialModel mean_model{125.0, 100, 1, Law::Uniform, 2.0, 1.0};
    rows.push_back({mean_model, Estimator::BoundaryMean, 0.0, {}, false});

    for (MseRow& row : rows) {
        row.closed_form = radius::mse_closed_form(row.model, row.estimator);
        row.mc = radius::monte_carlo_mse(row.model, row.estimator, reps, seed * 7919ULL + stream++);
        row.pass = std::abs(row.mc.mse - row.closed_form) <= 3.0 * row.mc.se;
    }
    return rows;
}

void write_mse_table(std::ostream& out, const std::vector<MseRow>& rows)
{
    out << "law,power,R,n,N,sigma,estimator,closed_form,empirical,se,reps,pass\n";
    for (const MseRow& r : rows) {
        out << (r.model.law == radius::Law::Uniform ? "uniform" : "power") << ','
            << (r.model.law == radius::Law::Uniform ? std::string() : cell(r.model.power)) << ',' << cell(r.model.R)
            << ',' << r.model.n << ',' << r.model.N << ',' << cell(r.model.sigma) << ','
            << radius::to_string(r.estimator) << ',' << cell(r.closed_form) << ',' << cell(r.mc.mse) << ','
            << cell(r.mc.se) << ',' << r.mc.reps << ',' << (r.pass ? "pass" : "fail") << '\n';
    }
}

void write_manifest(std::ostream& out, const SessionConfig& config, std::string_view command, std::string_view input)
{
    out << "# pathforge run manifest\n";
    out << "# command=" << command << '\n';
    if (!input.empty())
        out << "# input=" << input << '\n';
    out << "# simd=" << simd::level_name(simd::active_level()) << '\n';
    write_config(out, config);
}

void write_file(const fs::path& path, std::string_view text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw Error("write failed for " + path.string());
}

Bundle run_pipeline(const SessionConfig& config, const RawPath& session, const fs::path& out_dir, const Stages& stages,
                    std::string_view command, std::string_view input)
{
    Bundle bundle;
    bundle.dir = out_dir;
    const bool existed = fs::exists(out_dir);

    auto emit = [&](const char* name, auto&& writer) {
        std::ostringstream s;
        writer(s);
        const fs::path file = out_dir / name;
        write_file(file, s.str());
        bundle.files.push_back(file);
    };

    try {
        bundle.result = pipeline::run_session(session, config.pipeline);
        const pipeline::SessionResult& r = bundle.result;
        if (stages.smoothed)
            emit("smoothed.csv", [&](std::ostream& o) { write_smoothed(o, session.frames, r.combined, r.mask); });
        if (stages.arrests)
            emit("arrests.csv", [&](std::ostream& o) { write_arrests(o, session.frames, r.mask); });
        if (stages.segments)
            emit("segments.csv", [&](std::ostream& o) { write_segments(o, session.frames, r.segments); });
        if (stages.endpoints)
            emit("endpoints.csv", [&](std::ostream& o) { write_endpoints(o, r.summary); });

        if (config.boundary_enabled && (stages.boundary || stages.wall_distance)) {
            std::vector<double> xs, ys;
            pipeline::progression_points(r.combined, r.segments, xs, ys);
            try {
                if (xs.empty())
                    throw DataError("no progression locations");
                bundle.boundary = arena::estimate_boundary(xs, ys, config.boundary);
            } catch (const DataError& e) {
                bundle.warnings.push_back(std::string("boundary: not estimated: ") + e.what());
            }
            if (bundle.boundary) {
                for (const std::string& w : bundle.boundary->warnings)
                    bundle.warnings.push_back("boundary: " + w);
                if (stages.boundary)
                    emit("boundary.csv", [&](std::ostream& o) { write_boundary(o, *bundle.boundary); });
                if (stages.wall_distance)
                    emit("wall_distance.csv", [&](std::ostream& o) {
                        write_wall_distance(o, session.frames, r.combined.x, r.combined.y, *bundle.boundary);
                    });
            }
        }
        emit("manifest.txt", [&](std::ostream& o) {
            write_manifest(o, config, command, input);
            for (const std::string& w : bundle.warnings)
                o << "# warning=" << w << '\n';
        });
    } catch (...) {
        std::error_code ec;
        for (const fs::path& f : bundle.files)
            fs::remove(f, ec);
        if (!existed)
            fs::remove(out_dir, ec);
        throw;
    }
    return bundle;
}

std::vector<Bundle> run_batch(const SessionConfig& config, const std::vector<fs::path>& inputs,
                              const fs::path& out_root, const Stages& stages)
{
    std::vector<Bundle> bundles(inputs.size());
    parallel_for(inputs.size(), [&](std::size_t i) {
        const RawPath session = read_session(inputs[i], config.fps, config.grid_cm);
        bundles[i] = run_pipeline(config, session, out_root / inputs[i].stem(), stages, "batch",
                                  inputs[i].string());
    });
    return bundles;
}

} // namespace pathforge::io
