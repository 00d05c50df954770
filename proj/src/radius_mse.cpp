#include "pathforge/radius_mse.hpp"

#include "pathforge/error.hpp"
#include "pathforge/parallel.hpp"
#include "pathforge/simd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace pathforge::radius {

void RadialModel::validate() const
{
    if (!(R > 0.0))
        throw DomainError("radius must be positive");
    if (n < 1 || N < 1)
        throw DomainError("sector count and samples per sector must be at least 1");
    if (law == Law::Power && !(power > 1.0))
        throw DomainError("power law requires an exponent above 1");
}

double RadialModel::effective_count() const
{
    const auto m = static_cast<double>(total());
    return law == Law::Uniform ? m : m * (power + 1.0);
}

std::string_view to_string(Estimator e)
{
    switch (e) {
    case Estimator::Max:
        return "max";
    case Estimator::Corrected:
        return "corrected";
    case Estimator::BoundaryMean:
        break;
    }
    return "boundary_mean";
}

Estimates estimators(std::span<const double> samples, const RadialModel& model)
{
    if (samples.empty())
        throw DomainError("estimators need at least one sample");
    if (model.law == Law::Power && !(model.power > 0.0))
        throw DomainError("power exponent must be positive");
    double k = static_cast<double>(samples.size());
    if (model.law == Law::Power)
        k *= model.power + 1.0;
    Estimates e;
    e.max = simd::max_value(samples);
    e.corrected = e.max * (k + 1.0) / k;
    return e;
}

double max_mse(double R, double m)
{
    return R * R * 2.0 / ((m + 1.0) * (m + 2.0));
}

double corrected_mse(double R, double m)
{
    return R * R / (m * (m + 2.0));
}

double mse_closed_form(const RadialModel& model, Estimator e)
{
    model.validate();
    const double m = model.effective_count();
    switch (e) {
    case Estimator::Max:
        return max_mse(model.R, m);
    case Estimator::Corrected:
        return corrected_mse(model.R, m);
    case Estimator::BoundaryMean:
        break;
    }
    if (!(model.sigma >= 0.0))
        throw DomainError("sigma must be nonnegative");
    return model.sigma * model.sigma / static_cast<double>(model.n);
}

Advantage advantage_threshold(const RadialModel& model)
{
    model.validate();
    if (!(model.sigma > 0.0))
        throw DomainError("sigma must be positive");
    Advantage a;
    const auto N = static_cast<double>(model.N);
    a.threshold = N * (static_cast<double>(model.total()) + 2.0);
    a.ratio = model.R * model.R / (model.sigma * model.sigma);
    a.behavioral_wins = a.ratio < a.threshold;
    return a;
}

namespace {

struct Partial {
    double sum = 0.0, sum_sq = 0.0;       // squared errors
    double est_sum = 0.0, est_sum_sq = 0.0;
};

constexpr long kChunk = 4096;

} // namespace

MonteCarloResult monte_carlo_mse(const RadialModel& model, Estimator e, long reps, std::uint64_t seed)
{
    model.validate();
    if (reps < 1000)
        throw DomainError("Monte Carlo needs at least 1000 replications");
    if (e == Estimator::BoundaryMean && !(model.sigma >= 0.0))
        throw DomainError("sigma must be nonnegative");

    const long chunks = (reps + kChunk - 1) / kChunk;
    std::vector<Partial> partials(static_cast<std::size_t>(chunks));
    const double inv_exp = model.law == Law::Power ? 1.0 / (model.power + 1.0) : 1.0;

    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> noise(0.0, model.sigma);
        const long begin = static_cast<long>(c) * kChunk;
        const long end = std::min(reps, begin + kChunk);
        std::vector<double> z(e == Estimator::BoundaryMean ? 0 : static_cast<std::size_t>(model.total()));
        Partial p;
        for (long r = begin; r < end; ++r) {
            double est;
            if (e == Estimator::BoundaryMean) {
                double s = 0.0;
                for (long i = 0; i < model.n; ++i)
                    s += model.R + noise(rng);
                est = s / static_cast<double>(model.n);
            } else {
                for (double& v : z) {
                    const double u = unif(rng);
                    v = model.R * (model.law == Law::Power ? std::pow(u, inv_exp) : u);
                }
                const Estimates ests = estimators(z, model);
                est = e == Estimator::Max ? ests.max : ests.corrected;
            }
            const double err2 = (est - model.R) * (est - model.R);
            p.sum += err2;
            p.sum_sq += err2 * err2;
            p.est_sum += est;
            p.est_sum_sq += est * est;
        }
        partials[c] = p;
    });

    Partial total;
    for (const Partial& p : partials) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        total.est_sum += p.est_sum;
        total.est_sum_sq += p.est_sum_sq;
    }
    const auto k = static_cast<double>(reps);
    MonteCarloResult out;
    out.reps = reps;
    out.mse = total.sum / k;
    out.se = std::sqrt(std::max(0.0, (total.sum_sq - k * out.mse * out.mse) / (k - 1.0)) / k);
    out.mean = total.est_sum / k;
    out.mean_se = std::sqrt(std::max(0.0, (total.est_sum_sq - k * out.mean * out.mean) / (k - 1.0)) / k);
    return out;
}

} // namespace pathforge::radius
