#pragma once
// Mean squared error of maximum-based radius estimators for a circular arena,
// the boundary-measurement alternative, and a Monte-Carlo check of both.

#include <cstdint>
#include <span>
#include <string_view>

namespace pathforge::radius {

enum class Law { Uniform, Power };

/// Radial distances Z = R * U of n sectors with N samples each; U is uniform on
/// [0, 1] or has density (p+1) u^p. `sigma` is the noise SD of direct
/// boundary measurements.
struct RadialModel {
    double R = 125.0;
    long n = 1;
    long N = 1;
    Law law = Law::Uniform;
    double power = 2.0;
    double sigma = 1.0;

    /// Throws DomainError when R <= 0, n < 1, N < 1 or the power law has p <= 1.
    void validate() const;
    long total() const { return n * N; }
    /// nN for the uniform law, nN(p+1) for the power law.
    double effective_count() const;
};

enum class Estimator {
    Max,           ///< largest observed radius
    Corrected,     ///< max scaled by (m+1)/m
    BoundaryMean,  ///< mean of n noisy boundary measurements
};

std::string_view to_string(Estimator e);

struct Estimates {
    double max = 0.0;
    double corrected = 0.0;
};

/// Max and bias-corrected max of `samples` under `model` (only the law and its
/// exponent are used; the sample count is taken from the span). The power law
/// accepts any exponent > 0 here.
Estimates estimators(std::span<const double> samples, const RadialModel& model);

/// MSE of the max for an effective sample count m: R^2 * 2 / ((m+1)(m+2)).
double max_mse(double R, double m);
/// MSE of the corrected max: R^2 / (m (m+2)).
double corrected_mse(double R, double m);

/// Exact MSE in cm^2.
double mse_closed_form(const RadialModel& model, Estimator e);

struct Advantage {
    double threshold = 0.0; ///< N (nN + 2)
    double ratio = 0.0;     ///< R^2 / sigma^2
    bool behavioral_wins = false; ///< ratio < threshold
};

/// Whether the corrected max beats the boundary-measurement mean. Requires sigma > 0.
Advantage advantage_threshold(const RadialModel& model);

struct MonteCarloResult {
    double mse = 0.0;
    double se = 0.0;        ///< SD of squared errors / sqrt(reps)
    double mean = 0.0;      ///< mean of the estimates
    double mean_se = 0.0;   ///< SD of the estimates / sqrt(reps)
    long reps = 0;
};

/// Empirical MSE from `reps` (at least 1000) seeded draws; deterministic for a
/// given seed regardless of thread count.
MonteCarloResult monte_carlo_mse(const RadialModel& model, Estimator e, long reps, std::uint64_t seed);

} // namespace pathforge::radius
