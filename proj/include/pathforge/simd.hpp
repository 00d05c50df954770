#pragma once
// Data-parallel inner loops with a scalar reference and vectorized variants.
//
// Every kernel has a `scalar::` reference implementation. The free functions in
// `pathforge::simd` dispatch at runtime to the widest variant the CPU supports.
// Results of the vectorized variants agree with the scalar reference up to
// floating-point reassociation (max_value is exact).

#include <cstddef>
#include <span>
#include <string_view>

namespace pathforge::simd {

enum class Level { Scalar, Avx2 };

/// Weighted power sums over one regression window.
///   w[0..4]  = sum w_j * t_j^p, p = 0..4
///   wy[0..2] = sum w_j * t_j^p * y_j, p = 0..2
struct Moments {
    double w[5] = {0, 0, 0, 0, 0};
    double wy[3] = {0, 0, 0};
};

namespace scalar {
Moments weighted_moments(std::span<const double> t, std::span<const double> kernel,
                         std::span<const double> robust, std::span<const double> y);
double path_length(std::span<const double> x, std::span<const double> y);
double max_value(std::span<const double> v);
} // namespace scalar

#if defined(PATHFORGE_HAVE_AVX2)
namespace avx2 {
Moments weighted_moments(std::span<const double> t, std::span<const double> kernel,
                         std::span<const double> robust, std::span<const double> y);
double path_length(std::span<const double> x, std::span<const double> y);
double max_value(std::span<const double> v);
} // namespace avx2
#endif

/// Best level supported by this CPU and build.
Level detected_level();
/// Level currently used by the dispatching functions below.
Level active_level();
/// Override the dispatch level; requests above detected_level() are clamped.
void set_level(Level level);
std::string_view level_name(Level level);

/// Moments of the weights kernel[j] * robust[j] at abscissae t[j] with values y[j].
Moments weighted_moments(std::span<const double> t, std::span<const double> kernel,
                         std::span<const double> robust, std::span<const double> y);

/// Sum over i >= 1 of sqrt((x[i]-x[i-1])^2 + (y[i]-y[i-1])^2).
double path_length(std::span<const double> x, std::span<const double> y);

/// Largest element; v must be nonempty.
double max_value(std::span<const double> v);

} // namespace pathforge::simd
