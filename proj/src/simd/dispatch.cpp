#include "pathforge/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace pathforge::simd {

namespace {

Level probe()
{
#if defined(PATHFORGE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Level::Avx2;
#endif
    return Level::Scalar;
}

Level initial_level()
{
    const Level best = probe();
    // PATHFORGE_SIMD=scalar pins the reference kernels (useful for A/B runs).
    if (const char* env = std::getenv("PATHFORGE_SIMD"); env && std::string(env) == "scalar")
        return Level::Scalar;
    return best;
}

std::atomic<Level>& current()
{
    static std::atomic<Level> level{initial_level()};
    return level;
}

} // namespace

Level detected_level()
{
    static const Level level = probe();
    return level;
}

Level active_level()
{
    return current().load(std::memory_order_relaxed);
}

void set_level(Level level)
{
    if (level == Level::Avx2 && detected_level() != Level::Avx2)
        level = Level::Scalar;
    current().store(level, std::memory_order_relaxed);
}

std::string_view level_name(Level level)
{
    switch (level) {
    case Level::Avx2:
        return "avx2";
    case Level::Scalar:
        break;
    }
    return "scalar";
}

Moments weighted_moments(std::span<const double> t, std::span<const double> kernel,
                         std::span<const double> robust, std::span<const double> y)
{
#if defined(PATHFORGE_HAVE_AVX2)
    if (active_level() == Level::Avx2)
        return avx2::weighted_moments(t, kernel, robust, y);
#endif
    return scalar::weighted_moments(t, kernel, robust, y);
}

double path_length(std::span<const double> x, std::span<const double> y)
{
#if defined(PATHFORGE_HAVE_AVX2)
    if (active_level() == Level::Avx2)
        return avx2::path_length(x, y);
#endif
    return scalar::path_length(x, y);
}

double max_value(std::span<const double> v)
{
#if defined(PATHFORGE_HAVE_AVX2)
    if (active_level() == Level::Avx2)
        return avx2::max_value(v);
#endif
    return scalar::max_value(v);
}

} // namespace pathforge::simd
