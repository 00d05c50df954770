#include "pathforge/raw_path.hpp"

#include "pathforge/error.hpp"

#include <cmath>
#include <string>

namespace pathforge {

void validate(const RawPath& path, double spacing_tolerance)
{
    const std::size_t n = path.size();
    if (path.t.size() != n || path.x.size() != n || path.y.size() != n)
        throw DataError("raw path columns have different lengths");
    if (!(path.fps > 0.0) || !std::isfinite(path.fps))
        throw DataError("fps must be positive");
    if (!(path.grid_cm > 0.0))
        throw DataError("grid size must be positive");

    const double step = 1.0 / path.fps;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(path.x[i]) || !std::isfinite(path.y[i]) || !std::isfinite(path.t[i]))
            throw DataError("non-finite value at row " + std::to_string(i));
        if (i == 0)
            continue;
        if (path.frames[i] <= path.frames[i - 1])
            throw DataError("frame indices not strictly increasing at row " + std::to_string(i));
        if (std::abs(path.t[i] - path.t[i - 1] - step) > spacing_tolerance)
            throw DataError("irregular time spacing at row " + std::to_string(i));
    }
}

} // namespace pathforge
