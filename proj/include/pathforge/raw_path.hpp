#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pathforge {

/// Recorded locations of one tracking session, equally spaced in time.
struct RawPath {
    std::vector<std::int64_t> frames;
    std::vector<double> t; ///< seconds
    std::vector<double> x; ///< cm
    std::vector<double> y; ///< cm
    double fps = 25.0;
    double grid_cm = 1.0;

    std::size_t size() const { return frames.size(); }

    friend bool operator==(const RawPath&, const RawPath&) = default;
};

/// Throws DataError unless frames strictly increase, timestamps are equally
/// spaced at 1/fps (within `spacing_tolerance` seconds) and coordinates are finite.
void validate(const RawPath& path, double spacing_tolerance = 1e-9);

} // namespace pathforge
