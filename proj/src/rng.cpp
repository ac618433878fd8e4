#include "far/rng.hpp"
#include "far/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace far {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0)
        throw ArgumentError("Rng::below: bound must be positive");
    // Reject the top partial bucket so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = next();
    while (x >= limit)
        x = next();
    return x % n;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace far
