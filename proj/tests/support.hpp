// Conversions between library tensors and the plain vectors the oracles use.
#pragma once

#include "far/tensor.hpp"

#include <vector>

namespace testing {

inline std::vector<double> vec(const far::RTensor &t) { return {t.data().begin(), t.data().end()}; }

inline std::vector<far::Complex> vec(const far::CTensor &t) { return {t.data().begin(), t.data().end()}; }

inline far::RTensor uniform(const far::Shape4 &s, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    return far::make_tensor(s, far::UniformFill{lo, hi, seed});
}

} // namespace testing
