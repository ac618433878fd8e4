#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "far/tensor.hpp"

namespace far {

/// Frame indices for randomly offset uniform sampling.
struct SamplePlan {
    std::size_t total = 0;
    std::size_t want = 0;
    std::size_t step = 0;   // floor(total / want)
    std::size_t offset = 0; // uniform in [0, max(step, 1))
    /// Set when total < want: indices are i mod total instead.
    bool cycled = false;
    std::vector<std::size_t> indices;

    /// `total,want,step,offset,cycled,indices` with indices separated by ';'.
    static std::string csv_header();
    std::string csv_row() const;
};

/// step = floor(total / want), offset drawn with Rng(seed).below(max(step, 1)),
/// indices[i] = offset + i * step. Throws ArgumentError when either count is 0.
SamplePlan plan_samples(std::size_t total, std::size_t want, std::uint64_t seed);

/// Frames `plan.indices` of a (c,t,h,w) tensor with t == plan.total.
RTensor gather_frames(const RTensor &x, const SamplePlan &plan);

} // namespace far
