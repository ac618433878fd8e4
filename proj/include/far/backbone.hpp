#pragma once

#include <cstdint>
#include <vector>

#include "far/tensor.hpp"

namespace far {

/// One 3-D convolution with zero padding kernel/2 on every side, followed by
/// ReLU. Output extent per axis is ceil(n / stride) for odd kernels.
struct ConvLayer {
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    std::size_t kernel = 3;
    std::size_t stride_t = 1;
    std::size_t stride_s = 1;
    /// [out][in][kt][kh][kw], row-major.
    std::vector<double> weights;
    std::vector<double> bias;
};

RTensor conv3d_relu(const RTensor &x, const ConvLayer &layer);

struct StemConfig {
    /// Input, hidden and output channel counts of the two blocks.
    std::vector<std::size_t> widths{3, 16, 48};
    std::size_t kernel = 3;
    std::uint64_t seed = 0;
};

/// Block 1 strides (t 1, space 2), block 2 strides (t 2, space 2): the
/// output is (C_mid, ceil(T/2), ceil(H/4), ceil(W/4)). Weights are uniform in
/// +-sqrt(6 / fan_in) from Rng(seed); biases are zero.
std::vector<ConvLayer> make_stem(const StemConfig &cfg);

/// Requires t >= 2 and h, w >= 4.
RTensor stem_forward(const RTensor &clip, const std::vector<ConvLayer> &layers);
RTensor stem_forward(const RTensor &clip, const StemConfig &cfg);

Shape4 stem_output_shape(const Shape4 &input, std::size_t out_channels);

} // namespace far
