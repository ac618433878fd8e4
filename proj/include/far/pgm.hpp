#pragma once

#include <filesystem>
#include <vector>

#include "far/tensor.hpp"

namespace far {

/// Binary greyscale "P5" image, maxval 255. `values` is rows x cols row-major;
/// pixels are |v| / max|v| scaled to 0..255 (all black when the max is zero).
std::vector<unsigned char> encode_pgm(std::span<const double> values, std::size_t rows, std::size_t cols);
void write_pgm(std::span<const double> values, std::size_t rows, std::size_t cols, const std::filesystem::path &path);

/// One image per channel of a (c,h,w) mask, each max-normalized on its own.
void write_mask_pgm(const DynamicMask &mask, std::size_t channel, const std::filesystem::path &path);

/// Frame `t` of channel `c` of a (c,t,h,w) tensor.
void write_frame_pgm(const RTensor &x, std::size_t channel, std::size_t frame, const std::filesystem::path &path);

} // namespace far
