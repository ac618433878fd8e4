#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "far/tensor.hpp"

namespace far {

// FTF tensor file, little-endian, no padding:
//
//   offset 0   "FTF1"
//          4   dtype   u8   0 = real64, 1 = complex (re, im) pairs of f64
//          5   rank    u8   1..4
//          6   reserved u16 = 0
//          8   rank x u32 extents, slowest axis first
//          ..  payload: IEEE-754 doubles, row-major
using AnyTensor = std::variant<RTensor, CTensor>;

std::vector<unsigned char> encode_ftf(const RTensor &t);
std::vector<unsigned char> encode_ftf(const CTensor &t);
AnyTensor decode_ftf(const std::vector<unsigned char> &bytes);

void write_ftf(const RTensor &t, const std::filesystem::path &path);
void write_ftf(const CTensor &t, const std::filesystem::path &path);
AnyTensor read_ftf(const std::filesystem::path &path);

/// read_ftf that requires a real payload.
RTensor read_ftf_real(const std::filesystem::path &path);

} // namespace far
