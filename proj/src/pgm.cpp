#include "far/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace far {

std::vector<unsigned char> encode_pgm(std::span<const double> values, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0 || values.size() != rows * cols)
        throw ShapeError("pgm: " + std::to_string(values.size()) + " values for " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    const std::string head = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
    std::vector<unsigned char> out(head.begin(), head.end());
    double peak = 0.0;
    for (double v : values)
        peak = std::max(peak, std::abs(v));
    for (double v : values) {
        const double level = peak > 0.0 ? std::round(255.0 * std::abs(v) / peak) : 0.0;
        out.push_back(static_cast<unsigned char>(std::clamp(level, 0.0, 255.0)));
    }
    return out;
}

void write_pgm(std::span<const double> values, std::size_t rows, std::size_t cols, const std::filesystem::path &path) {
    const auto bytes = encode_pgm(values, rows, cols);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_mask_pgm(const DynamicMask &mask, std::size_t channel, const std::filesystem::path &path) {
    if (channel >= mask.channels())
        throw ArgumentError("mask channel out of range");
    const std::size_t plane = mask.rows() * mask.cols();
    write_pgm(mask.values().data().subspan(channel * plane, plane), mask.rows(), mask.cols(), path);
}

void write_frame_pgm(const RTensor &x, std::size_t channel, std::size_t frame, const std::filesystem::path &path) {
    const Shape4 s = x.shape4();
    if (channel >= s.c || frame >= s.t)
        throw ArgumentError("frame index out of range");
    write_pgm(x.data().subspan(s.index(channel, frame, 0, 0), s.plane()), s.h, s.w, path);
}

} // namespace far
