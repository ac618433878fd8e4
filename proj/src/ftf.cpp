#include "far/ftf.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace far {

namespace {

constexpr unsigned char kMagic[4] = {'F', 'T', 'F', '1'};
constexpr std::size_t kHeaderBytes = 8;

void put_u32(std::vector<unsigned char> &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char> &out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char *p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

double get_f64(const unsigned char *p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(v);
}

std::vector<unsigned char> header(std::uint8_t dtype, const Dims &dims) {
    std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
    out.push_back(dtype);
    out.push_back(static_cast<unsigned char>(dims.size()));
    out.push_back(0);
    out.push_back(0);
    for (std::size_t d : dims) {
        if (d > std::numeric_limits<std::uint32_t>::max())
            throw FormatError("extent " + std::to_string(d) + " does not fit in u32");
        put_u32(out, static_cast<std::uint32_t>(d));
    }
    return out;
}

void write_bytes(const std::vector<unsigned char> &bytes, const std::filesystem::path &path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os)
        throw IoError("write failed: " + path.string());
}

} // namespace

std::vector<unsigned char> encode_ftf(const RTensor &t) {
    auto out = header(0, t.dims());
    out.reserve(out.size() + 8 * t.numel());
    for (double v : t.data())
        put_f64(out, v);
    return out;
}

std::vector<unsigned char> encode_ftf(const CTensor &t) {
    auto out = header(1, t.dims());
    out.reserve(out.size() + 16 * t.numel());
    for (const Complex &v : t.data()) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
    return out;
}

AnyTensor decode_ftf(const std::vector<unsigned char> &bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError("bad magic");
    if (bytes.size() < kHeaderBytes)
        throw FormatError("truncated header");
    const std::uint8_t dtype = bytes[4];
    const std::uint8_t rank = bytes[5];
    if (dtype > 1)
        throw FormatError("unknown dtype " + std::to_string(dtype));
    if (rank < 1 || rank > kMaxRank)
        throw FormatError("rank " + std::to_string(rank) + " outside 1..4");
    if (bytes[6] != 0 || bytes[7] != 0)
        throw FormatError("reserved field is not zero");
    const std::size_t dims_end = kHeaderBytes + 4 * std::size_t{rank};
    if (bytes.size() < dims_end)
        throw FormatError("truncated extents");
    Dims dims(rank);
    for (std::size_t i = 0; i < rank; ++i)
        dims[i] = get_u32(bytes.data() + kHeaderBytes + 4 * i);
    std::size_t n = 0;
    try {
        n = checked_numel(dims);
    } catch (const ShapeError &e) {
        throw FormatError(std::string("bad extents: ") + e.what());
    }
    const std::size_t scalars = dtype == 0 ? n : 2 * n;
    if (bytes.size() - dims_end != 8 * scalars)
        throw FormatError("payload holds " + std::to_string(bytes.size() - dims_end) + " bytes, extents " +
                          dims_to_string(dims) + " need " + std::to_string(8 * scalars));
    const unsigned char *p = bytes.data() + dims_end;
    try {
        if (dtype == 0) {
            std::vector<double> data(n);
            for (std::size_t i = 0; i < n; ++i)
                data[i] = get_f64(p + 8 * i);
            return RTensor(std::move(dims), std::move(data));
        }
        std::vector<Complex> data(n);
        for (std::size_t i = 0; i < n; ++i)
            data[i] = Complex(get_f64(p + 16 * i), get_f64(p + 16 * i + 8));
        return CTensor(std::move(dims), std::move(data));
    } catch (const ArgumentError &e) {
        throw FormatError(std::string("payload rejected: ") + e.what());
    }
}

void write_ftf(const RTensor &t, const std::filesystem::path &path) { write_bytes(encode_ftf(t), path); }
void write_ftf(const CTensor &t, const std::filesystem::path &path) { write_bytes(encode_ftf(t), path); }

AnyTensor read_ftf(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_ftf(bytes);
}

RTensor read_ftf_real(const std::filesystem::path &path) {
    auto any = read_ftf(path);
    if (auto *r = std::get_if<RTensor>(&any))
        return std::move(*r);
    throw FormatError(path.string() + ": expected real64 payload");
}

} // namespace far
