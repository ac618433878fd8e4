#include "far/tensor.hpp"
#include "far/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace far {

std::size_t checked_numel(std::span<const std::size_t> dims) {
    if (dims.empty() || dims.size() > kMaxRank)
        throw ShapeError("rank must be 1.." + std::to_string(kMaxRank) + ", got " + std::to_string(dims.size()));
    std::size_t n = 1;
    for (std::size_t d : dims) {
        if (d == 0)
            throw ShapeError("zero extent in " + dims_to_string(dims));
        if (n > std::numeric_limits<std::size_t>::max() / d)
            throw ShapeError("element count overflows in " + dims_to_string(dims));
        n *= d;
    }
    // Keep byte counts addressable as well.
    if (n > std::numeric_limits<std::size_t>::max() / (2 * sizeof(double)))
        throw ShapeError("element count overflows in " + dims_to_string(dims));
    return n;
}

std::string dims_to_string(std::span<const std::size_t> dims) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < dims.size(); ++i)
        os << (i ? "," : "") << dims[i];
    os << ')';
    return os.str();
}

Shape4 Shape4::make(std::size_t c, std::size_t t, std::size_t h, std::size_t w) {
    const std::size_t dims[] = {c, t, h, w};
    checked_numel(dims);
    return Shape4{c, t, h, w};
}

std::string to_string(const Shape4 &s) {
    const std::size_t dims[] = {s.c, s.t, s.h, s.w};
    return dims_to_string(dims);
}

namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(const Complex &v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

} // namespace

template <typename T>
Tensor<T>::Tensor(Dims dims, std::vector<T> data) {
    const std::size_t n = checked_numel(dims);
    if (data.size() != n)
        throw ShapeError("data length " + std::to_string(data.size()) + " does not match " + dims_to_string(dims));
    for (const T &v : data)
        if (!finite(v))
            throw ArgumentError("tensor values must be finite");
    dims_ = std::move(dims);
    data_ = std::move(data);
}

template <typename T>
Shape4 Tensor<T>::shape4() const {
    if (dims_.size() != 4)
        throw ShapeError("expected a rank-4 (c,t,h,w) tensor, got " + dims_to_string(dims_));
    return Shape4{dims_[0], dims_[1], dims_[2], dims_[3]};
}

template class Tensor<double>;
template class Tensor<Complex>;

DynamicMask::DynamicMask(RTensor values) : values_(std::move(values)) {
    if (values_.rank() != 3)
        throw ShapeError("dynamic mask must be rank 3 (c,h,w), got " + dims_to_string(values_.dims()));
    for (double v : values_.data())
        if (v < 0.0)
            throw ArgumentError("dynamic mask entries must be nonnegative");
}

RTensor make_tensor(Dims dims, const FillSpec &fill) {
    const std::size_t n = checked_numel(dims);
    std::vector<double> data(n, 0.0);
    if (const auto *c = std::get_if<ConstantFill>(&fill)) {
        std::fill(data.begin(), data.end(), c->value);
    } else if (const auto *u = std::get_if<UniformFill>(&fill)) {
        if (!(u->lo <= u->hi))
            throw ArgumentError("uniform fill needs lo <= hi");
        Rng rng(u->seed);
        for (double &v : data)
            v = rng.uniform(u->lo, u->hi);
    }
    return RTensor(std::move(dims), std::move(data));
}

RTensor make_tensor(const Shape4 &shape, const FillSpec &fill) { return make_tensor(shape.dims(), fill); }

namespace {

void require_same_dims(const RTensor &a, const RTensor &b, const char *op) {
    if (a.dims() != b.dims())
        throw ShapeError(std::string(op) + ": shape mismatch " + dims_to_string(a.dims()) + " vs " +
                         dims_to_string(b.dims()));
}

} // namespace

RTensor add(const RTensor &a, const RTensor &b) {
    require_same_dims(a, b, "add");
    std::vector<double> out(a.numel());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a[i] + b[i];
    return RTensor(a.dims(), std::move(out));
}

RTensor add(const RTensor &a, double b) {
    std::vector<double> out(a.numel());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a[i] + b;
    return RTensor(a.dims(), std::move(out));
}

RTensor mul(const RTensor &a, const RTensor &b) {
    if (a.rank() == 4 && b.rank() == 3) {
        const Shape4 s = a.shape4();
        if (b.extent(0) != s.c || b.extent(1) != s.h || b.extent(2) != s.w)
            throw ShapeError("mul: mask " + dims_to_string(b.dims()) + " does not broadcast over " + to_string(s));
        std::vector<double> out(a.numel());
        const std::size_t plane = s.plane();
        for (std::size_t c = 0; c < s.c; ++c)
            for (std::size_t t = 0; t < s.t; ++t) {
                const std::size_t base = (c * s.t + t) * plane;
                for (std::size_t p = 0; p < plane; ++p)
                    out[base + p] = a[base + p] * b[c * plane + p];
            }
        return RTensor(a.dims(), std::move(out));
    }
    require_same_dims(a, b, "mul");
    std::vector<double> out(a.numel());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a[i] * b[i];
    return RTensor(a.dims(), std::move(out));
}

RTensor mul(const RTensor &a, const DynamicMask &mask) { return mul(a, mask.values()); }

RTensor scale(const RTensor &a, double lambda) {
    std::vector<double> out(a.numel());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = lambda * a[i];
    return RTensor(a.dims(), std::move(out));
}

double max_abs_diff(const RTensor &a, const RTensor &b) {
    require_same_dims(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs_diff(const CTensor &a, const CTensor &b) {
    if (a.dims() != b.dims())
        throw ShapeError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

RTensor real_part(const CTensor &z, double *imag_residue) {
    std::vector<double> out(z.numel());
    double resid = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = z[i].real();
        resid = std::max(resid, std::abs(z[i].imag()));
    }
    if (imag_residue)
        *imag_residue = resid;
    return RTensor(z.dims(), std::move(out));
}

CTensor to_complex(const RTensor &x) {
    std::vector<Complex> out(x.numel());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = Complex(x[i], 0.0);
    return CTensor(x.dims(), std::move(out));
}

} // namespace far
