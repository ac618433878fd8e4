#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "far/error.hpp"

namespace far {

using Complex = std::complex<double>;

/// Extents of a tensor, slowest axis first. Rank is 1 to 4.
using Dims = std::vector<std::size_t>;

inline constexpr std::size_t kMaxRank = 4;

/// Product of the extents. Throws ShapeError for rank outside 1..4, a zero
/// extent, or a product that does not fit in size_t.
std::size_t checked_numel(std::span<const std::size_t> dims);

std::string dims_to_string(std::span<const std::size_t> dims);

/// (channels, frames, rows, cols) of a video feature map.
struct Shape4 {
    std::size_t c = 1;
    std::size_t t = 1;
    std::size_t h = 1;
    std::size_t w = 1;

    /// Validating constructor; all extents >= 1 and c*t*h*w must not overflow.
    static Shape4 make(std::size_t c, std::size_t t, std::size_t h, std::size_t w);

    std::size_t numel() const { return c * t * h * w; }
    std::size_t plane() const { return h * w; }
    Dims dims() const { return {c, t, h, w}; }

    std::size_t index(std::size_t ci, std::size_t ti, std::size_t hi, std::size_t wi) const {
        return ((ci * t + ti) * h + hi) * w + wi;
    }

    friend bool operator==(const Shape4 &, const Shape4 &) = default;
};

std::string to_string(const Shape4 &s);

/// Dense row-major tensor (first axis slowest). Immutable once built: all
/// operations return new tensors. Values are required to be finite.
template <typename T>
class Tensor {
  public:
    using value_type = T;

    Tensor() = default;
    Tensor(Dims dims, std::vector<T> data);

    static Tensor zeros(Dims dims) {
        const std::size_t n = checked_numel(dims);
        return Tensor(std::move(dims), std::vector<T>(n), Unchecked{});
    }

    static Tensor zeros(const Shape4 &s) { return zeros(s.dims()); }

    const Dims &dims() const { return dims_; }
    std::size_t rank() const { return dims_.size(); }
    std::size_t extent(std::size_t axis) const { return dims_.at(axis); }
    std::size_t numel() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    /// Throws ShapeError unless rank == 4.
    Shape4 shape4() const;

    std::span<const T> data() const { return data_; }
    const T &operator[](std::size_t i) const { return data_[i]; }

    /// Hands the buffer to the caller; the tensor is left empty.
    std::vector<T> release() && {
        dims_.clear();
        return std::move(data_);
    }

    friend bool operator==(const Tensor &, const Tensor &) = default;

  private:
    struct Unchecked {};
    Tensor(Dims dims, std::vector<T> data, Unchecked) : dims_(std::move(dims)), data_(std::move(data)) {}

    Dims dims_;
    std::vector<T> data_;
};

using RTensor = Tensor<double>;
using CTensor = Tensor<Complex>;

extern template class Tensor<double>;
extern template class Tensor<Complex>;

/// Per-(c,h,w) motion energy. Every entry is >= 0.
class DynamicMask {
  public:
    DynamicMask() = default;
    /// `values` must have rank 3 (c, h, w) and no negative entries.
    explicit DynamicMask(RTensor values);

    const RTensor &values() const { return values_; }
    std::size_t channels() const { return values_.extent(0); }
    std::size_t rows() const { return values_.extent(1); }
    std::size_t cols() const { return values_.extent(2); }
    double operator()(std::size_t c, std::size_t h, std::size_t w) const {
        return values_[(c * rows() + h) * cols() + w];
    }

  private:
    RTensor values_;
};

struct ZeroFill {};
struct ConstantFill {
    double value = 0.0;
};
struct UniformFill {
    double lo = 0.0;
    double hi = 1.0;
    std::uint64_t seed = 0;
};
using FillSpec = std::variant<ZeroFill, ConstantFill, UniformFill>;

/// Seeded fills draw `uniform(lo, hi)` from far::Rng in row-major order.
RTensor make_tensor(const Shape4 &shape, const FillSpec &fill);
RTensor make_tensor(Dims dims, const FillSpec &fill);

RTensor add(const RTensor &a, const RTensor &b);
RTensor add(const RTensor &a, double b);
/// `b` is either the same shape as `a`, or a rank-3 (c,h,w) map applied to
/// every frame of a rank-4 (c,t,h,w) tensor. Anything else is a ShapeError.
RTensor mul(const RTensor &a, const RTensor &b);
RTensor mul(const RTensor &a, const DynamicMask &mask);
RTensor scale(const RTensor &a, double lambda);

double max_abs_diff(const RTensor &a, const RTensor &b);
double max_abs_diff(const CTensor &a, const CTensor &b);

/// Real parts of a complex tensor; returns the max |imag| through `imag_residue`.
RTensor real_part(const CTensor &z, double *imag_residue = nullptr);
CTensor to_complex(const RTensor &x);

/// Same data, new extents with the same element count.
template <typename T>
Tensor<T> reshape(Tensor<T> x, Dims dims) {
    if (checked_numel(dims) != x.numel())
        throw ShapeError("reshape: " + dims_to_string(x.dims()) + " -> " + dims_to_string(dims));
    return Tensor<T>(std::move(dims), std::move(x).release());
}

} // namespace far
