#pragma once

#include <memory>
#include <span>
#include <vector>

#include "far/tensor.hpp"

namespace far {

// Conventions: forward X[k] = sum_n x[n] e^{-2 pi i k n / N} (unnormalized),
// inverse x[n] = (1/N) sum_k X[k] e^{+2 pi i k n / N}.
enum class Direction { Forward, Inverse };

/// Precomputed transform of one length. Lengths whose prime factors are all
/// <= kMaxDirectRadix use a mixed-radix Cooley-Tukey decomposition (radix 4
/// and 2 butterflies, a generic odd-radix butterfly otherwise); any other
/// length goes through Bluestein's chirp-z identity over a power-of-two plan.
/// A plan is immutable and may be shared across threads.
class FftPlan {
  public:
    static constexpr std::size_t kMaxDirectRadix = 61;

    explicit FftPlan(std::size_t n);
    ~FftPlan();
    FftPlan(FftPlan &&) noexcept;
    FftPlan &operator=(FftPlan &&) noexcept;

    std::size_t size() const;
    bool uses_bluestein() const;
    /// Prime factors used by the direct decomposition (empty for Bluestein).
    std::vector<std::size_t> radices() const;

    /// In-place transform of `data.size() == size()` values.
    void execute(std::span<Complex> data, Direction dir) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::vector<Complex> fft1d(std::span<const Complex> x, Direction dir);

/// Literal O(N^2) evaluation of the DFT sums above. Exponents are reduced
/// as (k*n mod N) before the trig call.
std::vector<Complex> dft_oracle(std::span<const Complex> x, Direction dir);

/// Length-T forward FFT of every (c,h,w) line of a (c,t,h,w) tensor.
CTensor fft_time_axis(const RTensor &f);
/// Same for complex input in either direction.
CTensor transform_time_axis(const CTensor &z, Direction dir);

/// Views each channel of (c,t,h,w) as a T x (H*W) matrix and applies a 2-D
/// forward DFT (rows, then columns). Result is (c, t, h*w).
CTensor fft2_spacetime(const RTensor &f);
/// 2-D inverse with 1/(T*H*W) normalization on a (c, t, hw) spectrum.
CTensor ifft2_spacetime(const CTensor &s);

/// Per-channel 2-D transform of a rank-3 (c, rows, cols) or rank-2
/// (rows, cols) complex tensor.
CTensor transform2(const CTensor &z, Direction dir);

/// r[p,q] = sum_{t,s} a[t,s] a[(t+p) mod T, (s+q) mod M] for a rank-2
/// (T, M) tensor, by a direct quadruple loop.
RTensor circular_autocorr_oracle(const RTensor &a);

} // namespace far
