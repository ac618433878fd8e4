#pragma once

#include <cstdint>
#include <vector>

#include "far/flops.hpp"
#include "far/tensor.hpp"

namespace far::fa {

/// How the space-time autocorrelation r is fused back into the features.
enum class Combine {
    /// f + lambda * (f * r), r used as elementwise weights on f.
    Product,
    /// f + lambda * r
    Additive,
};

struct FaConfig {
    double lambda = 0.01;
    Combine combine = Combine::Product;
};

/// r = real(IFFT2(S * conj(S))) with S = FFT2 over each channel's
/// T x (H*W) matrix; returned as (c,t,h,w). The discarded imaginary part's
/// max magnitude is written to `imag_residue` when given.
RTensor spectral_autocorrelation(const RTensor &f, double *imag_residue = nullptr);

RTensor fourier_attention(const RTensor &f, const FaConfig &cfg = {});

/// Channel-mixing 1x1 maps (row-major C x C) for the dense reference.
struct AttnWeights {
    std::size_t channels = 0;
    std::vector<double> query;
    std::vector<double> key;
    std::vector<double> value;

    static AttnWeights identity(std::size_t channels);
    /// Entries uniform in [-1, 1] / sqrt(C), drawn query, key, value in turn.
    static AttnWeights random(std::size_t channels, std::uint64_t seed);
};

inline constexpr std::size_t kMaxDenseTokens = 4096;

/// Dense space-time attention without softmax. With X the C x N token
/// matrix (N = T*H*W), Q = Wq X, K = Wk X, V = Wv X:
///   out = V (Q^T K)^T
/// Throws ResourceError when N > kMaxDenseTokens.
RTensor self_attention_dense(const RTensor &f, const AttnWeights &weights);

inline constexpr std::size_t kMaxLemmaSize = 8;

/// Direct evaluation, for an N x N matrix a (0-based indices), of
///   F[m,n] = sum_{b,c} e^{-2 pi i m c/N} e^{-2 pi i n b/N} a[m,n]
///            * sum_{i,j} e^{-2 pi i j (b-c)/N} a[i,j] e^{-2 pi i i (c-b)/N} a[i,j]
/// returning the real part. O(N^6); N <= kMaxLemmaSize.
RTensor lemma_fourier_attention_bruteforce(const RTensor &a);

/// Two 2-D transforms (5 N log2 N each per channel, N = T*H*W), 6 flops per
/// spectrum element for S * conj(S), and 3 (Product) or 2 (Additive) per
/// element for the residual fusion.
FlopReport fa_flops(const Shape4 &shape, Combine combine = Combine::Product);

/// Three C x C channel maps (2 C^2 N each) plus the two N x N products
/// (2 C N^2 each).
FlopReport sa_flops(const Shape4 &shape);

} // namespace far::fa
