#include "far/fa.hpp"
#include "far/fft.hpp"
#include "far/rng.hpp"

#include <cmath>
#include <numbers>

namespace far::fa {

RTensor spectral_autocorrelation(const RTensor &f, double *imag_residue) {
    const Shape4 s = f.shape4();
    const CTensor spectrum = fft2_spacetime(f);
    std::vector<Complex> power(spectrum.numel());
    for (std::size_t i = 0; i < power.size(); ++i)
        power[i] = spectrum[i] * std::conj(spectrum[i]);
    const CTensor corr = ifft2_spacetime(CTensor(spectrum.dims(), std::move(power)));
    return reshape(real_part(corr, imag_residue), s.dims());
}

RTensor fourier_attention(const RTensor &f, const FaConfig &cfg) {
    if (!(cfg.lambda >= 0.0))
        throw ArgumentError("lambda must be >= 0");
    const RTensor r = spectral_autocorrelation(f);
    std::vector<double> out(f.numel());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double term = cfg.combine == Combine::Product ? f[i] * r[i] : r[i];
        out[i] = f[i] + cfg.lambda * term;
    }
    return RTensor(f.dims(), std::move(out));
}

AttnWeights AttnWeights::identity(std::size_t channels) {
    AttnWeights w;
    w.channels = channels;
    w.query.assign(channels * channels, 0.0);
    for (std::size_t i = 0; i < channels; ++i)
        w.query[i * channels + i] = 1.0;
    w.key = w.query;
    w.value = w.query;
    return w;
}

AttnWeights AttnWeights::random(std::size_t channels, std::uint64_t seed) {
    AttnWeights w;
    w.channels = channels;
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(channels));
    for (auto *m : {&w.query, &w.key, &w.value}) {
        m->resize(channels * channels);
        for (double &v : *m)
            v = rng.uniform(-bound, bound);
    }
    return w;
}

namespace {

// out (C x N) = map (C x C) * x (C x N)
std::vector<double> channel_map(const std::vector<double> &map, std::span<const double> x, std::size_t c,
                                std::size_t n) {
    std::vector<double> out(c * n, 0.0);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t d = 0; d < c; ++d) {
            const double m = map[i * c + d];
            for (std::size_t j = 0; j < n; ++j)
                out[i * n + j] += m * x[d * n + j];
        }
    return out;
}

} // namespace

RTensor self_attention_dense(const RTensor &f, const AttnWeights &weights) {
    const Shape4 s = f.shape4();
    const std::size_t c = s.c;
    const std::size_t n = s.t * s.plane();
    if (n > kMaxDenseTokens)
        throw ResourceError("dense attention over " + std::to_string(n) + " tokens exceeds the " +
                            std::to_string(kMaxDenseTokens) + " limit");
    if (weights.channels != c || weights.query.size() != c * c || weights.key.size() != c * c ||
        weights.value.size() != c * c)
        throw ShapeError("attention weights do not match " + std::to_string(c) + " channels");

    const auto q = channel_map(weights.query, f.data(), c, n);
    const auto k = channel_map(weights.key, f.data(), c, n);
    const auto v = channel_map(weights.value, f.data(), c, n);

    // b[i][j] = sum_d k[d][i] q[d][j], the transpose of Q^T K.
    std::vector<double> b(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < c; ++d) {
            const double kd = k[d * n + i];
            const double *qrow = q.data() + d * n;
            double *brow = b.data() + i * n;
            for (std::size_t j = 0; j < n; ++j)
                brow[j] += kd * qrow[j];
        }
    std::vector<double> out(c * n, 0.0);
    for (std::size_t ch = 0; ch < c; ++ch)
        for (std::size_t i = 0; i < n; ++i) {
            const double vi = v[ch * n + i];
            const double *brow = b.data() + i * n;
            double *orow = out.data() + ch * n;
            for (std::size_t j = 0; j < n; ++j)
                orow[j] += vi * brow[j];
        }
    return RTensor(f.dims(), std::move(out));
}

RTensor lemma_fourier_attention_bruteforce(const RTensor &a) {
    if (a.rank() != 2 || a.extent(0) != a.extent(1))
        throw ShapeError("lemma evaluator needs a square matrix, got " + dims_to_string(a.dims()));
    const std::size_t n = a.extent(0);
    if (n > kMaxLemmaSize)
        throw ResourceError("lemma evaluator limited to N <= " + std::to_string(kMaxLemmaSize));
    const auto root = [n](long long e) {
        // e^{-2 pi i e / N} with e reduced into [0, N).
        const long long nn = static_cast<long long>(n);
        const long long r = ((e % nn) + nn) % nn;
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
        return Complex(std::cos(angle), std::sin(angle));
    };
    const auto at = [&](std::size_t i, std::size_t j) { return a[i * n + j]; };
    const long long nn = static_cast<long long>(n);

    std::vector<double> out(n * n);
    for (long long m = 0; m < nn; ++m)
        for (long long q = 0; q < nn; ++q) {
            Complex total{};
            for (long long b = 0; b < nn; ++b)
                for (long long c = 0; c < nn; ++c) {
                    Complex inner{};
                    for (long long j = 0; j < nn; ++j)
                        for (long long i = 0; i < nn; ++i) {
                            const double aij = at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                            inner += root(j * (b - c)) * aij * root(i * (c - b)) * aij;
                        }
                    total += root(m * c) * root(q * b) * at(static_cast<std::size_t>(m), static_cast<std::size_t>(q)) *
                             inner;
                }
            out[static_cast<std::size_t>(m * nn + q)] = total.real();
        }
    return RTensor(a.dims(), std::move(out));
}

FlopReport fa_flops(const Shape4 &shape, Combine combine) {
    const double c = static_cast<double>(shape.c);
    const double n = static_cast<double>(shape.t * shape.plane());
    FlopReport r;
    r.op = "fa";
    r.shape = shape;
    r.terms = {
        {"spacetime_fft", "transform", c * fft_line_flops(n)},
        {"spacetime_ifft", "transform", c * fft_line_flops(n)},
        {"spectrum_product", "elementwise", 6.0 * c * n},
        {"residual", "elementwise", (combine == Combine::Product ? 3.0 : 2.0) * c * n},
    };
    r.model = "2-D fft=5*N*log2(N) per channel (N=T*H*W); S*conj(S)=6 per element; residual=" +
              std::string(combine == Combine::Product ? "3" : "2") + " per element";
    return r;
}

FlopReport sa_flops(const Shape4 &shape) {
    const double c = static_cast<double>(shape.c);
    const double n = static_cast<double>(shape.t * shape.plane());
    FlopReport r;
    r.op = "sa";
    r.shape = shape;
    r.terms = {
        {"qkv_maps", "matmul", 3.0 * 2.0 * c * c * n},
        {"score_matmul", "matmul", 2.0 * c * n * n},
        {"value_matmul", "matmul", 2.0 * c * n * n},
    };
    r.model = "matmul=2*m*n*k; qkv=3 maps of C x C over N tokens; two N x N products over C";
    return r;
}

} // namespace far::fa
