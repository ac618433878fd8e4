#include "far/fo.hpp"
#include "far/fft.hpp"
#include "far/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace far::fo {

std::vector<double> frequency_weights(std::size_t tlen, WeightVariant variant) {
    if (tlen == 0)
        throw ShapeError("frequency_weights: T must be >= 1");
    std::vector<double> w(tlen, 0.0);
    const double n = static_cast<double>(tlen);
    for (std::size_t k = 1; k < tlen; ++k) {
        if (variant == WeightVariant::Quadratic) {
            const double sym = static_cast<double>(std::min(k, tlen - k));
            const double omega = 2.0 * std::numbers::pi * sym / n;
            w[k] = omega * omega;
        } else {
            const double fr = std::exp(-2.0 * std::numbers::pi * static_cast<double>(k) / n);
            w[k] = fr * fr;
        }
    }
    return w;
}

DynamicMask compute_mask(const RTensor &f, const FreqWeightMode &mode) {
    const Shape4 s = f.shape4();
    const std::size_t plane = s.plane();
    const std::vector<double> w = frequency_weights(s.t, mode.variant);
    std::vector<double> root_w(w.size());
    std::transform(w.begin(), w.end(), root_w.begin(), [](double v) { return std::sqrt(v); });
    const FftPlan plan(s.t);
    std::vector<double> mask(s.c * plane, 0.0);
    parallel_for(s.c * plane, [&](std::size_t line) {
        const std::size_t c = line / plane;
        const std::size_t p = line % plane;
        std::vector<Complex> buf(s.t);
        for (std::size_t t = 0; t < s.t; ++t)
            buf[t] = f[s.index(c, t, 0, 0) + p];
        plan.execute(buf, Direction::Forward);
        double acc = 0.0;
        for (std::size_t k = 0; k < s.t; ++k)
            acc += mode.norm == Norm::L2 ? std::norm(buf[k]) * w[k] : std::abs(buf[k]) * root_w[k];
        mask[line] = acc;
    });
    return DynamicMask(RTensor(Dims{s.c, s.h, s.w}, std::move(mask)));
}

RTensor normalize_per_channel(const DynamicMask &mask) {
    const std::size_t plane = mask.rows() * mask.cols();
    std::vector<double> out(mask.values().data().begin(), mask.values().data().end());
    for (std::size_t c = 0; c < mask.channels(); ++c) {
        const auto first = out.begin() + static_cast<std::ptrdiff_t>(c * plane);
        const auto last = first + static_cast<std::ptrdiff_t>(plane);
        const double peak = *std::max_element(first, last);
        if (peak > 0.0)
            std::transform(first, last, first, [peak](double v) { return v / peak; });
    }
    return RTensor(mask.values().dims(), std::move(out));
}

RTensor apply_mask(const RTensor &f, const DynamicMask &mask, const ApplyMode &apply) {
    if (apply.application == Application::Strict)
        return mul(f, mask);
    if (!(apply.beta >= 0.0))
        throw ArgumentError("residual application needs beta >= 0");
    return mul(f, add(scale(normalize_per_channel(mask), apply.beta), 1.0));
}

RTensor disentangle(const RTensor &f, const FreqWeightMode &mode, const ApplyMode &apply) {
    return apply_mask(f, compute_mask(f, mode), apply);
}

FlopReport fo_flops(const Shape4 &shape) {
    const double lines = static_cast<double>(shape.c * shape.plane());
    const double elems = static_cast<double>(shape.numel());
    FlopReport r;
    r.op = "fo";
    r.shape = shape;
    r.terms = {
        {"temporal_fft", "transform", lines * fft_line_flops(static_cast<double>(shape.t))},
        {"mask_reduction", "elementwise", 3.0 * elems},
        {"apply", "elementwise", elems},
    };
    r.model = "fft=5*T*log2(T) per (c,h,w) line; mask=3 per (c,k,h,w); apply=1 per element";
    return r;
}

} // namespace far::fo
