#include "far/backbone.hpp"
#include "far/parallel.hpp"
#include "far/rng.hpp"

#include <cmath>

namespace far {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

} // namespace

RTensor conv3d_relu(const RTensor &x, const ConvLayer &layer) {
    const Shape4 in = x.shape4();
    if (in.c != layer.in_channels)
        throw ShapeError("conv3d: input has " + std::to_string(in.c) + " channels, layer expects " +
                         std::to_string(layer.in_channels));
    const std::size_t k = layer.kernel;
    if (k % 2 == 0 || layer.stride_t == 0 || layer.stride_s == 0)
        throw ArgumentError("conv3d: kernel must be odd and strides positive");
    if (layer.weights.size() != layer.out_channels * layer.in_channels * k * k * k ||
        layer.bias.size() != layer.out_channels)
        throw ShapeError("conv3d: weight buffer does not match layer dimensions");

    const Shape4 out{layer.out_channels, ceil_div(in.t, layer.stride_t), ceil_div(in.h, layer.stride_s),
                     ceil_div(in.w, layer.stride_s)};
    const auto pad = static_cast<long long>(k / 2);
    std::vector<double> y(out.numel());
    parallel_for(out.c, [&](std::size_t o) {
        for (std::size_t ot = 0; ot < out.t; ++ot)
            for (std::size_t oh = 0; oh < out.h; ++oh)
                for (std::size_t ow = 0; ow < out.w; ++ow) {
                    double acc = layer.bias[o];
                    for (std::size_t ci = 0; ci < in.c; ++ci)
                        for (std::size_t kt = 0; kt < k; ++kt) {
                            const long long it = static_cast<long long>(ot * layer.stride_t + kt) - pad;
                            if (it < 0 || it >= static_cast<long long>(in.t))
                                continue;
                            for (std::size_t kh = 0; kh < k; ++kh) {
                                const long long ih = static_cast<long long>(oh * layer.stride_s + kh) - pad;
                                if (ih < 0 || ih >= static_cast<long long>(in.h))
                                    continue;
                                const double *wrow = layer.weights.data() + (((o * in.c + ci) * k + kt) * k + kh) * k;
                                for (std::size_t kw = 0; kw < k; ++kw) {
                                    const long long iw = static_cast<long long>(ow * layer.stride_s + kw) - pad;
                                    if (iw < 0 || iw >= static_cast<long long>(in.w))
                                        continue;
                                    acc += wrow[kw] * x[in.index(ci, static_cast<std::size_t>(it),
                                                                 static_cast<std::size_t>(ih),
                                                                 static_cast<std::size_t>(iw))];
                                }
                            }
                        }
                    y[out.index(o, ot, oh, ow)] = acc > 0.0 ? acc : 0.0;
                }
    });
    return RTensor(out.dims(), std::move(y));
}

std::vector<ConvLayer> make_stem(const StemConfig &cfg) {
    if (cfg.widths.size() != 3)
        throw ArgumentError("stem: widths must list input, hidden and output channels");
    for (std::size_t w : cfg.widths)
        if (w == 0)
            throw ArgumentError("stem: channel counts must be >= 1");
    if (cfg.kernel % 2 == 0)
        throw ArgumentError("stem: kernel must be odd");
    Rng rng(cfg.seed);
    std::vector<ConvLayer> layers(2);
    const std::size_t strides_t[2] = {1, 2};
    for (std::size_t i = 0; i < 2; ++i) {
        ConvLayer &l = layers[i];
        l.in_channels = cfg.widths[i];
        l.out_channels = cfg.widths[i + 1];
        l.kernel = cfg.kernel;
        l.stride_t = strides_t[i];
        l.stride_s = 2;
        const std::size_t fan_in = l.in_channels * l.kernel * l.kernel * l.kernel;
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        l.weights.resize(l.out_channels * fan_in);
        for (double &w : l.weights)
            w = rng.uniform(-bound, bound);
        l.bias.assign(l.out_channels, 0.0);
    }
    return layers;
}

Shape4 stem_output_shape(const Shape4 &input, std::size_t out_channels) {
    return Shape4{out_channels, ceil_div(input.t, 2), ceil_div(input.h, 4), ceil_div(input.w, 4)};
}

RTensor stem_forward(const RTensor &clip, const std::vector<ConvLayer> &layers) {
    const Shape4 s = clip.shape4();
    if (s.t < 2 || s.h < 4 || s.w < 4)
        throw ShapeError("stem: clip " + to_string(s) + " is smaller than the (t>=2, h>=4, w>=4) minimum");
    RTensor x = clip;
    for (const ConvLayer &l : layers)
        x = conv3d_relu(x, l);
    return x;
}

RTensor stem_forward(const RTensor &clip, const StemConfig &cfg) { return stem_forward(clip, make_stem(cfg)); }

} // namespace far
