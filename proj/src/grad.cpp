#include "far/grad.hpp"
#include "far/fft.hpp"
#include "far/rng.hpp"

#include <algorithm>
#include <cmath>

namespace far::grad {

CTensor adjoint_time_axis(const CTensor &y) {
    const CTensor inv = transform_time_axis(y, Direction::Inverse);
    std::vector<Complex> data(inv.data().begin(), inv.data().end());
    const double n = static_cast<double>(y.extent(1));
    for (Complex &v : data)
        v *= n;
    return CTensor(y.dims(), std::move(data));
}

CTensor adjoint_fft2(const CTensor &y) {
    const CTensor inv = transform2(y, Direction::Inverse);
    std::vector<Complex> data(inv.data().begin(), inv.data().end());
    const double n = static_cast<double>(y.extent(y.rank() - 1) * y.extent(y.rank() - 2));
    for (Complex &v : data)
        v *= n;
    return CTensor(y.dims(), std::move(data));
}

CTensor adjoint_ifft2(const CTensor &y) {
    const CTensor fwd = transform2(y, Direction::Forward);
    std::vector<Complex> data(fwd.data().begin(), fwd.data().end());
    const double inv_n = 1.0 / static_cast<double>(y.extent(y.rank() - 1) * y.extent(y.rank() - 2));
    for (Complex &v : data)
        v *= inv_n;
    return CTensor(y.dims(), std::move(data));
}

Complex inner(const CTensor &x, const CTensor &y) {
    if (x.dims() != y.dims())
        throw ShapeError("inner: shape mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < x.numel(); ++i)
        acc += std::conj(x[i]) * y[i];
    return acc;
}

double inner(const RTensor &x, const RTensor &y) {
    if (x.dims() != y.dims())
        throw ShapeError("inner: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.numel(); ++i)
        acc += x[i] * y[i];
    return acc;
}

RTensor vjp_disentangle(const RTensor &f, const fo::FreqWeightMode &mode, const RTensor &upstream) {
    if (mode.norm != fo::Norm::L2)
        throw UnsupportedError("vjp_disentangle: only the L2 mask is differentiable");
    if (f.dims() != upstream.dims())
        throw ShapeError("vjp_disentangle: upstream shape mismatch");
    const Shape4 s = f.shape4();
    const std::size_t plane = s.plane();
    const DynamicMask mask = fo::compute_mask(f, mode);
    const std::vector<double> w = fo::frequency_weights(s.t, mode.variant);

    // Weighted spectrum w(k) F(k), pulled back through the DFT adjoint.
    const CTensor spectrum = fft_time_axis(f);
    std::vector<Complex> weighted(spectrum.numel());
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t k = 0; k < s.t; ++k)
            for (std::size_t p = 0; p < plane; ++p) {
                const std::size_t i = s.index(c, k, 0, 0) + p;
                weighted[i] = w[k] * spectrum[i];
            }
    const CTensor pulled = adjoint_time_axis(CTensor(spectrum.dims(), std::move(weighted)));

    // Upstream contracted with f over time: dL/dM.
    std::vector<double> mask_grad(s.c * plane, 0.0);
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t t = 0; t < s.t; ++t)
            for (std::size_t p = 0; p < plane; ++p) {
                const std::size_t i = s.index(c, t, 0, 0) + p;
                mask_grad[c * plane + p] += upstream[i] * f[i];
            }

    std::vector<double> out(f.numel());
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t t = 0; t < s.t; ++t)
            for (std::size_t p = 0; p < plane; ++p) {
                const std::size_t i = s.index(c, t, 0, 0) + p;
                const std::size_t m = c * plane + p;
                out[i] = upstream[i] * mask.values()[m] + mask_grad[m] * 2.0 * pulled[i].real();
            }
    return RTensor(f.dims(), std::move(out));
}

namespace {

// d<g, r(a)>/da for r = Re(IFFT2(|FFT2 a|^2)) per channel, a and g (c, t, hw).
std::vector<double> autocorr_pullback(const RTensor &a, const RTensor &g) {
    const Shape4 s = a.shape4();
    const Dims mat{s.c, s.t, s.plane()};
    const CTensor spectrum = fft2_spacetime(a);
    const CTensor gq = adjoint_ifft2(to_complex(reshape(g, mat)));
    std::vector<Complex> prod(spectrum.numel());
    for (std::size_t i = 0; i < prod.size(); ++i)
        prod[i] = gq[i].real() * spectrum[i];
    const CTensor back = adjoint_fft2(CTensor(mat, std::move(prod)));
    std::vector<double> out(back.numel());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 2.0 * back[i].real();
    return out;
}

} // namespace

RTensor vjp_fourier_attention(const RTensor &f, const fa::FaConfig &cfg, const RTensor &upstream) {
    if (f.dims() != upstream.dims())
        throw ShapeError("vjp_fourier_attention: upstream shape mismatch");
    f.shape4();
    std::vector<double> out(upstream.data().begin(), upstream.data().end());
    if (cfg.lambda == 0.0)
        return RTensor(f.dims(), std::move(out));
    if (cfg.combine == fa::Combine::Additive) {
        const auto back = autocorr_pullback(f, upstream);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += cfg.lambda * back[i];
        return RTensor(f.dims(), std::move(out));
    }
    const RTensor r = fa::spectral_autocorrelation(f);
    const auto back = autocorr_pullback(f, mul(upstream, f));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += cfg.lambda * (upstream[i] * r[i] + back[i]);
    return RTensor(f.dims(), std::move(out));
}

std::string to_string(ProbeOp op) {
    switch (op) {
    case ProbeOp::DisentangleL2:
        return "disentangle-L2";
    case ProbeOp::FourierAttention:
        return "fourier-attention";
    case ProbeOp::FourierAttentionAdditive:
        return "fourier-attention-additive";
    case ProbeOp::FftLinear:
        return "fft-linear";
    }
    return "?";
}

ProbeOp parse_probe_op(const std::string &name) {
    for (ProbeOp op : {ProbeOp::DisentangleL2, ProbeOp::FourierAttention, ProbeOp::FourierAttentionAdditive,
                       ProbeOp::FftLinear})
        if (to_string(op) == name)
            return op;
    throw ArgumentError("unknown probe op '" + name + "'");
}

namespace {

RTensor fft_linear(const RTensor &f) {
    const CTensor spec = fft_time_axis(f);
    std::vector<double> out(spec.numel());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = spec[i].real() + spec[i].imag();
    return RTensor(f.dims(), std::move(out));
}

RTensor vjp_fft_linear(const RTensor &upstream) {
    // Re<g, A f> with g = u (1 + i) equals <u, Re(Af) + Im(Af)>.
    std::vector<Complex> g(upstream.numel());
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = Complex(upstream[i], upstream[i]);
    return real_part(adjoint_time_axis(CTensor(upstream.dims(), std::move(g))));
}

const fa::FaConfig kProbeProduct{1.0, fa::Combine::Product};
const fa::FaConfig kProbeAdditive{1.0, fa::Combine::Additive};

RTensor apply_op(ProbeOp op, const RTensor &f) {
    switch (op) {
    case ProbeOp::DisentangleL2:
        return fo::disentangle(f, fo::FreqWeightMode{});
    case ProbeOp::FourierAttention:
        return fa::fourier_attention(f, kProbeProduct);
    case ProbeOp::FourierAttentionAdditive:
        return fa::fourier_attention(f, kProbeAdditive);
    case ProbeOp::FftLinear:
        return fft_linear(f);
    }
    throw ArgumentError("unknown probe op");
}

RTensor apply_vjp(ProbeOp op, const RTensor &f, const RTensor &u) {
    switch (op) {
    case ProbeOp::DisentangleL2:
        return vjp_disentangle(f, fo::FreqWeightMode{}, u);
    case ProbeOp::FourierAttention:
        return vjp_fourier_attention(f, kProbeProduct, u);
    case ProbeOp::FourierAttentionAdditive:
        return vjp_fourier_attention(f, kProbeAdditive, u);
    case ProbeOp::FftLinear:
        return vjp_fft_linear(u);
    }
    throw ArgumentError("unknown probe op");
}

} // namespace

VjpCheckReport fd_check(ProbeOp op, const Shape4 &shape, std::uint64_t seed, double eps, std::size_t directions) {
    if (!(eps > 0.0))
        throw ArgumentError("fd_check: eps must be positive");
    const RTensor f = make_tensor(shape, UniformFill{-1.0, 1.0, seed});
    const RTensor u = make_tensor(shape, UniformFill{-1.0, 1.0, seed ^ 0x5bd1e995ULL});
    const RTensor grad = apply_vjp(op, f, u);

    VjpCheckReport report;
    report.op_name = to_string(op);
    report.input_shape = shape;
    report.seed = seed;
    report.fd_epsilon = eps;
    report.samples = directions;

    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t d = 0; d < directions; ++d) {
        std::vector<double> dir(shape.numel());
        double norm2 = 0.0;
        for (double &v : dir) {
            v = rng.normal();
            norm2 += v * v;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double &v : dir)
            v *= inv;
        const RTensor direction(shape.dims(), std::move(dir));

        const double analytic = inner(grad, direction);
        const double plus = inner(u, apply_op(op, add(f, scale(direction, eps))));
        const double minus = inner(u, apply_op(op, add(f, scale(direction, -eps))));
        const double numeric = (plus - minus) / (2.0 * eps);
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
        const double rel = std::abs(analytic - numeric) / denom;
        report.rel_errs.push_back(rel);
        report.max_rel_err = std::max(report.max_rel_err, rel);
    }
    return report;
}

void write_vjp_csv_header(std::ostream &os) { os << "op,shape,seed,fd_epsilon,samples,max_rel_err\n"; }

void write_vjp_csv(std::ostream &os, const VjpCheckReport &r) {
    const auto prec = os.precision(6);
    os << r.op_name << ",\"" << far::to_string(r.input_shape) << "\"," << r.seed << ',' << r.fd_epsilon << ','
       << r.samples << ',' << r.max_rel_err << '\n';
    os.precision(prec);
}

} // namespace far::grad
