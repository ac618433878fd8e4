#include "far/checks.hpp"
#include "far/fa.hpp"
#include "far/fft.hpp"
#include "far/fo.hpp"
#include "far/grad.hpp"
#include "far/rng.hpp"
#include "far/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace far::checks {

namespace {

using CVec = std::vector<Complex>;

CVec random_cvec(std::size_t n, Rng &rng) {
    CVec v(n);
    for (Complex &z : v)
        z = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return v;
}

double max_abs(const CVec &a, const CVec &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_mag(const CVec &a) {
    double m = 0.0;
    for (const Complex &z : a)
        m = std::max(m, std::abs(z));
    return m;
}

struct Suite {
    std::string name;
    std::vector<CheckResult> results;

    void add(const std::string &check, double value, double tol, std::string detail = {}) {
        results.push_back({name, check, value < tol, value, tol, std::move(detail)});
    }
    void add_count(const std::string &check, double passing, double required, std::string detail = {}) {
        results.push_back({name, check, passing >= required, passing, required, std::move(detail)});
    }
};

CVec inverse_under_test(std::span<const Complex> x, const CheckOptions &opt) {
    CVec out = fft1d(x, Direction::Inverse);
    if (opt.fault == Fault::InverseNormalization)
        for (Complex &z : out)
            z *= static_cast<double>(x.size());
    return out;
}

const std::vector<std::size_t> kLargeSizes = {1, 2, 3, 7, 12, 60, 97, 128, 243, 1000, 1024, 2310, 4093, 4096};

void fft_suite(Suite &s, const CheckOptions &opt) {
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 64; ++n)
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                Rng rng(n * 1000 + seed);
                const CVec x = random_cvec(n, rng);
                worst = std::max(worst, max_abs(fft1d(x, Direction::Forward), dft_oracle(x, Direction::Forward)));
                worst = std::max(worst, max_abs(inverse_under_test(x, opt), dft_oracle(x, Direction::Inverse)));
            }
        s.add("oracle_equivalence_n1_64", worst, 1e-10, "fft1d vs dft_oracle, 100 seeds per N, both directions");
    }
    double inv_worst = 0.0, parseval_worst = 0.0, sym_worst = 0.0, lin_worst = 0.0;
    for (std::size_t n : kLargeSizes) {
        Rng rng(n);
        const CVec x = random_cvec(n, rng);
        const CVec spectrum = fft1d(x, Direction::Forward);
        inv_worst = std::max(inv_worst, max_abs(inverse_under_test(spectrum, opt), x) / max_mag(x));

        double ex = 0.0, es = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ex += std::norm(x[i]);
            es += std::norm(spectrum[i]);
        }
        parseval_worst = std::max(parseval_worst, std::abs(ex - es / static_cast<double>(n)) / ex);

        CVec real_in(n);
        for (std::size_t i = 0; i < n; ++i)
            real_in[i] = x[i].real();
        const CVec rs = fft1d(real_in, Direction::Forward);
        for (std::size_t k = 0; k < n; ++k)
            sym_worst = std::max(sym_worst, std::abs(rs[k] - std::conj(rs[(n - k) % n])));

        const CVec y = random_cvec(n, rng);
        const Complex alpha(0.3, -1.2), beta(-0.7, 0.4);
        CVec combo(n);
        for (std::size_t i = 0; i < n; ++i)
            combo[i] = alpha * x[i] + beta * y[i];
        const CVec lhs = fft1d(combo, Direction::Forward);
        const CVec ys = fft1d(y, Direction::Forward);
        CVec rhs(n);
        for (std::size_t i = 0; i < n; ++i)
            rhs[i] = alpha * spectrum[i] + beta * ys[i];
        lin_worst = std::max(lin_worst, max_abs(lhs, rhs) / std::max(1.0, max_mag(lhs)));
    }
    s.add("inversion_to_4096", inv_worst, 1e-10, "max|ifft(fft x) - x| / max|x|");
    s.add("parseval_to_4096", parseval_worst, 1e-10, "relative energy mismatch");
    s.add("conjugate_symmetry", sym_worst, 1e-12, "real input, |X[k] - conj X[N-k]|");
    s.add("linearity", lin_worst, 1e-10);

    double wk_worst = 0.0, imag_worst = 0.0;
    for (std::size_t rows = 1; rows <= 8; ++rows)
        for (std::size_t cols = 1; cols <= 12; ++cols)
            for (std::uint64_t seed = 0; seed < 4; ++seed) {
                const RTensor a = make_tensor(Dims{rows, cols}, UniformFill{-1.0, 1.0, rows * 100 + cols * 7 + seed});
                const CTensor spec = transform2(to_complex(a), Direction::Forward);
                std::vector<Complex> power(spec.numel());
                for (std::size_t i = 0; i < power.size(); ++i)
                    power[i] = spec[i] * std::conj(spec[i]);
                CTensor back = transform2(CTensor(spec.dims(), std::move(power)), Direction::Inverse);
                double imag = 0.0;
                const RTensor r = real_part(back, &imag);
                wk_worst = std::max(wk_worst, max_abs_diff(r, circular_autocorr_oracle(a)));
                imag_worst = std::max(imag_worst, imag);
            }
    s.add("wiener_khinchin", wk_worst, 1e-9, "ifft2(|fft2 a|^2) vs direct autocorrelation, up to 8x12");
    s.add("wiener_khinchin_imag_residue", imag_worst, 1e-10);
}

// Mask by a direct loop over dft_oracle, independent of fo::compute_mask.
std::vector<double> naive_mask(const RTensor &f, const std::vector<double> &w) {
    const Shape4 s = f.shape4();
    std::vector<double> m(s.c * s.plane(), 0.0);
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t h = 0; h < s.h; ++h)
            for (std::size_t x = 0; x < s.w; ++x) {
                CVec line(s.t);
                for (std::size_t t = 0; t < s.t; ++t)
                    line[t] = f[s.index(c, t, h, x)];
                const CVec spec = dft_oracle(line, Direction::Forward);
                double acc = 0.0;
                for (std::size_t k = 0; k < s.t; ++k)
                    acc += std::norm(spec[k]) * w[k];
                m[(c * s.h + h) * s.w + x] = acc;
            }
    return m;
}

void fo_suite(Suite &s) {
    const fo::FreqWeightMode mode{};
    {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Shape4 shape{1 + seed % 3, 1 + seed % 8, 1 + seed % 5, 2 + seed % 4};
            const RTensor frame = make_tensor(Dims{shape.c, 1, shape.h, shape.w}, UniformFill{-5.0, 5.0, seed});
            std::vector<double> data;
            for (std::size_t c = 0; c < shape.c; ++c)
                for (std::size_t t = 0; t < shape.t; ++t) {
                    const auto src = frame.data().subspan(c * shape.plane(), shape.plane());
                    data.insert(data.end(), src.begin(), src.end());
                }
            const DynamicMask m = fo::compute_mask(RTensor(shape.dims(), std::move(data)), mode);
            for (double v : m.values().data())
                worst = std::max(worst, std::abs(v));
        }
        s.add("static_annihilation", worst, 1e-12, "time-constant inputs, quadratic weights");
    }
    {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const Shape4 shape{1 + seed % 3, 1 + seed % 8, 1 + (seed / 3) % 5, 1 + (seed / 2) % 5};
            const RTensor f = make_tensor(shape, UniformFill{-1.0, 1.0, seed});
            const auto expect = naive_mask(f, fo::frequency_weights(shape.t, mode.variant));
            const DynamicMask got = fo::compute_mask(f, mode);
            for (std::size_t i = 0; i < expect.size(); ++i)
                worst = std::max(worst, std::abs(expect[i] - got.values()[i]));
        }
        s.add("mask_oracle", worst, 1e-9, "compute_mask vs dft_oracle loop, shapes up to (3,8,5,5)");
    }
    {
        double negatives = 0.0, shift_worst = 0.0, scale_worst = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Shape4 shape{2, 6, 3, 4};
            const RTensor f = make_tensor(shape, UniformFill{-2.0, 2.0, 500 + seed});
            const DynamicMask m = fo::compute_mask(f, mode);
            for (double v : m.values().data())
                negatives += v < 0.0 ? 1.0 : 0.0;

            std::vector<double> shifted(f.numel());
            for (std::size_t c = 0; c < shape.c; ++c)
                for (std::size_t t = 0; t < shape.t; ++t)
                    for (std::size_t p = 0; p < shape.plane(); ++p)
                        shifted[shape.index(c, (t + 1 + seed) % shape.t, 0, 0) + p] = f[shape.index(c, t, 0, 0) + p];
            const DynamicMask ms = fo::compute_mask(RTensor(shape.dims(), std::move(shifted)), mode);
            shift_worst = std::max(shift_worst, max_abs_diff(ms.values(), m.values()));

            const double alpha = 1.7;
            const DynamicMask ma = fo::compute_mask(scale(f, alpha), mode);
            for (std::size_t i = 0; i < ma.values().numel(); ++i)
                scale_worst = std::max(scale_worst, std::abs(ma.values()[i] - alpha * alpha * m.values()[i]) /
                                                        std::max(1e-300, alpha * alpha * m.values()[i]));
        }
        s.add("nonnegativity", negatives, 0.5, "count of negative mask entries");
        s.add("time_shift_invariance", shift_worst, 1e-10);
        s.add("scale_equivariance", scale_worst, 1e-9, "mask(alpha f) = alpha^2 mask(f)");
    }
    {
        // Single tones of equal amplitude: energy must not drop as frequency rises.
        double violations = 0.0;
        for (std::size_t tlen : {4u, 7u, 8u, 16u}) {
            double previous = -1.0;
            for (std::size_t k = 0; k <= tlen / 2; ++k) {
                std::vector<double> line(tlen);
                for (std::size_t t = 0; t < tlen; ++t)
                    line[t] = std::cos(2.0 * std::numbers::pi * double(k * t) / double(tlen));
                const double m = fo::compute_mask(RTensor(Dims{1, tlen, 1, 1}, line), mode).values()[0];
                if (m < previous * (1.0 - 1e-12))
                    violations += 1.0;
                previous = m;
            }
        }
        s.add("frequency_monotonicity", violations, 0.5, "single-tone lines up to Nyquist");
    }
    {
        int ordered = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const synth::Scene scene = synth::generate(synth::standard_scene(seed, 0.05));
            const RTensor out = fo::disentangle(scene.features, mode, {fo::Application::Residual, 1.0});
            auto m = synth::region_mean_amplitudes(out, scene.labels);
            using K = synth::RegionKind;
            if (m[K::DynamicSalient] > m[K::StaticSalient] && m[K::StaticSalient] > m[K::DynamicNonsalient] &&
                m[K::DynamicNonsalient] > m[K::StaticNonsalient])
                ++ordered;
        }
        s.add_count("region_ordering", ordered, 19, "seeds of 20 with ds > ss > dn > sn (residual, beta 1)");
    }
}

void fa_suite(Suite &s) {
    double imag_worst = 0.0, wk_worst = 0.0, peak_violation = 0.0, shift_worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Shape4 shape{1 + seed % 2, 1 + seed % 6, 1 + seed % 3, 1 + (seed / 2) % 4};
        const RTensor f = make_tensor(shape, UniformFill{-1.0, 1.0, 900 + seed});
        double imag = 0.0;
        const RTensor r = fa::spectral_autocorrelation(f, &imag);
        imag_worst = std::max(imag_worst, imag);

        const RTensor out = fa::fourier_attention(f, {1.0, fa::Combine::Additive});
        const RTensor delta = add(out, scale(f, -1.0));
        const std::size_t block = shape.t * shape.plane();
        for (std::size_t c = 0; c < shape.c; ++c) {
            const auto chan = f.data().subspan(c * block, block);
            const RTensor a(Dims{shape.t, shape.plane()}, std::vector<double>(chan.begin(), chan.end()));
            const RTensor expect = circular_autocorr_oracle(a);
            for (std::size_t i = 0; i < block; ++i) {
                wk_worst = std::max(wk_worst, std::abs(delta[c * block + i] - expect[i]));
                if (std::abs(r[c * block + i]) > r[c * block] * (1.0 + 1e-12) + 1e-12)
                    peak_violation += 1.0;
            }
        }

        // Circular shift by one frame and one position in the flattened plane.
        std::vector<double> shifted(f.numel());
        for (std::size_t c = 0; c < shape.c; ++c)
            for (std::size_t t = 0; t < shape.t; ++t)
                for (std::size_t p = 0; p < shape.plane(); ++p)
                    shifted[(c * shape.t + (t + 1) % shape.t) * shape.plane() + (p + 1) % shape.plane()] =
                        f[(c * shape.t + t) * shape.plane() + p];
        const RTensor rs = fa::spectral_autocorrelation(RTensor(shape.dims(), std::move(shifted)));
        shift_worst = std::max(shift_worst, max_abs_diff(rs, r));
    }
    s.add("realness_imag_residue", imag_worst, 1e-10, "100 random inputs");
    s.add("wiener_khinchin_additive", wk_worst, 1e-9, "(out - f) vs direct autocorrelation, lambda 1");
    s.add("peak_at_zero_lag", peak_violation, 0.5, "count of |r(p,q)| > r(0,0)");
    s.add("shift_invariance", shift_worst, 1e-9);

    const RTensor f = make_tensor(Shape4{2, 4, 3, 3}, UniformFill{-1.0, 1.0, 3});
    s.add("lambda_zero_identity", max_abs_diff(fa::fourier_attention(f, {0.0, fa::Combine::Product}), f), 1e-300,
          "exact equality");
    const RTensor d1 = add(fa::fourier_attention(f, {0.25, fa::Combine::Product}), scale(f, -1.0));
    const RTensor d2 = add(fa::fourier_attention(f, {0.5, fa::Combine::Product}), scale(f, -1.0));
    double lin = 0.0;
    for (std::size_t i = 0; i < d1.numel(); ++i)
        lin = std::max(lin, std::abs(d2[i] - 2.0 * d1[i]) / std::max(1.0, std::abs(d2[i])));
    s.add("lambda_linearity", lin, 1e-14, "out(2 lambda) - f = 2 (out(lambda) - f)");
}

void grad_suite(Suite &s) {
    double adj = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Shape4 shape{1 + seed % 2, 2 + seed % 5, 1 + seed % 3, 2 + seed % 3};
        const RTensor xr = make_tensor(shape, UniformFill{-1.0, 1.0, seed});
        const RTensor xi = make_tensor(shape, UniformFill{-1.0, 1.0, seed + 50});
        const RTensor yr = make_tensor(shape, UniformFill{-1.0, 1.0, seed + 100});
        const RTensor yi = make_tensor(shape, UniformFill{-1.0, 1.0, seed + 150});
        std::vector<Complex> xv(xr.numel()), yv(yr.numel());
        for (std::size_t i = 0; i < xv.size(); ++i) {
            xv[i] = {xr[i], xi[i]};
            yv[i] = {yr[i], yi[i]};
        }
        const CTensor x(shape.dims(), xv), y(shape.dims(), yv);
        adj = std::max(adj, std::abs(grad::inner(transform_time_axis(x, Direction::Forward), y) -
                                     grad::inner(x, grad::adjoint_time_axis(y))));
        const Dims mat{shape.c, shape.t, shape.plane()};
        const CTensor xm = reshape(x, mat), ym = reshape(y, mat);
        adj = std::max(adj, std::abs(grad::inner(transform2(xm, Direction::Forward), ym) -
                                     grad::inner(xm, grad::adjoint_fft2(ym))));
        adj = std::max(adj, std::abs(grad::inner(transform2(xm, Direction::Inverse), ym) -
                                     grad::inner(xm, grad::adjoint_ifft2(ym))));
    }
    s.add("adjoint_identity", adj, 1e-10, "<Ax, y> = <x, A^H y> for time-axis, fft2, ifft2");

    for (grad::ProbeOp op : {grad::ProbeOp::DisentangleL2, grad::ProbeOp::FourierAttention,
                             grad::ProbeOp::FourierAttentionAdditive}) {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const Shape4 shape{1 + seed % 2, 2 + seed % 5, 1 + seed % 3, 1 + (seed / 3) % 3};
            worst = std::max(worst, grad::fd_check(op, shape, seed, 1e-5).max_rel_err);
        }
        s.add("vjp_vs_fd_" + grad::to_string(op), worst, 1e-6, "50 (shape, seed) pairs x 16 directions");
    }
    double linear = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        linear = std::max(linear, grad::fd_check(grad::ProbeOp::FftLinear, Shape4{1, 3 + seed, 2, 2}, seed, 1e-3).max_rel_err);
    s.add("vjp_vs_fd_fft-linear", linear, 1e-9);
}

} // namespace

const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names = {"fft", "fo", "fa", "grad", "all"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string &suite, const CheckOptions &options) {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw ArgumentError("unknown check suite '" + suite + "'");
    std::vector<CheckResult> all;
    const auto run = [&](const std::string &name, auto &&fn) {
        if (suite != "all" && suite != name)
            return;
        Suite s{name, {}};
        fn(s);
        all.insert(all.end(), s.results.begin(), s.results.end());
    };
    run("fft", [&](Suite &s) { fft_suite(s, options); });
    run("fo", [](Suite &s) { fo_suite(s); });
    run("fa", [](Suite &s) { fa_suite(s); });
    run("grad", [](Suite &s) { grad_suite(s); });
    return all;
}

void print_table(std::ostream &os, const std::vector<CheckResult> &results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-40s %-6s %12s %12s\n", "suite", "check", "status", "value", "limit");
    os << line;
    for (const CheckResult &r : results) {
        std::snprintf(line, sizeof line, "%-6s %-40s %-6s %12.3e %12.3e  %s\n", r.suite.c_str(), r.name.c_str(),
                      r.ok ? "ok" : "FAIL", r.value, r.tolerance, r.detail.c_str());
        os << line;
    }
}

} // namespace far::checks
