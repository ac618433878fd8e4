#include "far/fft.hpp"
#include "far/parallel.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace far {

namespace {

Complex unit_root(std::size_t k, std::size_t n) {
    // e^{-2 pi i k / n}, k already reduced mod n.
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n)
        m <<= 1;
    return m;
}

struct Stage {
    std::size_t radix;
    std::size_t span; // remaining length after this radix
};

} // namespace

struct FftPlan::Impl {
    std::size_t n = 0;
    std::vector<Stage> stages;
    std::vector<Complex> twiddles; // e^{-2 pi i k / n}

    // Bluestein state.
    std::vector<Complex> chirp;          // e^{-i pi k^2 / n}
    std::vector<Complex> kernel_spectrum; // FFT_M of the conjugate chirp, wrapped
    std::unique_ptr<FftPlan> inner;

    void forward(Complex *data) const;
    void work(Complex *out, const Complex *in, std::size_t fstride, const Stage *stage) const;
    void butterfly2(Complex *out, std::size_t fstride, std::size_t m) const;
    void butterfly4(Complex *out, std::size_t fstride, std::size_t m) const;
    void butterfly_generic(Complex *out, std::size_t fstride, std::size_t m, std::size_t p) const;
    void bluestein(Complex *data) const;
};

FftPlan::FftPlan(std::size_t n) : impl_(std::make_unique<Impl>()) {
    if (n == 0)
        throw ShapeError("FFT length must be >= 1");
    impl_->n = n;

    std::vector<std::size_t> primes;
    std::size_t rest = n;
    while (rest % 4 == 0) {
        primes.push_back(4);
        rest /= 4;
    }
    while (rest % 2 == 0) {
        primes.push_back(2);
        rest /= 2;
    }
    for (std::size_t p = 3; p * p <= rest; p += 2)
        while (rest % p == 0) {
            primes.push_back(p);
            rest /= p;
        }
    if (rest > 1)
        primes.push_back(rest);

    bool direct = true;
    for (std::size_t p : primes)
        direct = direct && p <= kMaxDirectRadix;

    if (direct) {
        std::size_t span = n;
        for (std::size_t p : primes) {
            span /= p;
            impl_->stages.push_back({p, span});
        }
        impl_->twiddles.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            impl_->twiddles[k] = unit_root(k, n);
        return;
    }

    const std::size_t m = next_pow2(2 * n - 1);
    impl_->inner = std::make_unique<FftPlan>(m);
    impl_->chirp.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the trig argument in [0, 2 pi).
        const auto r = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * k) % (2 * n));
        const double angle = -std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
        impl_->chirp[k] = {std::cos(angle), std::sin(angle)};
    }
    impl_->kernel_spectrum.assign(m, Complex{});
    impl_->kernel_spectrum[0] = std::conj(impl_->chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
        impl_->kernel_spectrum[k] = std::conj(impl_->chirp[k]);
        impl_->kernel_spectrum[m - k] = std::conj(impl_->chirp[k]);
    }
    impl_->inner->execute(impl_->kernel_spectrum, Direction::Forward);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan &&) noexcept = default;
FftPlan &FftPlan::operator=(FftPlan &&) noexcept = default;

std::size_t FftPlan::size() const { return impl_->n; }

bool FftPlan::uses_bluestein() const { return impl_->inner != nullptr; }

std::vector<std::size_t> FftPlan::radices() const {
    std::vector<std::size_t> out;
    for (const Stage &s : impl_->stages)
        out.push_back(s.radix);
    return out;
}

void FftPlan::execute(std::span<Complex> data, Direction dir) const {
    if (data.size() != impl_->n)
        throw ShapeError("FFT plan of length " + std::to_string(impl_->n) + " applied to " +
                         std::to_string(data.size()) + " values");
    if (dir == Direction::Forward) {
        impl_->forward(data.data());
        return;
    }
    // inverse(x) = conj(forward(conj(x))) / n
    for (Complex &v : data)
        v = std::conj(v);
    impl_->forward(data.data());
    const double inv = 1.0 / static_cast<double>(impl_->n);
    for (Complex &v : data)
        v = std::conj(v) * inv;
}

void FftPlan::Impl::forward(Complex *data) const {
    if (n == 1)
        return;
    if (inner) {
        bluestein(data);
        return;
    }
    thread_local std::vector<Complex> input;
    input.assign(data, data + n);
    work(data, input.data(), 1, stages.data());
}

void FftPlan::Impl::work(Complex *out, const Complex *in, std::size_t fstride, const Stage *stage) const {
    const std::size_t p = stage->radix;
    const std::size_t m = stage->span;
    Complex *const begin = out;
    Complex *const end = out + p * m;
    if (m == 1) {
        for (; out != end; ++out, in += fstride)
            *out = *in;
    } else {
        for (; out != end; out += m, in += fstride)
            work(out, in, fstride * p, stage + 1);
    }
    switch (p) {
    case 2:
        butterfly2(begin, fstride, m);
        break;
    case 4:
        butterfly4(begin, fstride, m);
        break;
    default:
        butterfly_generic(begin, fstride, m, p);
        break;
    }
}

void FftPlan::Impl::butterfly2(Complex *out, std::size_t fstride, std::size_t m) const {
    for (std::size_t k = 0; k < m; ++k) {
        const Complex t = out[k + m] * twiddles[k * fstride];
        out[k + m] = out[k] - t;
        out[k] += t;
    }
}

void FftPlan::Impl::butterfly4(Complex *out, std::size_t fstride, std::size_t m) const {
    for (std::size_t k = 0; k < m; ++k) {
        const Complex s0 = out[k + m] * twiddles[k * fstride];
        const Complex s1 = out[k + 2 * m] * twiddles[2 * k * fstride];
        const Complex s2 = out[k + 3 * m] * twiddles[3 * k * fstride];
        const Complex s5 = out[k] - s1;
        const Complex a = out[k] + s1;
        const Complex s3 = s0 + s2;
        const Complex s4 = s0 - s2;
        out[k] = a + s3;
        out[k + 2 * m] = a - s3;
        out[k + m] = {s5.real() + s4.imag(), s5.imag() - s4.real()};
        out[k + 3 * m] = {s5.real() - s4.imag(), s5.imag() + s4.real()};
    }
}

void FftPlan::Impl::butterfly_generic(Complex *out, std::size_t fstride, std::size_t m, std::size_t p) const {
    thread_local std::vector<Complex> scratch;
    scratch.resize(p);
    for (std::size_t u = 0; u < m; ++u) {
        for (std::size_t q = 0, k = u; q < p; ++q, k += m)
            scratch[q] = out[k];
        for (std::size_t q1 = 0, k = u; q1 < p; ++q1, k += m) {
            std::size_t tw = 0;
            Complex acc = scratch[0];
            for (std::size_t q = 1; q < p; ++q) {
                tw += fstride * k;
                if (tw >= n)
                    tw -= n;
                acc += scratch[q] * twiddles[tw];
            }
            out[k] = acc;
        }
    }
}

void FftPlan::Impl::bluestein(Complex *data) const {
    const std::size_t m = kernel_spectrum.size();
    thread_local std::vector<Complex> work_buf;
    work_buf.assign(m, Complex{});
    for (std::size_t k = 0; k < n; ++k)
        work_buf[k] = data[k] * chirp[k];
    // The inner plan is radix-2/4 only, so it never recurses into here and
    // the thread_local buffer is not clobbered.
    inner->execute(work_buf, Direction::Forward);
    for (std::size_t k = 0; k < m; ++k)
        work_buf[k] *= kernel_spectrum[k];
    inner->execute(work_buf, Direction::Inverse);
    for (std::size_t k = 0; k < n; ++k)
        data[k] = work_buf[k] * chirp[k];
}

std::vector<Complex> fft1d(std::span<const Complex> x, Direction dir) {
    FftPlan plan(x.size());
    std::vector<Complex> out(x.begin(), x.end());
    plan.execute(out, dir);
    return out;
}

std::vector<Complex> dft_oracle(std::span<const Complex> x, Direction dir) {
    const std::size_t n = x.size();
    if (n == 0)
        throw ShapeError("DFT length must be >= 1");
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j) {
            Complex w = unit_root((k * j) % n, n);
            if (dir == Direction::Inverse)
                w = std::conj(w);
            acc += x[j] * w;
        }
        out[k] = dir == Direction::Inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

CTensor transform_time_axis(const CTensor &z, Direction dir) {
    const Shape4 s = z.shape4();
    const std::size_t plane = s.plane();
    const FftPlan plan(s.t);
    std::vector<Complex> out(z.data().begin(), z.data().end());
    parallel_for(s.c * plane, [&](std::size_t line) {
        const std::size_t c = line / plane;
        const std::size_t p = line % plane;
        const std::size_t base = c * s.t * plane + p;
        std::vector<Complex> buf(s.t);
        for (std::size_t t = 0; t < s.t; ++t)
            buf[t] = out[base + t * plane];
        plan.execute(buf, dir);
        for (std::size_t t = 0; t < s.t; ++t)
            out[base + t * plane] = buf[t];
    });
    return CTensor(z.dims(), std::move(out));
}

CTensor fft_time_axis(const RTensor &f) { return transform_time_axis(to_complex(f), Direction::Forward); }

CTensor transform2(const CTensor &z, Direction dir) {
    std::size_t channels = 1, rows = 0, cols = 0;
    if (z.rank() == 3) {
        channels = z.extent(0);
        rows = z.extent(1);
        cols = z.extent(2);
    } else if (z.rank() == 2) {
        rows = z.extent(0);
        cols = z.extent(1);
    } else {
        throw ShapeError("transform2 expects (c, rows, cols) or (rows, cols), got " + dims_to_string(z.dims()));
    }
    const FftPlan row_plan(cols);
    const FftPlan col_plan(rows);
    std::vector<Complex> out(z.data().begin(), z.data().end());
    parallel_for(channels, [&](std::size_t c) {
        Complex *base = out.data() + c * rows * cols;
        for (std::size_t r = 0; r < rows; ++r)
            row_plan.execute(std::span<Complex>(base + r * cols, cols), dir);
        std::vector<Complex> buf(rows);
        for (std::size_t q = 0; q < cols; ++q) {
            for (std::size_t r = 0; r < rows; ++r)
                buf[r] = base[r * cols + q];
            col_plan.execute(buf, dir);
            for (std::size_t r = 0; r < rows; ++r)
                base[r * cols + q] = buf[r];
        }
    });
    return CTensor(z.dims(), std::move(out));
}

CTensor fft2_spacetime(const RTensor &f) {
    const Shape4 s = f.shape4();
    return transform2(reshape(to_complex(f), Dims{s.c, s.t, s.plane()}), Direction::Forward);
}

CTensor ifft2_spacetime(const CTensor &spectrum) {
    if (spectrum.rank() != 3)
        throw ShapeError("ifft2_spacetime expects a (c, t, hw) spectrum, got " + dims_to_string(spectrum.dims()));
    return transform2(spectrum, Direction::Inverse);
}

RTensor circular_autocorr_oracle(const RTensor &a) {
    if (a.rank() != 2)
        throw ShapeError("circular_autocorr_oracle expects a matrix, got " + dims_to_string(a.dims()));
    const std::size_t rows = a.extent(0);
    const std::size_t cols = a.extent(1);
    std::vector<double> r(rows * cols, 0.0);
    for (std::size_t p = 0; p < rows; ++p)
        for (std::size_t q = 0; q < cols; ++q) {
            double acc = 0.0;
            for (std::size_t t = 0; t < rows; ++t)
                for (std::size_t s = 0; s < cols; ++s)
                    acc += a[t * cols + s] * a[((t + p) % rows) * cols + (s + q) % cols];
            r[p * cols + q] = acc;
        }
    return RTensor(a.dims(), std::move(r));
}

} // namespace far
