#include "far/bench.hpp"
#include "far/fa.hpp"
#include "far/fo.hpp"
#include "far/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

namespace far::bench {

std::string to_string(BenchOp op) {
    switch (op) {
    case BenchOp::FourierAttention:
        return "fa";
    case BenchOp::SelfAttention:
        return "sa";
    case BenchOp::FourierDisentangle:
        return "fo";
    }
    return "?";
}

BenchOp parse_bench_op(const std::string &name) {
    for (BenchOp op : {BenchOp::FourierAttention, BenchOp::SelfAttention, BenchOp::FourierDisentangle})
        if (to_string(op) == name)
            return op;
    throw ArgumentError("unknown benchmark op '" + name + "' (expected fa, sa or fo)");
}

Shape4 shape_for_tokens(std::size_t tokens, std::size_t channels) {
    if (tokens == 0 || channels == 0)
        throw ArgumentError("shape_for_tokens: counts must be >= 1");
    const std::size_t t = tokens % 4 == 0 ? 4 : 1;
    const std::size_t plane = tokens / t;
    std::size_t h = 1;
    for (std::size_t d = 1; d * d <= plane; ++d)
        if (plane % d == 0)
            h = d;
    return Shape4::make(channels, t, h, plane / h);
}

namespace {

using Clock = std::chrono::steady_clock;

std::function<void()> make_job(BenchOp op, const RTensor &x, const fa::AttnWeights &weights, double &sink) {
    switch (op) {
    case BenchOp::FourierAttention:
        return [&] { sink += fa::fourier_attention(x)[0]; };
    case BenchOp::SelfAttention:
        return [&] { sink += fa::self_attention_dense(x, weights)[0]; };
    case BenchOp::FourierDisentangle:
        return [&] { sink += fo::disentangle(x, fo::FreqWeightMode{})[0]; };
    }
    throw ArgumentError("unknown benchmark op");
}

FlopReport model_for(BenchOp op, const Shape4 &s) {
    switch (op) {
    case BenchOp::FourierAttention:
        return fa::fa_flops(s);
    case BenchOp::SelfAttention:
        return fa::sa_flops(s);
    case BenchOp::FourierDisentangle:
        return fo::fo_flops(s);
    }
    throw ArgumentError("unknown benchmark op");
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

SweepResult complexity_sweep(BenchOp op, const std::vector<std::size_t> &sizes, std::size_t channels,
                             std::size_t reps) {
    if (reps < kMinReps)
        throw ArgumentError("complexity_sweep: need at least " + std::to_string(kMinReps) + " repetitions");
    if (op == BenchOp::SelfAttention)
        for (std::size_t n : sizes)
            if (n > fa::kMaxDenseTokens)
                throw ResourceError("dense attention sweep size " + std::to_string(n) + " exceeds " +
                                    std::to_string(fa::kMaxDenseTokens));

    SweepResult result;
    double sink = 0.0;
    for (std::size_t tokens : sizes) {
        const Shape4 shape = shape_for_tokens(tokens, channels);
        const RTensor x = make_tensor(shape, UniformFill{-1.0, 1.0, tokens});
        const fa::AttnWeights weights = fa::AttnWeights::random(channels, 17);
        const auto job = make_job(op, x, weights, sink);

        auto start = Clock::now();
        job(); // warm-up, discarded
        const double once = std::max(seconds_since(start), 1e-7);
        const auto inner = static_cast<std::size_t>(std::clamp(2e-3 / once, 1.0, 1e5));

        std::vector<double> samples;
        for (std::size_t r = 0; r < reps; ++r) {
            start = Clock::now();
            for (std::size_t i = 0; i < inner; ++i)
                job();
            samples.push_back(seconds_since(start) / static_cast<double>(inner));
        }
        std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2),
                         samples.end());
        result.timings.push_back(TimingRow{to_string(op), shape, reps, inner, samples[samples.size() / 2], num_threads()});
        result.flops.push_back(model_for(op, shape));
    }
    if (std::isnan(sink))
        result.timings.clear();
    return result;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ArgumentError("loglog_slope: need two or more paired points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw ArgumentError("loglog_slope: values must be positive");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0)
        throw ArgumentError("loglog_slope: x values are all equal");
    return sxy / sxx;
}

FlopReport far_overhead_estimate(const Shape4 &mid_shape) {
    FlopReport r;
    r.op = "far";
    r.shape = mid_shape;
    r.absorb(fo::fo_flops(mid_shape));
    r.absorb(fa::fa_flops(mid_shape));
    return r;
}

Shape4 reference_mid_shape() { return Shape4{48, 4, 135, 135}; }

void write_timing_csv_header(std::ostream &os) { os << "operator,shape,tokens,reps,inner_calls,median_seconds,threads\n"; }

void write_timing_csv(std::ostream &os, const TimingRow &row) {
    const auto prec = os.precision(9);
    os << row.op << ",\"" << far::to_string(row.shape) << "\"," << row.shape.t * row.shape.plane() << ',' << row.reps
       << ',' << row.inner_calls << ',' << row.median_seconds << ',' << row.threads << '\n';
    os.precision(prec);
}

} // namespace far::bench
