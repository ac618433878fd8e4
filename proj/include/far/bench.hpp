#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "far/flops.hpp"
#include "far/tensor.hpp"

namespace far::bench {

enum class BenchOp { FourierAttention, SelfAttention, FourierDisentangle };

/// "fa", "sa", "fo".
std::string to_string(BenchOp op);
BenchOp parse_bench_op(const std::string &name);

struct TimingRow {
    std::string op;
    Shape4 shape;
    std::size_t reps = 0;
    /// Calls per repetition, chosen so one repetition lasts >= ~2 ms.
    std::size_t inner_calls = 1;
    /// Median over repetitions of the per-call wall time.
    double median_seconds = 0.0;
    std::size_t threads = 1;
};

struct SweepResult {
    std::vector<TimingRow> timings;
    std::vector<FlopReport> flops;
};

/// Feature shape holding `tokens` = T*H*W positions: T = 4 when it divides
/// the count (else 1), H the largest divisor of the remaining plane not
/// above its square root.
Shape4 shape_for_tokens(std::size_t tokens, std::size_t channels);

inline constexpr std::size_t kMinReps = 5;

/// Times `op` on seeded inputs at each token count after one discarded
/// warm-up call, and evaluates the FLOP model at the same shapes.
/// Dense attention sizes above fa::kMaxDenseTokens are rejected up front.
SweepResult complexity_sweep(BenchOp op, const std::vector<std::size_t> &sizes, std::size_t channels,
                             std::size_t reps);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

/// FO + FA (product fusion) FLOPs at a mid-level feature shape.
FlopReport far_overhead_estimate(const Shape4 &mid_shape);

/// 48 channels; 8 frames halved, 540 x 540 crop quartered: (48, 4, 135, 135).
Shape4 reference_mid_shape();

void write_timing_csv_header(std::ostream &os);
void write_timing_csv(std::ostream &os, const TimingRow &row);

} // namespace far::bench
