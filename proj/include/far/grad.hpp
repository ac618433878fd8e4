#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "far/fa.hpp"
#include "far/fo.hpp"
#include "far/tensor.hpp"

namespace far::grad {

// Adjoints of the linear transforms, as conjugate transforms:
//   forward DFT (unnormalized):  A^H = N * inverse
//   inverse DFT (1/N):           A^H = forward / N
CTensor adjoint_time_axis(const CTensor &y);
CTensor adjoint_fft2(const CTensor &y);
CTensor adjoint_ifft2(const CTensor &y);

/// <x, y> = sum conj(x) y.
Complex inner(const CTensor &x, const CTensor &y);
double inner(const RTensor &x, const RTensor &y);

/// Vector-Jacobian product of fo::disentangle under strict application:
/// returns d<upstream, f * M(f)>/df. L2 mode only (L1 is not smooth at 0).
RTensor vjp_disentangle(const RTensor &f, const fo::FreqWeightMode &mode, const RTensor &upstream);

/// Vector-Jacobian product of fa::fourier_attention in either combine mode.
RTensor vjp_fourier_attention(const RTensor &f, const fa::FaConfig &cfg, const RTensor &upstream);

enum class ProbeOp {
    /// fo::disentangle, quadratic weights, L2, strict application.
    DisentangleL2,
    /// fa::fourier_attention with lambda = 1, product fusion.
    FourierAttention,
    /// fa::fourier_attention with lambda = 1, additive fusion.
    FourierAttentionAdditive,
    /// f -> Re(F_t f) + Im(F_t f); linear, so only rounding limits the check.
    FftLinear,
};

std::string to_string(ProbeOp op);
ProbeOp parse_probe_op(const std::string &name);

struct VjpCheckReport {
    std::string op_name;
    Shape4 input_shape;
    std::uint64_t seed = 0;
    double max_rel_err = 0.0;
    double fd_epsilon = 0.0;
    std::size_t samples = 0;
    std::vector<double> rel_errs;
};

/// Compares <vjp(f, u), d> against the central difference
/// (<u, op(f + eps d)> - <u, op(f - eps d)>) / (2 eps) along `directions`
/// random unit vectors d. f, u are uniform in [-1, 1]; relative error is
/// |a - b| / max(|a|, |b|, 1e-12).
VjpCheckReport fd_check(ProbeOp op, const Shape4 &shape, std::uint64_t seed, double eps, std::size_t directions = 16);

void write_vjp_csv_header(std::ostream &os);
void write_vjp_csv(std::ostream &os, const VjpCheckReport &report);

} // namespace far::grad
