#pragma once

#include <vector>

#include "far/flops.hpp"
#include "far/tensor.hpp"

namespace far::fo {

enum class WeightVariant {
    /// w(k) = (2 pi min(k, T-k) / T)^2: zero at DC, largest at Nyquist.
    Quadratic,
    /// w(0) = 0, w(k) = (e^{-2 pi k / T})^2 for k >= 1. Decreasing in k, so it
    /// favours slow change; kept to compare against the quadratic default.
    Literal,
};

enum class Norm { L2, L1 };

struct FreqWeightMode {
    WeightVariant variant = WeightVariant::Quadratic;
    Norm norm = Norm::L2;
};

/// How the mask is applied to the features.
enum class Application {
    /// f * M
    Strict,
    /// f * (1 + beta * M / max_channel(M))
    Residual,
};

struct ApplyMode {
    Application application = Application::Strict;
    double beta = 1.0;
};

std::vector<double> frequency_weights(std::size_t tlen, WeightVariant variant);

/// Per-(c,h,w) temporal motion energy of a (c,t,h,w) tensor:
///   L2: M = sum_k |F_t(f)(k)|^2 w(k)
///   L1: M = sum_k |F_t(f)(k)|   sqrt(w(k))
/// A single frame gives an all-zero mask.
DynamicMask compute_mask(const RTensor &f, const FreqWeightMode &mode);

/// Divides each channel by its maximum; all-zero channels stay zero.
RTensor normalize_per_channel(const DynamicMask &mask);

/// Mask broadcast along t and multiplied into f, as selected by `apply`.
RTensor apply_mask(const RTensor &f, const DynamicMask &mask, const ApplyMode &apply);

RTensor disentangle(const RTensor &f, const FreqWeightMode &mode, const ApplyMode &apply = {});

/// FFT lines: 5 N log2 N per (c,h,w) line, mask reduction: 3 per (c,k,h,w)
/// term, application: 1 per element.
FlopReport fo_flops(const Shape4 &shape);

} // namespace far::fo
