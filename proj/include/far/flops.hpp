#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "far/tensor.hpp"

namespace far {

struct FlopTerm {
    std::string name;
    /// transform | elementwise | matmul
    std::string kind;
    double flops = 0.0;
};

/// Floating-point operation count of one operator at one shape under the
/// documented cost model (5 N log2 N per complex FFT of length N, 2 m n k
/// per m x k by k x n matrix product, unit cost per elementwise op).
struct FlopReport {
    std::string op;
    Shape4 shape;
    std::vector<FlopTerm> terms;
    std::string model;

    double total() const;
    double term(const std::string &name) const;
    double gflops() const { return total() * 1e-9; }

    /// Appends `other`'s terms, prefixed by its operator name.
    FlopReport &absorb(const FlopReport &other);
};

/// `operator,shape,term,flops` rows (one per term plus a `total` row).
void write_flops_csv_header(std::ostream &os);
void write_flops_csv(std::ostream &os, const FlopReport &report);

/// 5 N log2 N, zero for N <= 1.
double fft_line_flops(double n);

} // namespace far
