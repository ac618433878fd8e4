#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace far::checks {

/// Deliberate defects, used to confirm the checks can fail.
enum class Fault {
    None,
    /// Inverse FFT without its 1/N factor.
    InverseNormalization,
};

struct CheckOptions {
    Fault fault = Fault::None;
};

struct CheckResult {
    std::string suite;
    std::string name;
    bool ok = false;
    /// Worst observed error (or count, for counted checks).
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

/// "fft", "fo", "fa", "grad" or "all"; ArgumentError for anything else.
std::vector<CheckResult> run_suite(const std::string &suite, const CheckOptions &options = {});

const std::vector<std::string> &suite_names();

/// Fixed-width table, one line per check.
void print_table(std::ostream &os, const std::vector<CheckResult> &results);

} // namespace far::checks
