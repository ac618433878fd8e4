#include "far/flops.hpp"

#include <cmath>

namespace far {

double fft_line_flops(double n) { return n <= 1.0 ? 0.0 : 5.0 * n * std::log2(n); }

double FlopReport::total() const {
    double sum = 0.0;
    for (const FlopTerm &t : terms)
        sum += t.flops;
    return sum;
}

double FlopReport::term(const std::string &name) const {
    for (const FlopTerm &t : terms)
        if (t.name == name)
            return t.flops;
    throw ArgumentError("flop report '" + op + "' has no term '" + name + "'");
}

FlopReport &FlopReport::absorb(const FlopReport &other) {
    for (const FlopTerm &t : other.terms)
        terms.push_back({other.op + "." + t.name, t.kind, t.flops});
    if (!other.model.empty())
        model += (model.empty() ? "" : " | ") + other.op + ": " + other.model;
    return *this;
}

void write_flops_csv_header(std::ostream &os) { os << "operator,shape,term,flops\n"; }

void write_flops_csv(std::ostream &os, const FlopReport &report) {
    const auto prec = os.precision(17);
    const std::string shape = "\"" + to_string(report.shape) + "\"";
    for (const FlopTerm &t : report.terms)
        os << report.op << ',' << shape << ',' << t.name << ',' << t.flops << '\n';
    os << report.op << ',' << shape << ",total," << report.total() << '\n';
    os.precision(prec);
}

} // namespace far
