#include "far/sampler.hpp"
#include "far/error.hpp"
#include "far/rng.hpp"

#include <algorithm>
#include <sstream>

namespace far {

SamplePlan plan_samples(std::size_t total, std::size_t want, std::uint64_t seed) {
    if (total == 0 || want == 0)
        throw ArgumentError("plan_samples: total and want must both be >= 1");
    SamplePlan plan;
    plan.total = total;
    plan.want = want;
    plan.step = total / want;
    Rng rng(seed);
    plan.offset = static_cast<std::size_t>(rng.below(std::max<std::size_t>(plan.step, 1)));
    plan.indices.resize(want);
    if (total < want) {
        plan.cycled = true;
        for (std::size_t i = 0; i < want; ++i)
            plan.indices[i] = i % total;
    } else {
        for (std::size_t i = 0; i < want; ++i)
            plan.indices[i] = plan.offset + i * plan.step;
    }
    return plan;
}

std::string SamplePlan::csv_header() { return "total,want,step,offset,cycled,indices"; }

std::string SamplePlan::csv_row() const {
    std::ostringstream os;
    os << total << ',' << want << ',' << step << ',' << offset << ',' << (cycled ? 1 : 0) << ',';
    for (std::size_t i = 0; i < indices.size(); ++i)
        os << (i ? ";" : "") << indices[i];
    return os.str();
}

RTensor gather_frames(const RTensor &x, const SamplePlan &plan) {
    const Shape4 s = x.shape4();
    if (s.t != plan.total)
        throw ShapeError("gather_frames: tensor has " + std::to_string(s.t) + " frames, plan expects " +
                         std::to_string(plan.total));
    const std::size_t plane = s.plane();
    std::vector<double> out;
    out.reserve(s.c * plan.indices.size() * plane);
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t t : plan.indices) {
            const auto src = x.data().subspan(s.index(c, t, 0, 0), plane);
            out.insert(out.end(), src.begin(), src.end());
        }
    return RTensor(Dims{s.c, plan.indices.size(), s.h, s.w}, std::move(out));
}

} // namespace far
