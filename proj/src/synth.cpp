#include "far/synth.hpp"
#include "far/rng.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace far::synth {

std::string_view to_string(RegionKind kind) {
    switch (kind) {
    case RegionKind::DynamicSalient:
        return "dynamic-salient";
    case RegionKind::StaticSalient:
        return "static-salient";
    case RegionKind::DynamicNonsalient:
        return "dynamic-nonsalient";
    case RegionKind::StaticNonsalient:
        return "static-nonsalient";
    }
    return "?";
}

RegionKind parse_region_kind(std::string_view name) {
    for (RegionKind k : kAllKinds)
        if (to_string(k) == name)
            return k;
    throw ArgumentError("unknown region kind '" + std::string(name) + "'");
}

namespace {

bool overlaps(const Rect &a, const Rect &b) { return a.h0 < b.h1 && b.h0 < a.h1 && a.w0 < b.w1 && b.w0 < a.w1; }

} // namespace

void SceneSpec::validate() const {
    Shape4::make(shape.c, shape.t, shape.h, shape.w);
    if (!(amp_salient > amp_nonsalient && amp_nonsalient > 0.0))
        throw ArgumentError("scene: need amp_salient > amp_nonsalient > 0");
    if (!(noise_sigma >= 0.0))
        throw ArgumentError("scene: noise_sigma must be >= 0");
    if (!std::isfinite(motion.frequency) || !std::isfinite(motion.velocity))
        throw ArgumentError("scene: motion parameters must be finite");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const Rect &r = regions[i].rect;
        if (r.h0 >= r.h1 || r.w0 >= r.w1 || r.h1 > shape.h || r.w1 > shape.w)
            throw ArgumentError("scene: region " + std::to_string(i) + " is empty or out of bounds");
        for (std::size_t j = 0; j < i; ++j)
            if (overlaps(r, regions[j].rect))
                throw ArgumentError("scene: regions " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
    }
}

SceneSpec standard_scene(std::uint64_t seed, double noise_sigma) {
    SceneSpec spec;
    spec.shape = Shape4{2, 8, 16, 16};
    spec.regions = {
        {{1, 7, 1, 7}, RegionKind::DynamicSalient},
        {{1, 7, 9, 15}, RegionKind::StaticSalient},
        {{9, 15, 1, 7}, RegionKind::DynamicNonsalient},
        {{9, 15, 9, 15}, RegionKind::StaticNonsalient},
    };
    spec.motion = Motion{MotionKind::Oscillate, 2.0, 0.0};
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    return spec;
}

RegionLabelMap::RegionLabelMap(std::size_t frames, std::size_t rows, std::size_t cols)
    : frames_(frames), rows_(rows), cols_(cols), labels_(frames * rows * cols, RegionKind::StaticNonsalient) {}

RegionLabelMap RegionLabelMap::select_frames(const std::vector<std::size_t> &indices) const {
    RegionLabelMap out(indices.size(), rows_, cols_);
    const std::size_t plane = rows_ * cols_;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= frames_)
            throw ArgumentError("label frame index out of range");
        std::copy_n(labels_.begin() + static_cast<std::ptrdiff_t>(indices[i] * plane), plane,
                    out.labels_.begin() + static_cast<std::ptrdiff_t>(i * plane));
    }
    return out;
}

Scene generate(const SceneSpec &spec) {
    spec.validate();
    const Shape4 s = spec.shape;
    RegionLabelMap labels(s.t, s.h, s.w);
    std::vector<double> frame_values(s.t * s.plane(), 0.0);

    for (std::size_t t = 0; t < s.t; ++t) {
        for (const Region &region : spec.regions) {
            const bool dynamic = is_dynamic(region.kind);
            const double amp = is_salient(region.kind) ? spec.amp_salient : spec.amp_nonsalient;
            double value = amp;
            std::size_t shift = 0;
            switch (spec.motion.kind) {
            case MotionKind::Oscillate:
                if (dynamic)
                    value = amp * (1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * spec.motion.frequency *
                                                        static_cast<double>(t) / static_cast<double>(s.t)));
                break;
            case MotionKind::Translate:
            case MotionKind::Pan:
                if (dynamic || spec.motion.kind == MotionKind::Pan) {
                    const double d = std::floor(spec.motion.velocity * static_cast<double>(t));
                    const auto w = static_cast<long long>(s.w);
                    shift = static_cast<std::size_t>(((static_cast<long long>(d) % w) + w) % w);
                }
                break;
            }
            for (std::size_t h = region.rect.h0; h < region.rect.h1; ++h)
                for (std::size_t w0 = region.rect.w0; w0 < region.rect.w1; ++w0) {
                    const std::size_t w = (w0 + shift) % s.w;
                    frame_values[(t * s.h + h) * s.w + w] = value;
                    labels.set(t, h, w, region.kind);
                }
        }
    }

    std::vector<double> data(s.numel());
    Rng rng(spec.seed);
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t i = 0; i < frame_values.size(); ++i) {
            const double noise = spec.noise_sigma > 0.0 ? spec.noise_sigma * rng.normal() : 0.0;
            data[c * frame_values.size() + i] = frame_values[i] + noise;
        }
    return Scene{RTensor(s.dims(), std::move(data)), std::move(labels)};
}

std::map<RegionKind, double> region_mean_amplitudes(const RTensor &out, const RegionLabelMap &labels) {
    const Shape4 s = out.shape4();
    if (s.t != labels.frames() || s.h != labels.rows() || s.w != labels.cols())
        throw ShapeError("region_mean_amplitudes: labels do not match " + to_string(s));
    std::array<double, 4> sum{};
    std::array<std::size_t, 4> count{};
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t t = 0; t < s.t; ++t)
            for (std::size_t h = 0; h < s.h; ++h)
                for (std::size_t w = 0; w < s.w; ++w) {
                    const auto k = static_cast<std::size_t>(labels.at(t, h, w));
                    sum[k] += std::abs(out[s.index(c, t, h, w)]);
                    ++count[k];
                }
    std::map<RegionKind, double> means;
    for (RegionKind k : kAllKinds) {
        const auto i = static_cast<std::size_t>(k);
        if (count[i] > 0)
            means[k] = sum[i] / static_cast<double>(count[i]);
    }
    return means;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string &token, const std::string &key) {
    T value{};
    const char *end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ArgumentError("scene: bad value '" + token + "' for " + key);
    return value;
}

std::vector<std::string> split_words(const std::string &s) {
    std::string cleaned = s;
    for (char &ch : cleaned)
        if (ch == ',')
            ch = ' ';
    std::istringstream is(cleaned);
    std::vector<std::string> words;
    for (std::string w; is >> w;)
        words.push_back(w);
    return words;
}

} // namespace

SceneSpec parse_scene(std::istream &is) {
    SceneSpec spec;
    spec.regions.clear();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ArgumentError("scene line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const auto words = split_words(body.substr(eq + 1));
        const auto need = [&](std::size_t n) {
            if (words.size() != n)
                throw ArgumentError("scene line " + std::to_string(lineno) + ": " + key + " takes " +
                                    std::to_string(n) + " values");
        };
        if (key == "shape") {
            need(4);
            spec.shape = Shape4::make(parse_number<std::size_t>(words[0], key), parse_number<std::size_t>(words[1], key),
                                      parse_number<std::size_t>(words[2], key), parse_number<std::size_t>(words[3], key));
        } else if (key == "seed") {
            need(1);
            spec.seed = parse_number<std::uint64_t>(words[0], key);
        } else if (key == "amp_salient") {
            need(1);
            spec.amp_salient = parse_number<double>(words[0], key);
        } else if (key == "amp_nonsalient") {
            need(1);
            spec.amp_nonsalient = parse_number<double>(words[0], key);
        } else if (key == "noise_sigma") {
            need(1);
            spec.noise_sigma = parse_number<double>(words[0], key);
        } else if (key == "motion") {
            need(2);
            const double v = parse_number<double>(words[1], key);
            if (words[0] == "oscillate")
                spec.motion = Motion{MotionKind::Oscillate, v, 0.0};
            else if (words[0] == "translate")
                spec.motion = Motion{MotionKind::Translate, 0.0, v};
            else if (words[0] == "pan")
                spec.motion = Motion{MotionKind::Pan, 0.0, v};
            else
                throw ArgumentError("scene: unknown motion '" + words[0] + "'");
        } else if (key == "region") {
            need(5);
            Region r;
            r.kind = parse_region_kind(words[0]);
            r.rect = Rect{parse_number<std::size_t>(words[1], key), parse_number<std::size_t>(words[2], key),
                          parse_number<std::size_t>(words[3], key), parse_number<std::size_t>(words[4], key)};
            spec.regions.push_back(r);
        } else {
            throw ArgumentError("scene line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

SceneSpec load_scene(const std::filesystem::path &path) {
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open scene file " + path.string());
    return parse_scene(is);
}

std::string format_scene(const SceneSpec &spec) {
    std::ostringstream os;
    os.precision(17);
    os << "shape = " << spec.shape.c << ' ' << spec.shape.t << ' ' << spec.shape.h << ' ' << spec.shape.w << '\n';
    os << "seed = " << spec.seed << '\n';
    os << "amp_salient = " << spec.amp_salient << '\n';
    os << "amp_nonsalient = " << spec.amp_nonsalient << '\n';
    os << "noise_sigma = " << spec.noise_sigma << '\n';
    switch (spec.motion.kind) {
    case MotionKind::Oscillate:
        os << "motion = oscillate " << spec.motion.frequency << '\n';
        break;
    case MotionKind::Translate:
        os << "motion = translate " << spec.motion.velocity << '\n';
        break;
    case MotionKind::Pan:
        os << "motion = pan " << spec.motion.velocity << '\n';
        break;
    }
    for (const Region &r : spec.regions)
        os << "region = " << to_string(r.kind) << ' ' << r.rect.h0 << ' ' << r.rect.h1 << ' ' << r.rect.w0 << ' '
           << r.rect.w1 << '\n';
    return os.str();
}

} // namespace far::synth
