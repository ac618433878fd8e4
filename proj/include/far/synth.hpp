#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "far/tensor.hpp"

namespace far::synth {

enum class RegionKind : std::uint8_t {
    DynamicSalient,
    StaticSalient,
    DynamicNonsalient,
    StaticNonsalient,
};

inline constexpr std::array<RegionKind, 4> kAllKinds = {
    RegionKind::DynamicSalient, RegionKind::StaticSalient, RegionKind::DynamicNonsalient, RegionKind::StaticNonsalient};

std::string_view to_string(RegionKind kind);
/// Accepts the names produced by to_string ("dynamic-salient", ...).
RegionKind parse_region_kind(std::string_view name);

inline bool is_dynamic(RegionKind k) { return k == RegionKind::DynamicSalient || k == RegionKind::DynamicNonsalient; }
inline bool is_salient(RegionKind k) { return k == RegionKind::DynamicSalient || k == RegionKind::StaticSalient; }

/// Half-open row/column ranges [h0, h1) x [w0, w1).
struct Rect {
    std::size_t h0 = 0, h1 = 0, w0 = 0, w1 = 0;
};

struct Region {
    Rect rect;
    RegionKind kind = RegionKind::StaticNonsalient;
};

enum class MotionKind {
    /// Dynamic regions pulse in place: amp * (1 + 0.5 cos(2 pi k t / T)).
    Oscillate,
    /// Dynamic rects shift right by floor(v t) columns, wrapping around.
    Translate,
    /// Every rect shifts by floor(v t): a uniformly panning camera.
    Pan,
};

struct Motion {
    MotionKind kind = MotionKind::Oscillate;
    double frequency = 2.0;
    double velocity = 1.0;
};

struct SceneSpec {
    Shape4 shape{1, 8, 16, 16};
    std::vector<Region> regions;
    double amp_salient = 1.0;
    double amp_nonsalient = 0.2;
    Motion motion;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    /// Throws ArgumentError for out-of-bounds or overlapping rects,
    /// amplitudes not satisfying amp_salient > amp_nonsalient > 0, or a
    /// negative noise level.
    void validate() const;
};

/// Four 6x6 rects, one per kind, in the quadrants of a (2, 8, 16, 16) map;
/// oscillating at k = 2.
SceneSpec standard_scene(std::uint64_t seed, double noise_sigma = 0.05);

/// Region kind of every (t, h, w); pixels outside all rects are
/// static-nonsalient background.
class RegionLabelMap {
  public:
    RegionLabelMap() = default;
    RegionLabelMap(std::size_t frames, std::size_t rows, std::size_t cols);

    std::size_t frames() const { return frames_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    RegionKind at(std::size_t t, std::size_t h, std::size_t w) const { return labels_[(t * rows_ + h) * cols_ + w]; }
    void set(std::size_t t, std::size_t h, std::size_t w, RegionKind k) { labels_[(t * rows_ + h) * cols_ + w] = k; }

    /// Label frames in the given order (e.g. a sampling plan's indices).
    RegionLabelMap select_frames(const std::vector<std::size_t> &indices) const;

    friend bool operator==(const RegionLabelMap &, const RegionLabelMap &) = default;

  private:
    std::size_t frames_ = 0, rows_ = 0, cols_ = 0;
    std::vector<RegionKind> labels_;
};

struct Scene {
    RTensor features;
    RegionLabelMap labels;
};

/// Deterministic in `spec` (noise drawn from Rng(seed) in row-major order).
Scene generate(const SceneSpec &spec);

/// Mean |value| over every (c, t, h, w) whose (t, h, w) carries each label.
/// Kinds with no pixels are absent from the map.
std::map<RegionKind, double> region_mean_amplitudes(const RTensor &out, const RegionLabelMap &labels);

/// `key = value` lines; '#' starts a comment. Keys: shape (c t h w), seed,
/// amp_salient, amp_nonsalient, noise_sigma, motion (oscillate K |
/// translate V | pan V), and repeated region (kind h0 h1 w0 w1).
SceneSpec parse_scene(std::istream &is);
SceneSpec load_scene(const std::filesystem::path &path);
std::string format_scene(const SceneSpec &spec);

} // namespace far::synth
