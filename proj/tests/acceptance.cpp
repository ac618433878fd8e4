// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include "far/bench.hpp"
#include "far/fa.hpp"
#include "far/fft.hpp"
#include "far/fo.hpp"
#include "far/grad.hpp"
#include "far/rng.hpp"
#include "far/sampler.hpp"
#include "far/synth.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace far;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::vector<Complex> signal(std::size_t n, std::uint64_t seed) {
    const auto re = oracle::uniform(n, -1, 1, seed);
    const auto im = oracle::uniform(n, -1, 1, seed ^ 0xabcdefULL);
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = {re[i], im[i]};
    return x;
}

std::vector<double> channel(const RTensor &f, std::size_t c) {
    const Shape4 s = f.shape4();
    const std::size_t n = s.t * s.plane();
    return {f.data().begin() + static_cast<std::ptrdiff_t>(c * n),
            f.data().begin() + static_cast<std::ptrdiff_t>((c + 1) * n)};
}

Outcome fft_oracle() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (std::size_t n = 1; n <= 64; ++n)
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto x = signal(n, seed * 1000 + n);
            worst = std::max(worst, oracle::max_abs_diff(fft1d(x, Direction::Forward), oracle::dft(x, -1)));
            worst = std::max(worst, oracle::max_abs_diff(fft1d(x, Direction::Inverse), oracle::dft(x, +1)));
        }
    const double secs = seconds_since(start);
    return {worst < 1e-10 && secs < 30.0, "max err " + sci(worst) + " (< 1e-10), " + sci(secs) + " s (< 30 s)"};
}

Outcome parseval_inversion() {
    std::vector<std::size_t> sizes;
    for (std::size_t n = 1; n <= 64; ++n)
        sizes.push_back(n);
    for (std::size_t n : {97u, 127u, 128u, 243u, 500u, 1000u, 1024u, 2047u, 2048u, 2310u, 3000u, 4093u, 4095u, 4096u})
        sizes.push_back(n);
    double parseval = 0.0, inversion = 0.0;
    for (std::size_t n : sizes)
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto x = signal(n, seed + 31 * n);
            const auto X = fft1d(x, Direction::Forward);
            const auto back = fft1d(X, Direction::Inverse);
            double ex = 0, eX = 0, mx = 0, diff = 0;
            for (std::size_t i = 0; i < n; ++i) {
                ex += std::norm(x[i]);
                eX += std::norm(X[i]);
                mx = std::max(mx, std::abs(x[i]));
                diff = std::max(diff, std::abs(back[i] - x[i]));
            }
            parseval = std::max(parseval, std::abs(ex - eX / double(n)) / ex);
            inversion = std::max(inversion, diff / mx);
        }
    return {parseval < 1e-10 && inversion < 1e-10,
            "parseval " + sci(parseval) + ", inversion " + sci(inversion) + " (< 1e-10, N <= 4096)"};
}

Outcome wiener_khinchin() {
    double worst = 0.0, imag_worst = 0.0;
    for (std::size_t rows = 1; rows <= 8; ++rows)
        for (std::size_t cols = 1; cols <= 12; ++cols)
            for (std::uint64_t seed = 0; seed < 50; ++seed) {
                const RTensor a = testing::uniform(Shape4{1, rows, 1, cols}, seed * 97 + rows * 13 + cols);
                double imag = 0.0;
                const RTensor r = fa::spectral_autocorrelation(a, &imag);
                imag_worst = std::max(imag_worst, imag);
                worst = std::max(worst, oracle::max_abs_diff(testing::vec(r), oracle::autocorr(testing::vec(a), rows, cols)));
            }
    return {worst < 1e-9 && imag_worst < 1e-10,
            "max err " + sci(worst) + " (< 1e-9), imag residue " + sci(imag_worst) + " (< 1e-10)"};
}

Outcome static_annihilation() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Shape4 s{1 + seed % 3, 1 + seed % 9, 1 + seed % 5, 1 + seed % 4};
        const RTensor frame = testing::uniform(Shape4{s.c, 1, s.h, s.w}, seed);
        std::vector<double> v(s.numel());
        for (std::size_t c = 0; c < s.c; ++c)
            for (std::size_t t = 0; t < s.t; ++t)
                for (std::size_t i = 0; i < s.plane(); ++i)
                    v[s.index(c, t, 0, 0) + i] = frame[c * s.plane() + i];
        for (const auto held = fo::compute_mask(RTensor(s.dims(), v), {}).values(); double m : held.data())
            worst = std::max(worst, std::abs(m));
    }
    return {worst < 1e-12, "max |mask| " + sci(worst) + " (< 1e-12)"};
}

Outcome fo_oracle() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Shape4 s{1 + seed % 3, 1 + seed % 8, 1 + (seed / 3) % 5, 1 + (seed / 2) % 5};
        const RTensor f = testing::uniform(s, seed);
        const auto ref = oracle::mask(testing::vec(f), s.c, s.t, s.h, s.w);
        worst = std::max(worst, oracle::max_abs_diff(testing::vec(fo::compute_mask(f, {}).values()), ref));
    }
    return {worst < 1e-9, "max err " + sci(worst) + " (< 1e-9), shapes up to (3,8,5,5), 50 seeds"};
}

Outcome region_ordering() {
    using synth::RegionKind;
    int ordered = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const synth::Scene s = synth::generate(synth::standard_scene(seed, 0.05));
        const RTensor out = fo::disentangle(s.features, {}, {fo::Application::Residual, 1.0});
        const auto m = synth::region_mean_amplitudes(out, s.labels);
        ordered += m.at(RegionKind::DynamicSalient) > m.at(RegionKind::StaticSalient) &&
                   m.at(RegionKind::StaticSalient) > m.at(RegionKind::DynamicNonsalient) &&
                   m.at(RegionKind::DynamicNonsalient) > m.at(RegionKind::StaticNonsalient);
    }
    return {ordered >= 19, std::to_string(ordered) + "/20 seeds ordered (>= 19)"};
}

Outcome fa_identity_linearity() {
    bool identity = true;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Shape4 s{1 + seed % 3, 1 + seed % 5, 1 + seed % 4, 1 + seed % 3};
        const RTensor f = testing::uniform(s, seed);
        for (fa::Combine c : {fa::Combine::Product, fa::Combine::Additive}) {
            identity = identity && fa::fourier_attention(f, {0.0, c}) == f;
            const RTensor unit = fa::fourier_attention(f, {1.0, c});
            for (double lambda : {0.01, 0.3, 2.5}) {
                const RTensor out = fa::fourier_attention(f, {lambda, c});
                for (std::size_t i = 0; i < f.numel(); ++i) {
                    const double expect = lambda * (unit[i] - f[i]);
                    const double scale = std::max({std::abs(f[i]), std::abs(expect), 1e-300});
                    worst = std::max(worst, std::abs((out[i] - f[i]) - expect) / scale);
                }
            }
        }
    }
    return {identity && worst < 1e-13,
            std::string(identity ? "lambda 0 exact" : "lambda 0 NOT exact") + ", linearity residual " + sci(worst) +
                " (< 1e-13)"};
}

Outcome gradients() {
    double fo_worst = 0.0, fa_worst = 0.0, adj_worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Shape4 s{1 + seed % 2, 2 + seed % 4, 1 + seed % 3, 1 + (seed / 2) % 3};
        const RTensor f = testing::uniform(s, seed);
        const RTensor u = testing::uniform(s, seed + 1000);
        const RTensor d = testing::uniform(s, seed + 2000);
        const auto fd = [&](const std::function<RTensor(const RTensor &)> &op) {
            const double eps = 1e-5;
            return (grad::inner(u, op(add(f, scale(d, eps)))) - grad::inner(u, op(add(f, scale(d, -eps))))) /
                   (2 * eps);
        };
        const auto rel = [](double a, double b) {
            return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
        };
        fo_worst = std::max(fo_worst, rel(grad::inner(grad::vjp_disentangle(f, {}, u), d),
                                          fd([](const RTensor &x) { return fo::disentangle(x, {}); })));
        const fa::FaConfig cfg{1.0, fa::Combine::Product};
        fa_worst = std::max(fa_worst, rel(grad::inner(grad::vjp_fourier_attention(f, cfg, u), d),
                                          fd([&](const RTensor &x) { return fa::fourier_attention(x, cfg); })));

        const CTensor x(s.dims(), signal(s.numel(), seed + 3000));
        const CTensor y(s.dims(), signal(s.numel(), seed + 4000));
        adj_worst = std::max(adj_worst, std::abs(grad::inner(transform_time_axis(x, Direction::Forward), y) -
                                                 grad::inner(x, grad::adjoint_time_axis(y))));
        const Dims m{s.c, s.t, s.plane()};
        const CTensor xm = reshape(x, m), ym = reshape(y, m);
        adj_worst = std::max(adj_worst, std::abs(grad::inner(transform2(xm, Direction::Forward), ym) -
                                                 grad::inner(xm, grad::adjoint_fft2(ym))));
        adj_worst = std::max(adj_worst, std::abs(grad::inner(transform2(xm, Direction::Inverse), ym) -
                                                 grad::inner(xm, grad::adjoint_ifft2(ym))));
    }
    return {fo_worst < 1e-6 && fa_worst < 1e-6 && adj_worst < 1e-10,
            "disentangle " + sci(fo_worst) + ", attention " + sci(fa_worst) + " (< 1e-6, 50 probes); adjoint " +
                sci(adj_worst) + " (< 1e-10)"};
}

Outcome complexity() {
    const std::vector<std::size_t> sizes{64, 128, 256, 512, 1024};
    const auto slope = [&](bench::BenchOp op) {
        const auto sweep = bench::complexity_sweep(op, sizes, 16, 7);
        std::vector<double> x, y;
        for (const auto &row : sweep.timings) {
            x.push_back(double(row.shape.t * row.shape.plane()));
            y.push_back(row.median_seconds);
        }
        return bench::loglog_slope(x, y);
    };
    const double sa = slope(bench::BenchOp::SelfAttention);
    const double fa_slope = slope(bench::BenchOp::FourierAttention);

    const double c = 16, n = 4096;
    const double hand_sa = 3 * 2 * c * c * n + 2 * (2 * c * n * n);
    const double hand_fa = 2 * (c * 5 * n * 12) + 6 * c * n + 3 * c * n;
    const Shape4 shape = bench::shape_for_tokens(4096, 16);
    const double ratio = fa::sa_flops(shape).total() / fa::fa_flops(shape).total();
    const bool exact = ratio == hand_sa / hand_fa;
    return {sa >= 1.7 && fa_slope <= 1.4 && exact,
            "sa slope " + sci(sa) + " (>= 1.7), fa slope " + sci(fa_slope) + " (<= 1.4), flop ratio " + sci(ratio) +
                (exact ? " = hand value" : " != hand value " + sci(hand_sa / hand_fa))};
}

Outcome overhead() {
    const double target = 14.41 - 14.39;
    const double g = bench::far_overhead_estimate(bench::reference_mid_shape()).gflops();
    return {g >= target / 5 && g <= target * 5,
            sci(g) + " GFLOPs at (48,4,135,135) vs " + sci(target) + " x/ 5 [" + sci(target / 5) + ", " +
                sci(target * 5) + "]"};
}

Outcome sampler() {
    bool deterministic = true, in_range = true;
    for (std::size_t total = 1; total <= 200; total += 3)
        for (std::size_t want = 1; want <= 32; ++want)
            for (std::uint64_t seed = 0; seed < 4; ++seed) {
                const SamplePlan p = plan_samples(total, want, seed);
                deterministic = deterministic && plan_samples(total, want, seed).indices == p.indices;
                for (std::size_t i : p.indices)
                    in_range = in_range && i < total;
                in_range = in_range && p.indices.size() == want;
            }
    const int n = 10000;
    const std::size_t bins = 12;
    std::vector<double> counts(bins, 0.0);
    for (int s = 0; s < n; ++s)
        counts[plan_samples(100, 8, static_cast<std::uint64_t>(s)).offset] += 1;
    double chi2 = 0.0;
    const double expected = double(n) / bins;
    for (double c : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    const double dof = bins - 1;
    const double bound = dof + 5 * std::sqrt(2 * dof);
    return {deterministic && in_range && chi2 < bound,
            std::string(deterministic ? "deterministic" : "NOT deterministic") + ", " +
                (in_range ? "in range" : "OUT OF RANGE") + ", chi2 " + sci(chi2) + " (< " + sci(bound) + ")"};
}

int run_cli(const std::string &args) {
    const std::string cmd = "\"" FAR_CLI "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome reproducibility() {
    const fs::path work = fs::path(FAR_TEST_WORKDIR) / "acceptance_work";
    fs::remove_all(work);
    fs::create_directories(work);
    const fs::path first = work / "first", second = work / "second", third = work / "third";
    const std::string scene = FAR_DATA_DIR "/demo.scene";
    bool ok = run_cli("run --scene \"" + scene + "\" --frames 8 --seed 7 --out \"" + first.string() + "\"") == 0;
    ok = ok && run_cli("run --config \"" + (first / "run.cfg").string() + "\" --out \"" + second.string() + "\"") == 0;
    ok = ok && run_cli("run --config \"" + (first / "run.cfg").string() + "\" --out \"" + third.string() + "\"") == 0;
    bool same = ok;
    for (const char *name : {"features.ftf", "mask.ftf", "fo.ftf", "fa.ftf", "fused.ftf"})
        same = same && !slurp(first / name).empty() && slurp(second / name) == slurp(first / name) &&
               slurp(third / name) == slurp(first / name);
    const auto start = Clock::now();
    const int check_code = run_cli("check all");
    const double secs = seconds_since(start);
    return {same && check_code == 0 && secs < 300.0,
            std::string(same ? "byte-identical FTF outputs" : "FTF outputs DIFFER") + ", check all exit " +
                std::to_string(check_code) + " in " + sci(secs) + " s (< 300 s)"};
}

} // namespace

int main() {
    struct Criterion {
        const char *name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"fft oracle equivalence", fft_oracle},
        {"parseval and inversion", parseval_inversion},
        {"wiener-khinchin", wiener_khinchin},
        {"fo static annihilation", static_annihilation},
        {"fo oracle", fo_oracle},
        {"four-region ordering", region_ordering},
        {"fa identity and linearity", fa_identity_linearity},
        {"gradient checks", gradients},
        {"complexity slopes", complexity},
        {"far flop overhead", overhead},
        {"sampler", sampler},
        {"end-to-end reproducibility", reproducibility},
    };
    int failed = 0;
    int index = 0;
    for (const Criterion &c : criteria) {
        ++index;
        Outcome o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.ok ? 0 : 1;
        std::printf("%s  %2d  %-28s %s\n", o.ok ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed;
}
