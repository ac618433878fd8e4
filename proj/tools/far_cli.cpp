// far: command-line driver over the far C API.
//
//   far run --scene demo.scene --frames 8 --seed 7 --out d/
//   far run --config d/run.cfg --out d2/
//   far check all
//   far bench --op all --out b/
//   far sample --total 300 --frames 8 --seed 1

#include "far/far.h"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitMissingInput = 2;
constexpr int kExitShape = 3;

struct CallError {
    far_status status;
    std::string message;
};

void check(far_status status) {
    if (status != FAR_OK)
        throw CallError{status, far_last_error()};
}

struct TensorDeleter {
    void operator()(far_tensor *t) const { far_tensor_free(t); }
};
struct SceneDeleter {
    void operator()(far_scene *s) const { far_scene_free(s); }
};
struct ReportDeleter {
    void operator()(far_report *r) const { far_report_free(r); }
};
using Tensor = std::unique_ptr<far_tensor, TensorDeleter>;
using Scene = std::unique_ptr<far_scene, SceneDeleter>;
using Report = std::unique_ptr<far_report, ReportDeleter>;

template <typename Fn>
Tensor make(Fn &&fn) {
    far_tensor *raw = nullptr;
    check(fn(&raw));
    return Tensor(raw);
}

std::vector<size_t> dims_of(const far_tensor *t) {
    std::vector<size_t> d(far_tensor_rank(t));
    far_tensor_dims(t, d.data());
    return d;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw CallError{FAR_ERR_IO, "cannot write " + path.string()};
}

/// Apply FAR_THREADS over the --threads flag when set.
size_t resolve_threads(size_t flag) {
    if (const char *env = std::getenv("FAR_THREADS"); env && *env) {
        char *end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (*end == '\0' && v > 0)
            return v;
        std::cerr << "far: ignoring invalid FAR_THREADS=" << env << '\n';
    }
    return flag;
}

// ---- run -----------------------------------------------------------------

struct RunOptions {
    std::string scene;
    std::string input;
    std::string config;
    std::string out = "far_out";
    size_t frames = 8;
    uint64_t seed = 0;
    double lambda = 0.01;
    std::string combine = "product";
    std::string weights = "quadratic";
    std::string norm = "l2";
    std::string apply = "strict";
    double beta = 1.0;
    size_t threads = 1;
};

const std::map<std::string, far_combine> kCombine{{"product", FAR_COMBINE_PRODUCT},
                                                  {"additive", FAR_COMBINE_ADDITIVE}};
const std::map<std::string, far_weight_variant> kWeights{{"quadratic", FAR_WEIGHTS_QUADRATIC},
                                                         {"literal", FAR_WEIGHTS_LITERAL}};
const std::map<std::string, far_norm> kNorm{{"l2", FAR_NORM_L2}, {"l1", FAR_NORM_L1}};
const std::map<std::string, far_application> kApply{{"strict", FAR_APPLY_STRICT}, {"residual", FAR_APPLY_RESIDUAL}};

const char *const kRegionNames[4] = {"dynamic-salient", "static-salient", "dynamic-nonsalient", "static-nonsalient"};

void add_run_options(CLI::App *run, RunOptions &o) {
    run->add_option("--scene", o.scene, "scene description file");
    run->add_option("--input", o.input, "(c,t,h,w) clip as FTF; passed through the stem");
    run->add_option("--config", o.config, "run.cfg from an earlier run; other flags override it");
    run->add_option("--out", o.out, "output directory");
    run->add_option("--frames", o.frames, "frames to sample")->check(CLI::PositiveNumber);
    run->add_option("--seed", o.seed, "sampling and stem seed");
    run->add_option("--lambda", o.lambda, "attention residual scale");
    run->add_option("--combine", o.combine)->check(CLI::IsMember({"product", "additive"}));
    run->add_option("--weights", o.weights)->check(CLI::IsMember({"quadratic", "literal"}));
    run->add_option("--norm", o.norm)->check(CLI::IsMember({"l2", "l1"}));
    run->add_option("--apply", o.apply)->check(CLI::IsMember({"strict", "residual"}));
    run->add_option("--beta", o.beta, "residual mask strength");
    run->add_option("--threads", o.threads)->check(CLI::PositiveNumber);
}

std::string format_run_config(const RunOptions &o) {
    std::ostringstream os;
    os << "subcommand = run\n";
    if (!o.scene.empty())
        os << "scene = " << o.scene << '\n';
    if (!o.input.empty())
        os << "input = " << o.input << '\n';
    os << "frames = " << o.frames << '\n';
    os << "seed = " << o.seed << '\n';
    os << "lambda = " << fmt(o.lambda) << '\n';
    os << "combine = " << o.combine << '\n';
    os << "weights = " << o.weights << '\n';
    os << "norm = " << o.norm << '\n';
    os << "apply = " << o.apply << '\n';
    os << "beta = " << fmt(o.beta) << '\n';
    os << "threads = " << o.threads << '\n';
    os << "out = " << o.out << '\n';
    return os.str();
}

/// Turns run.cfg into flags placed ahead of the command line, so explicit
/// flags win.
std::vector<std::string> config_as_flags(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw CallError{FAR_ERR_IO, "cannot read config " + path};
    std::vector<std::string> flags;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CallError{FAR_ERR_FORMAT, path + ":" + std::to_string(lineno) + ": expected key = value"};
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "subcommand") {
            if (value != "run")
                throw CallError{FAR_ERR_FORMAT, path + ": not a run config"};
            continue;
        }
        flags.push_back("--" + key);
        flags.push_back(value);
    }
    return flags;
}

struct Stats {
    double means[4] = {};
    size_t counts[4] = {};
};

double mean_abs(const far_tensor *t) {
    const size_t n = far_tensor_numel(t);
    const double *d = far_tensor_data(t);
    double s = 0.0;
    for (size_t i = 0; i < n; ++i)
        s += std::abs(d[i]);
    return n ? s / static_cast<double>(n) : 0.0;
}

int cmd_run(RunOptions o) {
    if (o.scene.empty() && o.input.empty()) {
        std::cerr << "far run: missing input (give --scene, --input or --config)\n";
        return kExitMissingInput;
    }
    if (!o.scene.empty() && !o.input.empty()) {
        std::cerr << "far run: --scene and --input are exclusive\n";
        return kExitFailure;
    }
    const std::string source = o.scene.empty() ? o.input : o.scene;
    if (!fs::exists(source)) {
        std::cerr << "far run: missing input " << source << '\n';
        return kExitMissingInput;
    }
    // Record absolute paths so the config replays from any directory.
    (o.scene.empty() ? o.input : o.scene) = fs::absolute(source).lexically_normal().string();

    o.threads = resolve_threads(o.threads);
    far_set_threads(o.threads);

    far_fo_config fo_cfg = far_fo_config_default();
    fo_cfg.variant = kWeights.at(o.weights);
    fo_cfg.norm = kNorm.at(o.norm);
    fo_cfg.application = kApply.at(o.apply);
    fo_cfg.beta = o.beta;
    far_fa_config fa_cfg = far_fa_config_default();
    fa_cfg.lambda = o.lambda;
    fa_cfg.combine = kCombine.at(o.combine);

    Scene scene;
    Tensor raw;
    if (!o.scene.empty()) {
        far_scene *s = nullptr;
        check(far_scene_load(o.scene.c_str(), &s));
        scene.reset(s);
        raw = make([&](far_tensor **out) { return far_scene_features(scene.get(), out); });
    } else {
        raw = make([&](far_tensor **out) { return far_tensor_read(o.input.c_str(), out); });
        if (far_tensor_dtype(raw.get()) != FAR_REAL64 || far_tensor_rank(raw.get()) != 4)
            throw CallError{FAR_ERR_SHAPE, "input must be a real (c,t,h,w) tensor"};
    }

    const size_t total = dims_of(raw.get())[1];
    std::vector<size_t> indices(o.frames);
    far_sample_info info{};
    check(far_sample_plan(total, o.frames, o.seed, indices.data(), &info));
    Tensor sampled = make([&](far_tensor **out) {
        return far_gather_frames(raw.get(), indices.data(), indices.size(), out);
    });

    Tensor features;
    if (scene) {
        check(far_scene_select_frames(scene.get(), indices.data(), indices.size()));
        features = std::move(sampled);
    } else {
        const size_t widths[3] = {dims_of(sampled.get())[0], 16, 48};
        features = make([&](far_tensor **out) { return far_stem_forward(sampled.get(), widths, o.seed, out); });
    }

    Tensor mask = make([&](far_tensor **out) { return far_fo_mask(features.get(), &fo_cfg, out); });
    Tensor fo = make([&](far_tensor **out) { return far_fo_disentangle(features.get(), &fo_cfg, out); });
    Tensor fa = make([&](far_tensor **out) { return far_fa_forward(features.get(), &fa_cfg, out); });
    Tensor fused = make([&](far_tensor **out) { return far_tensor_add(fo.get(), fa.get(), out); });
    Tensor neg = make([&](far_tensor **out) { return far_tensor_scale(features.get(), -1.0, out); });
    Tensor fa_delta = make([&](far_tensor **out) { return far_tensor_add(fa.get(), neg.get(), out); });

    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_text(dir / "run.cfg", format_run_config(o));
    check(far_tensor_write(features.get(), (dir / "features.ftf").c_str()));
    check(far_tensor_write(mask.get(), (dir / "mask.ftf").c_str()));
    check(far_tensor_write(fo.get(), (dir / "fo.ftf").c_str()));
    check(far_tensor_write(fa.get(), (dir / "fa.ftf").c_str()));
    check(far_tensor_write(fused.get(), (dir / "fused.ftf").c_str()));
    const size_t channels = dims_of(mask.get())[0];
    for (size_t c = 0; c < channels; ++c) {
        const std::string name = "mask_c" + std::to_string(c) + ".pgm";
        check(far_write_pgm(mask.get(), c, 0, (dir / name).c_str()));
    }

    std::ostringstream stats;
    stats << "region,count,mean_input,mean_fo,mean_fa,mean_fused,fa_delta\n";
    if (scene) {
        const far_tensor *cols[5] = {features.get(), fo.get(), fa.get(), fused.get(), fa_delta.get()};
        Stats s[5];
        for (int i = 0; i < 5; ++i)
            check(far_scene_region_means(scene.get(), cols[i], s[i].means, s[i].counts));
        for (int k = 0; k < 4; ++k) {
            if (s[0].counts[k] == 0)
                continue;
            stats << kRegionNames[k] << ',' << s[0].counts[k];
            for (int i = 0; i < 5; ++i)
                stats << ',' << fmt(s[i].means[k]);
            stats << '\n';
        }
    } else {
        stats << "all," << far_tensor_numel(features.get()) << ',' << fmt(mean_abs(features.get())) << ','
              << fmt(mean_abs(fo.get())) << ',' << fmt(mean_abs(fa.get())) << ',' << fmt(mean_abs(fused.get()))
              << ',' << fmt(mean_abs(fa_delta.get())) << '\n';
    }
    write_text(dir / "stats.csv", stats.str());

    std::cout << "sampled " << o.frames << " of " << total << " frames (step " << info.step << ", offset "
              << info.offset << ")\n";
    std::cout << "wrote " << dir.string() << " with " << o.threads << " thread(s)\n";
    return 0;
}

// ---- check ---------------------------------------------------------------

int cmd_check(const std::string &suite, const std::string &fault) {
    static const char *const kSuites[] = {"fft", "fo", "fa", "grad", "all"};
    if (std::find(std::begin(kSuites), std::end(kSuites), suite) == std::end(kSuites)) {
        std::cerr << "far check: unknown suite '" << suite << "' (expected fft, fo, fa, grad or all)\n";
        return 2;
    }
    far_report *raw = nullptr;
    size_t failed = 0;
    check(far_check_run(suite.c_str(), fault.empty() ? FAR_FAULT_NONE : FAR_FAULT_INVERSE_NORMALIZATION, &raw,
                        &failed));
    Report report(raw);
    std::cout << far_report_csv(report.get());
    std::cout << (failed ? std::to_string(failed) + " check(s) failed\n" : std::string("all checks ok\n"));
    return failed ? kExitFailure : 0;
}

// ---- bench ---------------------------------------------------------------

struct BenchOptions {
    std::string op = "all";
    std::vector<size_t> sizes{64, 128, 256, 512, 1024};
    size_t channels = 16;
    size_t reps = 5;
    std::string out = "far_bench";
    bool overhead = false;
    size_t mid_channels = 48;
    size_t threads = 1;
};

std::string shape_string(const size_t d[4]) {
    return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]) + "x" +
           std::to_string(d[3]);
}

int cmd_bench(const BenchOptions &o) {
    far_set_threads(resolve_threads(o.threads));
    const std::map<std::string, far_op> ops{{"fa", FAR_OP_FA}, {"sa", FAR_OP_SA}, {"fo", FAR_OP_FO}};
    std::vector<std::string> selected;
    if (o.op == "all")
        selected = {"fa", "sa", "fo"};
    else
        selected = {o.op};

    const fs::path dir(o.out);
    fs::create_directories(dir);
    std::string timing = far_timing_csv_header();
    std::string flops = far_flops_csv_header();
    for (const std::string &name : selected) {
        far_report *raw = nullptr;
        check(far_bench_sweep(ops.at(name), o.sizes.data(), o.sizes.size(), o.channels, o.reps, &raw));
        Report r(raw);
        timing += far_report_csv(r.get());
        flops += far_report_flops_csv(r.get());
        std::vector<double> x, y;
        for (size_t i = 0; i < far_report_rows(r.get()); ++i) {
            size_t tokens = 0;
            double median = 0.0;
            check(far_report_row(r.get(), i, &tokens, &median));
            x.push_back(static_cast<double>(tokens));
            y.push_back(median);
        }
        double slope = 0.0;
        check(far_loglog_slope(x.data(), y.data(), x.size(), &slope));
        std::cout << name << " log-log time slope: " << fmt(slope) << '\n';
    }
    if (o.overhead) {
        const size_t mid[4] = {o.mid_channels, 4, 135, 135};
        far_report *raw = nullptr;
        check(far_flops(FAR_OP_FAR, mid, &raw));
        Report r(raw);
        flops += far_report_csv(r.get());
        std::cout << "far overhead at " << shape_string(mid) << ": " << fmt(far_report_total(r.get()) * 1e-9)
                  << " GFLOPs\n";
    }
    write_text(dir / "timing.csv", timing);
    write_text(dir / "flops.csv", flops);
    std::cout << "wrote " << (dir / "timing.csv").string() << " and " << (dir / "flops.csv").string() << '\n';
    return 0;
}

// ---- sample --------------------------------------------------------------

int cmd_sample(size_t total, size_t frames, uint64_t seed) {
    std::vector<size_t> indices(frames);
    far_sample_info info{};
    check(far_sample_plan(total, frames, seed, indices.data(), &info));
    std::cout << "total,want,step,offset,cycled,indices\n";
    std::cout << total << ',' << frames << ',' << info.step << ',' << info.offset << ',' << info.cycled << ',';
    for (size_t i = 0; i < indices.size(); ++i)
        std::cout << (i ? ";" : "") << indices[i];
    std::cout << '\n';
    return 0;
}

int exit_code_for(const CallError &e) {
    switch (e.status) {
    case FAR_ERR_SHAPE:
        return kExitShape;
    default:
        return kExitFailure;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fourier object disentanglement and space-time attention"};
    app.require_subcommand(1);
    app.set_version_flag("--version", far_version());
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    RunOptions run_opts;
    auto *run = app.add_subcommand("run", "sample, disentangle, attend and fuse one clip");
    add_run_options(run, run_opts);

    std::string suite;
    std::string fault;
    auto *chk = app.add_subcommand("check", "run the self-check suites");
    chk->add_option("suite", suite, "fft, fo, fa, grad or all")->required();
    chk->add_option("--inject-fault", fault, "deliberately break a component")
        ->check(CLI::IsMember({"fft-inverse-norm"}));

    BenchOptions bench_opts;
    auto *bench = app.add_subcommand("bench", "FLOP model and timing sweep");
    bench->add_option("--op", bench_opts.op)->check(CLI::IsMember({"fa", "sa", "fo", "all"}));
    bench->add_option("--sizes", bench_opts.sizes, "token counts T*H*W")->delimiter(',');
    bench->add_option("--channels", bench_opts.channels)->check(CLI::PositiveNumber);
    bench->add_option("--reps", bench_opts.reps)->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_opts.out, "output directory");
    bench->add_flag("--overhead", bench_opts.overhead, "also report FO + FA FLOPs at the mid-level shape");
    bench->add_option("--mid-channels", bench_opts.mid_channels)->check(CLI::PositiveNumber);
    bench->add_option("--threads", bench_opts.threads)->check(CLI::PositiveNumber);

    size_t total = 0;
    size_t frames = 8;
    uint64_t seed = 0;
    auto *sample = app.add_subcommand("sample", "print a frame sampling plan");
    sample->add_option("--total", total, "frames in the video")->required();
    sample->add_option("--frames", frames, "frames to keep");
    sample->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) {
            if (!run_opts.config.empty()) {
                // Re-parse with the stored settings first and the command line after.
                std::vector<std::string> args = config_as_flags(run_opts.config);
                for (int i = 2; i < argc; ++i)
                    args.emplace_back(argv[i]);
                RunOptions replay;
                CLI::App again;
                again.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
                add_run_options(&again, replay);
                std::reverse(args.begin(), args.end());
                try {
                    again.parse(args);
                } catch (const CLI::ParseError &e) {
                    return again.exit(e);
                }
                replay.config.clear();
                return cmd_run(replay);
            }
            return cmd_run(run_opts);
        }
        if (chk->parsed())
            return cmd_check(suite, fault);
        if (bench->parsed())
            return cmd_bench(bench_opts);
        if (sample->parsed())
            return cmd_sample(total, frames, seed);
    } catch (const CallError &e) {
        std::cerr << "far: " << far_status_name(e.status) << ": " << e.message << '\n';
        return exit_code_for(e);
    } catch (const std::exception &e) {
        std::cerr << "far: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
