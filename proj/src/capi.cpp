#include "far/far.h"

#include "far/backbone.hpp"
#include "far/bench.hpp"
#include "far/checks.hpp"
#include "far/fa.hpp"
#include "far/fft.hpp"
#include "far/fo.hpp"
#include "far/ftf.hpp"
#include "far/grad.hpp"
#include "far/parallel.hpp"
#include "far/pgm.hpp"
#include "far/sampler.hpp"
#include "far/synth.hpp"

#include <new>
#include <optional>
#include <sstream>
#include <string>

struct far_tensor {
    far::AnyTensor value;
};

struct far_scene {
    far::synth::SceneSpec spec;
    far::synth::Scene scene;
    std::string text;
};

struct far_report {
    std::string csv;
    std::string flops_csv;
    double total = 0.0;
    std::vector<std::pair<std::size_t, double>> rows;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
far_status guarded(Fn &&fn) {
    try {
        fn();
        g_last_error.clear();
        return FAR_OK;
    } catch (const far::ShapeError &e) {
        g_last_error = e.what();
        return FAR_ERR_SHAPE;
    } catch (const far::FormatError &e) {
        g_last_error = e.what();
        return FAR_ERR_FORMAT;
    } catch (const far::IoError &e) {
        g_last_error = e.what();
        return FAR_ERR_IO;
    } catch (const far::ResourceError &e) {
        g_last_error = e.what();
        return FAR_ERR_RESOURCE;
    } catch (const far::UnsupportedError &e) {
        g_last_error = e.what();
        return FAR_ERR_UNSUPPORTED;
    } catch (const far::ArgumentError &e) {
        g_last_error = e.what();
        return FAR_ERR_ARGUMENT;
    } catch (const std::bad_alloc &) {
        g_last_error = "out of memory";
        return FAR_ERR_RESOURCE;
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return FAR_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return FAR_ERR_INTERNAL;
    }
}

void require(const void *p, const char *what) {
    if (!p)
        throw far::ArgumentError(std::string(what) + " must not be null");
}

far::Dims to_dims(const size_t *dims, size_t rank) {
    require(dims, "dims");
    return far::Dims(dims, dims + rank);
}

const far::RTensor &real_of(const far_tensor *t) {
    require(t, "tensor");
    if (const auto *r = std::get_if<far::RTensor>(&t->value))
        return *r;
    throw far::ArgumentError("expected a real tensor");
}

const far::CTensor &complex_of(const far_tensor *t) {
    require(t, "tensor");
    if (const auto *c = std::get_if<far::CTensor>(&t->value))
        return *c;
    throw far::ArgumentError("expected a complex tensor");
}

template <typename T>
void emit(far_tensor **out, T tensor) {
    require(out, "output");
    *out = new far_tensor{far::AnyTensor(std::move(tensor))};
}

far::fo::FreqWeightMode fo_mode(const far_fo_config *cfg) {
    require(cfg, "fo config");
    return {cfg->variant == FAR_WEIGHTS_LITERAL ? far::fo::WeightVariant::Literal : far::fo::WeightVariant::Quadratic,
            cfg->norm == FAR_NORM_L1 ? far::fo::Norm::L1 : far::fo::Norm::L2};
}

far::fo::ApplyMode fo_apply(const far_fo_config *cfg) {
    return {cfg->application == FAR_APPLY_RESIDUAL ? far::fo::Application::Residual : far::fo::Application::Strict,
            cfg->beta};
}

far::Shape4 shape_of(const size_t dims[4]) {
    require(dims, "dims");
    return far::Shape4::make(dims[0], dims[1], dims[2], dims[3]);
}

} // namespace

extern "C" {

far_fo_config far_fo_config_default(void) { return {FAR_WEIGHTS_QUADRATIC, FAR_NORM_L2, FAR_APPLY_STRICT, 1.0}; }

far_fa_config far_fa_config_default(void) { return {0.01, FAR_COMBINE_PRODUCT}; }

const char *far_version(void) { return "1.0.0"; }

const char *far_last_error(void) { return g_last_error.c_str(); }

const char *far_status_name(far_status status) {
    switch (status) {
    case FAR_OK:
        return "ok";
    case FAR_ERR_ARGUMENT:
        return "argument error";
    case FAR_ERR_SHAPE:
        return "shape error";
    case FAR_ERR_FORMAT:
        return "format error";
    case FAR_ERR_IO:
        return "io error";
    case FAR_ERR_RESOURCE:
        return "resource error";
    case FAR_ERR_UNSUPPORTED:
        return "unsupported";
    case FAR_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void far_set_threads(size_t n) { far::set_num_threads(n); }

size_t far_get_threads(void) { return far::num_threads(); }

far_status far_tensor_zeros(const size_t *dims, size_t rank, far_tensor **out) {
    return guarded([&] { emit(out, far::make_tensor(to_dims(dims, rank), far::ZeroFill{})); });
}

far_status far_tensor_constant(const size_t *dims, size_t rank, double value, far_tensor **out) {
    return guarded([&] { emit(out, far::make_tensor(to_dims(dims, rank), far::ConstantFill{value})); });
}

far_status far_tensor_uniform(const size_t *dims, size_t rank, double lo, double hi, uint64_t seed,
                              far_tensor **out) {
    return guarded([&] { emit(out, far::make_tensor(to_dims(dims, rank), far::UniformFill{lo, hi, seed})); });
}

far_status far_tensor_from_data(far_dtype dtype, const size_t *dims, size_t rank, const double *data,
                                far_tensor **out) {
    return guarded([&] {
        require(data, "data");
        far::Dims d = to_dims(dims, rank);
        const std::size_t n = far::checked_numel(d);
        if (dtype == FAR_REAL64) {
            emit(out, far::RTensor(std::move(d), std::vector<double>(data, data + n)));
        } else if (dtype == FAR_COMPLEX128) {
            std::vector<far::Complex> values(n);
            for (std::size_t i = 0; i < n; ++i)
                values[i] = {data[2 * i], data[2 * i + 1]};
            emit(out, far::CTensor(std::move(d), std::move(values)));
        } else {
            throw far::ArgumentError("unknown dtype");
        }
    });
}

void far_tensor_free(far_tensor *t) { delete t; }

far_dtype far_tensor_dtype(const far_tensor *t) {
    return std::holds_alternative<far::CTensor>(t->value) ? FAR_COMPLEX128 : FAR_REAL64;
}

size_t far_tensor_rank(const far_tensor *t) {
    return std::visit([](const auto &x) { return x.rank(); }, t->value);
}

void far_tensor_dims(const far_tensor *t, size_t *dims) {
    std::visit(
        [dims](const auto &x) {
            for (std::size_t i = 0; i < x.rank(); ++i)
                dims[i] = x.extent(i);
        },
        t->value);
}

size_t far_tensor_numel(const far_tensor *t) {
    return std::visit([](const auto &x) { return x.numel(); }, t->value);
}

const double *far_tensor_data(const far_tensor *t) {
    if (const auto *r = std::get_if<far::RTensor>(&t->value))
        return r->data().data();
    // std::complex<double> is layout-compatible with double[2].
    return reinterpret_cast<const double *>(std::get<far::CTensor>(t->value).data().data());
}

far_status far_tensor_add(const far_tensor *a, const far_tensor *b, far_tensor **out) {
    return guarded([&] { emit(out, far::add(real_of(a), real_of(b))); });
}

far_status far_tensor_mul(const far_tensor *a, const far_tensor *b, far_tensor **out) {
    return guarded([&] { emit(out, far::mul(real_of(a), real_of(b))); });
}

far_status far_tensor_scale(const far_tensor *a, double lambda, far_tensor **out) {
    return guarded([&] { emit(out, far::scale(real_of(a), lambda)); });
}

far_status far_tensor_read(const char *path, far_tensor **out) {
    return guarded([&] {
        require(path, "path");
        require(out, "output");
        *out = new far_tensor{far::read_ftf(path)};
    });
}

far_status far_tensor_write(const far_tensor *t, const char *path) {
    return guarded([&] {
        require(t, "tensor");
        require(path, "path");
        std::visit([&](const auto &x) { far::write_ftf(x, path); }, t->value);
    });
}

far_status far_write_pgm(const far_tensor *t, size_t channel, size_t frame, const char *path) {
    return guarded([&] {
        require(path, "path");
        const far::RTensor &x = real_of(t);
        if (x.rank() == 3)
            far::write_mask_pgm(far::DynamicMask(x), channel, path);
        else
            far::write_frame_pgm(x, channel, frame, path);
    });
}

far_status far_fft1d(const double *in, size_t n, far_direction dir, double *out) {
    return guarded([&] {
        require(in, "input");
        require(out, "output");
        std::vector<far::Complex> x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = {in[2 * i], in[2 * i + 1]};
        const auto y = far::fft1d(x, dir == FAR_INVERSE ? far::Direction::Inverse : far::Direction::Forward);
        for (std::size_t i = 0; i < n; ++i) {
            out[2 * i] = y[i].real();
            out[2 * i + 1] = y[i].imag();
        }
    });
}

far_status far_fft_time_axis(const far_tensor *f, far_tensor **out) {
    return guarded([&] { emit(out, far::fft_time_axis(real_of(f))); });
}

far_status far_fft2_spacetime(const far_tensor *f, far_tensor **out) {
    return guarded([&] { emit(out, far::fft2_spacetime(real_of(f))); });
}

far_status far_ifft2_spacetime(const far_tensor *spectrum, far_tensor **out) {
    return guarded([&] { emit(out, far::ifft2_spacetime(complex_of(spectrum))); });
}

far_status far_fo_weights(size_t tlen, far_weight_variant variant, double *out) {
    return guarded([&] {
        require(out, "output");
        const auto w = far::fo::frequency_weights(
            tlen, variant == FAR_WEIGHTS_LITERAL ? far::fo::WeightVariant::Literal : far::fo::WeightVariant::Quadratic);
        std::copy(w.begin(), w.end(), out);
    });
}

far_status far_fo_mask(const far_tensor *f, const far_fo_config *cfg, far_tensor **out) {
    return guarded([&] { emit(out, far::fo::compute_mask(real_of(f), fo_mode(cfg)).values()); });
}

far_status far_fo_disentangle(const far_tensor *f, const far_fo_config *cfg, far_tensor **out) {
    return guarded([&] { emit(out, far::fo::disentangle(real_of(f), fo_mode(cfg), fo_apply(cfg))); });
}

far_status far_fa_forward(const far_tensor *f, const far_fa_config *cfg, far_tensor **out) {
    return guarded([&] {
        require(cfg, "fa config");
        const far::fa::FaConfig c{cfg->lambda,
                                  cfg->combine == FAR_COMBINE_ADDITIVE ? far::fa::Combine::Additive
                                                                       : far::fa::Combine::Product};
        emit(out, far::fa::fourier_attention(real_of(f), c));
    });
}

far_status far_sa_dense(const far_tensor *f, uint64_t weight_seed, far_tensor **out) {
    return guarded([&] {
        const far::RTensor &x = real_of(f);
        emit(out, far::fa::self_attention_dense(x, far::fa::AttnWeights::random(x.shape4().c, weight_seed)));
    });
}

far_status far_stem_forward(const far_tensor *clip, const size_t *widths, uint64_t seed, far_tensor **out) {
    return guarded([&] {
        require(widths, "widths");
        far::StemConfig cfg;
        cfg.widths.assign(widths, widths + 3);
        cfg.seed = seed;
        emit(out, far::stem_forward(real_of(clip), cfg));
    });
}

far_status far_sample_plan(size_t total, size_t want, uint64_t seed, size_t *indices, far_sample_info *info) {
    return guarded([&] {
        require(indices, "indices");
        const far::SamplePlan plan = far::plan_samples(total, want, seed);
        std::copy(plan.indices.begin(), plan.indices.end(), indices);
        if (info)
            *info = {plan.step, plan.offset, plan.cycled ? 1 : 0};
    });
}

far_status far_gather_frames(const far_tensor *x, const size_t *indices, size_t count, far_tensor **out) {
    return guarded([&] {
        require(indices, "indices");
        const far::RTensor &src = real_of(x);
        far::SamplePlan plan;
        plan.total = src.shape4().t;
        plan.want = count;
        plan.indices.assign(indices, indices + count);
        for (std::size_t i : plan.indices)
            if (i >= plan.total)
                throw far::ArgumentError("frame index " + std::to_string(i) + " out of range");
        emit(out, far::gather_frames(src, plan));
    });
}

namespace {

far_scene *make_scene(far::synth::SceneSpec spec) {
    auto *s = new far_scene;
    try {
        s->scene = far::synth::generate(spec);
        s->text = far::synth::format_scene(spec);
        s->spec = std::move(spec);
    } catch (...) {
        delete s;
        throw;
    }
    return s;
}

} // namespace

far_status far_scene_load(const char *path, far_scene **out) {
    return guarded([&] {
        require(path, "path");
        require(out, "output");
        *out = make_scene(far::synth::load_scene(path));
    });
}

far_status far_scene_standard(uint64_t seed, double noise_sigma, far_scene **out) {
    return guarded([&] {
        require(out, "output");
        *out = make_scene(far::synth::standard_scene(seed, noise_sigma));
    });
}

void far_scene_free(far_scene *scene) { delete scene; }

const char *far_scene_text(const far_scene *scene) { return scene->text.c_str(); }

far_status far_scene_features(const far_scene *scene, far_tensor **out) {
    return guarded([&] {
        require(scene, "scene");
        emit(out, scene->scene.features);
    });
}

far_status far_scene_select_frames(far_scene *scene, const size_t *indices, size_t count) {
    return guarded([&] {
        require(scene, "scene");
        require(indices, "indices");
        scene->scene.labels = scene->scene.labels.select_frames(std::vector<std::size_t>(indices, indices + count));
    });
}

far_status far_scene_region_means(const far_scene *scene, const far_tensor *x, double means[4], size_t counts[4]) {
    return guarded([&] {
        require(scene, "scene");
        require(means, "means");
        require(counts, "counts");
        const far::RTensor &t = real_of(x);
        const auto &labels = scene->scene.labels;
        const auto m = far::synth::region_mean_amplitudes(t, labels);
        for (std::size_t k = 0; k < 4; ++k) {
            counts[k] = 0;
            means[k] = 0.0;
        }
        for (std::size_t tt = 0; tt < labels.frames(); ++tt)
            for (std::size_t h = 0; h < labels.rows(); ++h)
                for (std::size_t w = 0; w < labels.cols(); ++w)
                    counts[static_cast<std::size_t>(labels.at(tt, h, w))] += t.extent(0);
        for (const auto &[kind, mean] : m)
            means[static_cast<std::size_t>(kind)] = mean;
    });
}

far_status far_flops(far_op op, const size_t dims[4], far_report **out) {
    return guarded([&] {
        require(out, "output");
        const far::Shape4 s = shape_of(dims);
        far::FlopReport r;
        switch (op) {
        case FAR_OP_FA:
            r = far::fa::fa_flops(s);
            break;
        case FAR_OP_SA:
            r = far::fa::sa_flops(s);
            break;
        case FAR_OP_FO:
            r = far::fo::fo_flops(s);
            break;
        case FAR_OP_FAR:
            r = far::bench::far_overhead_estimate(s);
            break;
        default:
            throw far::ArgumentError("unknown operator");
        }
        std::ostringstream os;
        far::write_flops_csv(os, r);
        *out = new far_report{os.str(), {}, r.total(), {}};
    });
}

far_status far_bench_sweep(far_op op, const size_t *sizes, size_t count, size_t channels, size_t reps,
                           far_report **out) {
    return guarded([&] {
        require(sizes, "sizes");
        require(out, "output");
        far::bench::BenchOp bop;
        switch (op) {
        case FAR_OP_FA:
            bop = far::bench::BenchOp::FourierAttention;
            break;
        case FAR_OP_SA:
            bop = far::bench::BenchOp::SelfAttention;
            break;
        case FAR_OP_FO:
            bop = far::bench::BenchOp::FourierDisentangle;
            break;
        default:
            throw far::ArgumentError("benchmarks support fa, sa and fo");
        }
        const auto result =
            far::bench::complexity_sweep(bop, std::vector<std::size_t>(sizes, sizes + count), channels, reps);
        auto report = std::make_unique<far_report>();
        std::ostringstream os;
        for (const auto &row : result.timings) {
            far::bench::write_timing_csv(os, row);
            report->rows.emplace_back(row.shape.t * row.shape.plane(), row.median_seconds);
        }
        std::ostringstream fl;
        for (const auto &f : result.flops) {
            far::write_flops_csv(fl, f);
            report->total += f.total();
        }
        report->csv = os.str();
        report->flops_csv = fl.str();
        *out = report.release();
    });
}

void far_report_free(far_report *r) { delete r; }

const char *far_report_csv(const far_report *r) { return r->csv.c_str(); }

const char *far_report_flops_csv(const far_report *r) { return r->flops_csv.c_str(); }

const char *far_flops_csv_header(void) { return "operator,shape,term,flops\n"; }

const char *far_timing_csv_header(void) { return "operator,shape,tokens,reps,inner_calls,median_seconds,threads\n"; }

double far_report_total(const far_report *r) { return r->total; }

size_t far_report_rows(const far_report *r) { return r->rows.size(); }

far_status far_report_row(const far_report *r, size_t i, size_t *tokens, double *median_seconds) {
    return guarded([&] {
        require(r, "report");
        if (i >= r->rows.size())
            throw far::ArgumentError("report row out of range");
        if (tokens)
            *tokens = r->rows[i].first;
        if (median_seconds)
            *median_seconds = r->rows[i].second;
    });
}

far_status far_loglog_slope(const double *x, const double *y, size_t n, double *slope) {
    return guarded([&] {
        require(x, "x");
        require(y, "y");
        require(slope, "slope");
        *slope = far::bench::loglog_slope(std::vector<double>(x, x + n), std::vector<double>(y, y + n));
    });
}

far_status far_check_run(const char *suite, far_fault fault, far_report **out, size_t *failed) {
    return guarded([&] {
        require(suite, "suite");
        require(out, "output");
        far::checks::CheckOptions opt;
        opt.fault = fault == FAR_FAULT_INVERSE_NORMALIZATION ? far::checks::Fault::InverseNormalization
                                                             : far::checks::Fault::None;
        const auto results = far::checks::run_suite(suite, opt);
        std::ostringstream os;
        far::checks::print_table(os, results);
        std::size_t bad = 0;
        for (const auto &r : results)
            bad += r.ok ? 0 : 1;
        if (failed)
            *failed = bad;
        *out = new far_report{os.str(), {}, static_cast<double>(bad), {}};
    });
}

far_status far_fd_check(far_probe probe, const size_t dims[4], uint64_t seed, double eps, double *max_rel_err) {
    return guarded([&] {
        require(max_rel_err, "output");
        far::grad::ProbeOp op;
        switch (probe) {
        case FAR_PROBE_DISENTANGLE_L2:
            op = far::grad::ProbeOp::DisentangleL2;
            break;
        case FAR_PROBE_FOURIER_ATTENTION:
            op = far::grad::ProbeOp::FourierAttention;
            break;
        case FAR_PROBE_FOURIER_ATTENTION_ADDITIVE:
            op = far::grad::ProbeOp::FourierAttentionAdditive;
            break;
        case FAR_PROBE_FFT_LINEAR:
            op = far::grad::ProbeOp::FftLinear;
            break;
        default:
            throw far::ArgumentError("unknown probe");
        }
        *max_rel_err = far::grad::fd_check(op, shape_of(dims), seed, eps).max_rel_err;
    });
}

} // extern "C"
