/* C interface to the far library: Fourier object disentanglement and
 * Fourier space-time attention over (c, t, h, w) feature tensors.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a far_status; on
 * failure far_last_error() describes the problem (per calling thread) and
 * no output handle is written. */
#ifndef FAR_FAR_H
#define FAR_FAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FAR_BUILDING_LIBRARY)
#define FAR_API __declspec(dllexport)
#else
#define FAR_API __declspec(dllimport)
#endif
#else
#define FAR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum far_status {
    FAR_OK = 0,
    FAR_ERR_ARGUMENT = 1,
    FAR_ERR_SHAPE = 2,
    FAR_ERR_FORMAT = 3,
    FAR_ERR_IO = 4,
    FAR_ERR_RESOURCE = 5,
    FAR_ERR_UNSUPPORTED = 6,
    FAR_ERR_INTERNAL = 7
} far_status;

typedef struct far_tensor far_tensor;
typedef struct far_scene far_scene;
typedef struct far_report far_report;

typedef enum far_dtype { FAR_REAL64 = 0, FAR_COMPLEX128 = 1 } far_dtype;
typedef enum far_direction { FAR_FORWARD = 0, FAR_INVERSE = 1 } far_direction;

typedef enum far_weight_variant { FAR_WEIGHTS_QUADRATIC = 0, FAR_WEIGHTS_LITERAL = 1 } far_weight_variant;
typedef enum far_norm { FAR_NORM_L2 = 0, FAR_NORM_L1 = 1 } far_norm;
typedef enum far_application { FAR_APPLY_STRICT = 0, FAR_APPLY_RESIDUAL = 1 } far_application;
typedef enum far_combine { FAR_COMBINE_PRODUCT = 0, FAR_COMBINE_ADDITIVE = 1 } far_combine;

typedef enum far_region_kind {
    FAR_DYNAMIC_SALIENT = 0,
    FAR_STATIC_SALIENT = 1,
    FAR_DYNAMIC_NONSALIENT = 2,
    FAR_STATIC_NONSALIENT = 3
} far_region_kind;

typedef struct far_fo_config {
    far_weight_variant variant;
    far_norm norm;
    far_application application;
    double beta;
} far_fo_config;

typedef struct far_fa_config {
    double lambda;
    far_combine combine;
} far_fa_config;

/* Defaults: quadratic weights, L2, strict application, beta 1. */
FAR_API far_fo_config far_fo_config_default(void);
/* Defaults: lambda 0.01, product fusion. */
FAR_API far_fa_config far_fa_config_default(void);

FAR_API const char *far_version(void);
FAR_API const char *far_last_error(void);
FAR_API const char *far_status_name(far_status status);

FAR_API void far_set_threads(size_t n);
FAR_API size_t far_get_threads(void);

/* ---- tensors ---------------------------------------------------------- */

FAR_API far_status far_tensor_zeros(const size_t *dims, size_t rank, far_tensor **out);
FAR_API far_status far_tensor_constant(const size_t *dims, size_t rank, double value, far_tensor **out);
FAR_API far_status far_tensor_uniform(const size_t *dims, size_t rank, double lo, double hi, uint64_t seed,
                                      far_tensor **out);
/* Copies `data`: numel doubles (real) or 2 * numel interleaved re, im (complex). */
FAR_API far_status far_tensor_from_data(far_dtype dtype, const size_t *dims, size_t rank, const double *data,
                                        far_tensor **out);
FAR_API void far_tensor_free(far_tensor *t);

FAR_API far_dtype far_tensor_dtype(const far_tensor *t);
FAR_API size_t far_tensor_rank(const far_tensor *t);
/* Writes rank() extents. */
FAR_API void far_tensor_dims(const far_tensor *t, size_t *dims);
FAR_API size_t far_tensor_numel(const far_tensor *t);
/* Pointer to numel (real) or 2 * numel (complex) doubles; valid until free. */
FAR_API const double *far_tensor_data(const far_tensor *t);

FAR_API far_status far_tensor_add(const far_tensor *a, const far_tensor *b, far_tensor **out);
/* b may be a (c, h, w) map broadcast over the frames of a (c, t, h, w) a. */
FAR_API far_status far_tensor_mul(const far_tensor *a, const far_tensor *b, far_tensor **out);
FAR_API far_status far_tensor_scale(const far_tensor *a, double lambda, far_tensor **out);

FAR_API far_status far_tensor_read(const char *path, far_tensor **out);
FAR_API far_status far_tensor_write(const far_tensor *t, const char *path);

/* Frame `frame` of channel `channel` of a (c, t, h, w) tensor, or channel
 * `channel` of a (c, h, w) map, as a max-normalized binary PGM. */
FAR_API far_status far_write_pgm(const far_tensor *t, size_t channel, size_t frame, const char *path);

/* ---- transforms ------------------------------------------------------- */

/* `in` and `out` hold n interleaved complex values; they may alias. */
FAR_API far_status far_fft1d(const double *in, size_t n, far_direction dir, double *out);
FAR_API far_status far_fft_time_axis(const far_tensor *f, far_tensor **out);
FAR_API far_status far_fft2_spacetime(const far_tensor *f, far_tensor **out);
FAR_API far_status far_ifft2_spacetime(const far_tensor *spectrum, far_tensor **out);

/* ---- operators -------------------------------------------------------- */

FAR_API far_status far_fo_weights(size_t tlen, far_weight_variant variant, double *out);
/* (c, h, w) mask of a (c, t, h, w) tensor. */
FAR_API far_status far_fo_mask(const far_tensor *f, const far_fo_config *cfg, far_tensor **out);
FAR_API far_status far_fo_disentangle(const far_tensor *f, const far_fo_config *cfg, far_tensor **out);

FAR_API far_status far_fa_forward(const far_tensor *f, const far_fa_config *cfg, far_tensor **out);
/* Dense reference attention with seeded channel maps; at most 4096 tokens. */
FAR_API far_status far_sa_dense(const far_tensor *f, uint64_t weight_seed, far_tensor **out);

/* widths: input, hidden, output channels (3 values). */
FAR_API far_status far_stem_forward(const far_tensor *clip, const size_t *widths, uint64_t seed, far_tensor **out);

/* ---- frame sampling --------------------------------------------------- */

typedef struct far_sample_info {
    size_t step;
    size_t offset;
    int cycled;
} far_sample_info;

/* Writes `want` indices. */
FAR_API far_status far_sample_plan(size_t total, size_t want, uint64_t seed, size_t *indices, far_sample_info *info);
FAR_API far_status far_gather_frames(const far_tensor *x, const size_t *indices, size_t count, far_tensor **out);

/* ---- synthetic scenes ------------------------------------------------- */

FAR_API far_status far_scene_load(const char *path, far_scene **out);
FAR_API far_status far_scene_standard(uint64_t seed, double noise_sigma, far_scene **out);
FAR_API void far_scene_free(far_scene *scene);
/* Canonical key = value text of the scene spec; valid until free. */
FAR_API const char *far_scene_text(const far_scene *scene);
/* Generated (c, t, h, w) features; the handle keeps the labels internally. */
FAR_API far_status far_scene_features(const far_scene *scene, far_tensor **out);
/* Restricts the stored labels to the given frames (after sampling). */
FAR_API far_status far_scene_select_frames(far_scene *scene, const size_t *indices, size_t count);
/* Mean |x| per region kind over the scene's labels; counts[k] = 0 marks a
 * kind with no pixels (its mean is written as 0). */
FAR_API far_status far_scene_region_means(const far_scene *scene, const far_tensor *x, double means[4],
                                          size_t counts[4]);

/* ---- FLOP model and benchmarks ---------------------------------------- */

typedef enum far_op { FAR_OP_FA = 0, FAR_OP_SA = 1, FAR_OP_FO = 2, FAR_OP_FAR = 3 } far_op;

/* FAR_OP_FAR gives the FO + FA overhead estimate. dims = c, t, h, w. */
FAR_API far_status far_flops(far_op op, const size_t dims[4], far_report **out);
/* Times op (FA, SA or FO) at each token count; reps >= 5. */
FAR_API far_status far_bench_sweep(far_op op, const size_t *sizes, size_t count, size_t channels, size_t reps,
                                   far_report **out);
FAR_API void far_report_free(far_report *r);
/* CSV rows without header; valid until free. far_flops and far_check_run
 * fill only the primary text. A sweep puts timing rows in the primary text
 * and FLOP rows in the secondary text. */
FAR_API const char *far_report_csv(const far_report *r);
FAR_API const char *far_report_flops_csv(const far_report *r);
FAR_API const char *far_flops_csv_header(void);
FAR_API const char *far_timing_csv_header(void);
FAR_API double far_report_total(const far_report *r);
/* Benchmark reports: number of rows and per-row token count / median seconds. */
FAR_API size_t far_report_rows(const far_report *r);
FAR_API far_status far_report_row(const far_report *r, size_t i, size_t *tokens, double *median_seconds);
FAR_API far_status far_loglog_slope(const double *x, const double *y, size_t n, double *slope);

/* ---- self checks ------------------------------------------------------ */

typedef enum far_fault { FAR_FAULT_NONE = 0, FAR_FAULT_INVERSE_NORMALIZATION = 1 } far_fault;

/* Runs a check suite ("fft", "fo", "fa", "grad", "all"). The summary table
 * is returned through a report (far_report_csv gives the text); `failed`
 * receives the number of failing checks. */
FAR_API far_status far_check_run(const char *suite, far_fault fault, far_report **out, size_t *failed);

typedef enum far_probe {
    FAR_PROBE_DISENTANGLE_L2 = 0,
    FAR_PROBE_FOURIER_ATTENTION = 1,
    FAR_PROBE_FOURIER_ATTENTION_ADDITIVE = 2,
    FAR_PROBE_FFT_LINEAR = 3
} far_probe;

/* Finite-difference check of a vector-Jacobian product along 16 random
 * directions. */
FAR_API far_status far_fd_check(far_probe probe, const size_t dims[4], uint64_t seed, double eps,
                                double *max_rel_err);

#ifdef __cplusplus
}
#endif

#endif /* FAR_FAR_H */
