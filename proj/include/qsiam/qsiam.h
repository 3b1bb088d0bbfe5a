/*
 * qsiam: quantized Siamese tracker with an analytical accelerator model.
 *
 * Plain C interface over the C++ core. Every entry point returns a status
 * code (QSIAM_OK == 0 on success); qsiam_last_error() describes the most
 * recent failure on the calling thread. Objects returned through out-pointers
 * are owned by the caller and released with the matching *_free function.
 */
#ifndef QSIAM_H
#define QSIAM_H

#include <stddef.h>
#include <stdint.h>

#ifndef QSIAM_API
#if defined(QSIAM_BUILD_SHARED) && defined(_WIN32)
#define QSIAM_API __declspec(dllexport)
#elif defined(QSIAM_BUILD_SHARED)
#define QSIAM_API __attribute__((visibility("default")))
#else
#define QSIAM_API
#endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum qsiam_status {
  QSIAM_OK = 0,
  QSIAM_ERR_ARGUMENT = 1,    /* bad parameter value or null pointer */
  QSIAM_ERR_SHAPE = 2,       /* tensor dimension mismatch */
  QSIAM_ERR_UNSUPPORTED = 3, /* layer shape outside the supported set */
  QSIAM_ERR_FOLDING = 4,     /* PE/SIMD does not divide the layer */
  QSIAM_ERR_CONTAINER = 5,   /* malformed weight container */
  QSIAM_ERR_INGEST = 6,      /* unreadable frame, sequence, or table */
  QSIAM_ERR_FIT = 7,         /* degenerate calibration fit */
  QSIAM_ERR_IO = 8,          /* filesystem failure */
  QSIAM_ERR_INTERNAL = 9
};

/* Layer count of the fixed feature extractor. */
#define QSIAM_LAYER_COUNT 6

QSIAM_API const char* qsiam_version(void);
QSIAM_API const char* qsiam_status_name(int status);

/* Message for the last failing call on this thread; empty if none. */
QSIAM_API const char* qsiam_last_error(void);

/* Weight element count of the feature extractor. */
QSIAM_API uint64_t qsiam_param_count(void);

/* ---------------------------------------------------------------- weights */

typedef struct qsiam_weights qsiam_weights;

QSIAM_API int qsiam_weights_generate(uint64_t seed, qsiam_weights** out);
QSIAM_API int qsiam_weights_load(const char* path, qsiam_weights** out);
QSIAM_API int qsiam_weights_save(const qsiam_weights* weights, const char* path);
QSIAM_API void qsiam_weights_free(qsiam_weights* weights);

/* ---------------------------------------------------------------- tracking */

/* Top-left corner convention, matching ground truth and results files. */
typedef struct qsiam_bbox {
  double x, y, w, h;
} qsiam_bbox;

/* Borrowed planar CHW pixel buffer, values 0..255, channels 1 or 3. */
typedef struct qsiam_image {
  int32_t channels, height, width;
  const float* data;
} qsiam_image;

typedef struct qsiam_tracker_config {
  int32_t num_scales;       /* scale pyramid size, canonical 1 or 3 */
  double scale_step;        /* geometric step between pyramid levels */
  double scale_penalty;     /* response penalty per level away from center */
  double scale_damping;     /* box size update damping in [0,1] */
  double window_influence;  /* cosine window blend weight in [0,1] */
  double context;           /* context padding around the target box */
  int32_t upsample;         /* response upsampling factor */
  int32_t exemplar_size;    /* exemplar crop side in pixels */
  int32_t roi_size;         /* search crop side in pixels */
  int32_t stub_features;    /* nonzero: block-average features, no weights */
} qsiam_tracker_config;

QSIAM_API void qsiam_tracker_config_init(qsiam_tracker_config* cfg);

typedef struct qsiam_tracker qsiam_tracker;

/* `weights` may be NULL only when cfg->stub_features is set. */
QSIAM_API int qsiam_tracker_create(const qsiam_weights* weights,
                                   const qsiam_tracker_config* cfg,
                                   qsiam_tracker** out);
QSIAM_API int qsiam_tracker_init(qsiam_tracker* tracker, const qsiam_image* frame,
                                 qsiam_bbox box);

typedef struct qsiam_stage_times {
  double crop_resize;
  double input_transfer;
  double network;
  double output_transfer;
  double cross_correlation;
  double upsampling;
  double locate;
  double total; /* sum of the seven stages */
} qsiam_stage_times;

/* Tracks one frame. `out_times` is optional. */
QSIAM_API int qsiam_tracker_update(qsiam_tracker* tracker, const qsiam_image* frame,
                                   qsiam_bbox* out_box, qsiam_stage_times* out_times);
QSIAM_API void qsiam_tracker_free(qsiam_tracker* tracker);

/* ------------------------------------------------------- stage accounting */

QSIAM_API const char* qsiam_stage_name(int32_t index);  /* 0..6 */
QSIAM_API const char* qsiam_group_name(int32_t index);  /* 0..2 */

typedef struct qsiam_timing_report {
  int64_t frames;
  double stage_mean[7];
  double stage_sum;       /* sum of stage means */
  double total_mean;      /* measured loop time per frame */
  double overhead;        /* total_mean - stage_sum */
  double fps;             /* 1 / total_mean */
  double group_seconds[3];
  double group_pct[3];    /* share of total_mean, percent */
} qsiam_timing_report;

/* stage_seconds: frames x 7 row-major, totals: one per frame. */
QSIAM_API int qsiam_timing_aggregate(const double* stage_seconds, const double* totals,
                                     int64_t frames, qsiam_timing_report* out);

/* --------------------------------------------------------- sequence runs */

/*
 * Tracks a sequence directory (numbered .ppm/.pgm frames + groundtruth.txt),
 * seeding from the first ground truth box. `out_boxes` receives one box per
 * frame (free with qsiam_boxes_free). `out_frame_times` receives one entry per
 * tracked frame, i.e. frame count minus one, with `total` holding the measured
 * loop time (free with qsiam_stage_times_free). `out_report` is the aggregate
 * (zeroed when the sequence has a single frame). All outputs are optional.
 */
QSIAM_API int qsiam_track_sequence(const qsiam_weights* weights,
                                   const qsiam_tracker_config* cfg,
                                   const char* sequence_dir, qsiam_bbox** out_boxes,
                                   int64_t* out_count,
                                   qsiam_stage_times** out_frame_times,
                                   int64_t* out_frame_count,
                                   qsiam_timing_report* out_report);
QSIAM_API void qsiam_boxes_free(qsiam_bbox* boxes);
QSIAM_API void qsiam_stage_times_free(qsiam_stage_times* times);

/* Fixed-format results file, one "x,y,w,h" line per box. */
QSIAM_API int qsiam_write_results(const char* path, const qsiam_bbox* boxes,
                                  int64_t count);

/* Draws result (and ground truth) outlines onto copies of the frames. */
QSIAM_API int qsiam_annotate_sequence(const char* sequence_dir,
                                      const char* results_path, const char* out_dir);

/* ------------------------------------------------------------- benchmark */

typedef struct qsiam_benchmark qsiam_benchmark;

/*
 * One-pass evaluation over every sequence under dataset_dir. When
 * echo_groundtruth is nonzero the ground truth boxes are replayed instead of
 * running the tracker (accuracy oracle); weights may then be NULL.
 */
QSIAM_API int qsiam_benchmark_run(const qsiam_weights* weights,
                                  const qsiam_tracker_config* cfg,
                                  const char* dataset_dir, int echo_groundtruth,
                                  qsiam_benchmark** out);
QSIAM_API int64_t qsiam_benchmark_sequences(const qsiam_benchmark* bench);
/* `out_name` stays valid while the benchmark object lives. */
QSIAM_API int qsiam_benchmark_sequence(const qsiam_benchmark* bench, int64_t index,
                                       const char** out_name, int64_t* out_frames,
                                       double* out_ao);
QSIAM_API double qsiam_benchmark_mao(const qsiam_benchmark* bench);
QSIAM_API double qsiam_benchmark_fps(const qsiam_benchmark* bench);
QSIAM_API void qsiam_benchmark_free(qsiam_benchmark* bench);

/* ------------------------------------------------------ performance model */

typedef struct qsiam_perf_estimate {
  int64_t layer_cycles[QSIAM_LAYER_COUNT];
  int64_t latency_cycles;    /* sum over layers */
  int64_t bottleneck_cycles; /* slowest layer */
  int32_t bottleneck_layer;
  double latency_fps;        /* clock / latency_cycles */
  double throughput_fps;     /* clock / bottleneck_cycles */
  int64_t resource_units;    /* sum of ceil(pe*simd*weight_bits/8) */
} qsiam_perf_estimate;

/* pe/simd: QSIAM_LAYER_COUNT entries each. */
QSIAM_API int qsiam_perf_estimate_run(const int32_t* pe, const int32_t* simd,
                                      int32_t layers, double clock_hz,
                                      qsiam_perf_estimate* out);

/* Reference folding configurations V1..V6. */
QSIAM_API int32_t qsiam_preset_count(void);
QSIAM_API int qsiam_preset(int32_t index, const char** out_name, int32_t* out_pe,
                           int32_t* out_simd);

/* ------------------------------------------------------------ calibration */

typedef struct qsiam_calibration qsiam_calibration;

QSIAM_API int qsiam_calibration_builtin(qsiam_calibration** out);
QSIAM_API int qsiam_calibration_load(const char* path, qsiam_calibration** out);
QSIAM_API int64_t qsiam_calibration_size(const qsiam_calibration* table);
QSIAM_API int qsiam_calibration_row(const qsiam_calibration* table, int64_t index,
                                    const char** out_name, double* out_fps,
                                    double* out_lut_pct, double* out_ff_pct,
                                    double* out_bram_pct, double* out_lutram_pct,
                                    double* out_watts);
QSIAM_API void qsiam_calibration_free(qsiam_calibration* table);

/* Least-squares affine power model: watts = base + per_unit * units. */
QSIAM_API int qsiam_fit_energy(const int64_t* units, const double* watts,
                               int32_t count, double* out_base_watts,
                               double* out_watts_per_unit);

/* ---------------------------------------------------- design space search */

typedef struct qsiam_front qsiam_front;

/* Pareto front of (latency cycles, resource units) within the unit budget. */
QSIAM_API int qsiam_explore(int64_t unit_budget, const int32_t* pe_candidates,
                            int32_t pe_count, const int32_t* simd_candidates,
                            int32_t simd_count, double clock_hz, qsiam_front** out);
QSIAM_API int64_t qsiam_front_size(const qsiam_front* front);
/* out_pe/out_simd: QSIAM_LAYER_COUNT entries; any output may be NULL. */
QSIAM_API int qsiam_front_point(const qsiam_front* front, int64_t index,
                                int32_t* out_pe, int32_t* out_simd,
                                qsiam_perf_estimate* out_est);
QSIAM_API void qsiam_front_free(qsiam_front* front);

#ifdef __cplusplus
}
#endif

#endif /* QSIAM_H */
