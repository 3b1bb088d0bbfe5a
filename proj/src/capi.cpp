#include "qsiam/qsiam.h"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/image.hpp"
#include "core/metrics.hpp"
#include "core/netspec.hpp"
#include "core/network.hpp"
#include "core/perfmodel.hpp"
#include "core/sequence.hpp"
#include "core/timing.hpp"
#include "core/tracker.hpp"
#include "core/weights.hpp"

using namespace qsiam;

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

// Runs `fn`, mapping exceptions onto status codes.
template <typename Fn>
int guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return QSIAM_OK;
  } catch (const ShapeError& e) {
    return fail(QSIAM_ERR_SHAPE, e.what());
  } catch (const UnsupportedError& e) {
    return fail(QSIAM_ERR_UNSUPPORTED, e.what());
  } catch (const FoldingError& e) {
    return fail(QSIAM_ERR_FOLDING, e.what());
  } catch (const ContainerError& e) {
    return fail(QSIAM_ERR_CONTAINER, e.what());
  } catch (const IngestError& e) {
    return fail(QSIAM_ERR_INGEST, e.what());
  } catch (const FitError& e) {
    return fail(QSIAM_ERR_FIT, e.what());
  } catch (const IoError& e) {
    return fail(QSIAM_ERR_IO, e.what());
  } catch (const ParamError& e) {
    return fail(QSIAM_ERR_ARGUMENT, e.what());
  } catch (const Error& e) {
    return fail(QSIAM_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QSIAM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QSIAM_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ParamError(what);
}

BBox to_core(qsiam_bbox b) { return BBox::from_topleft(b.x, b.y, b.w, b.h); }

qsiam_bbox from_core(const BBox& b) { return {b.left(), b.top(), b.w, b.h}; }

Image to_image(const qsiam_image* img) {
  require(img != nullptr, "image pointer is null");
  require(img->data != nullptr, "image data pointer is null");
  require(img->channels == 1 || img->channels == 3, "image must have 1 or 3 channels");
  require(img->height > 0 && img->width > 0, "image must be non-empty");
  Image out(img->channels, img->height, img->width);
  std::memcpy(out.data.data(), img->data, out.data.size() * sizeof(float));
  return out;
}

TrackerConfig to_config(const qsiam_tracker_config* cfg) {
  TrackerConfig out;  // defaults
  if (!cfg) return out;
  out.num_scales = cfg->num_scales;
  out.scale_step = cfg->scale_step;
  out.scale_penalty = cfg->scale_penalty;
  out.scale_damping = cfg->scale_damping;
  out.window_influence = cfg->window_influence;
  out.context = cfg->context;
  out.upsample = cfg->upsample;
  out.exemplar_size = cfg->exemplar_size;
  out.roi_size = cfg->roi_size;
  out.stub_features = cfg->stub_features != 0;
  return out;
}

void fill_report(qsiam_timing_report* out, const TimingReport& r) {
  out->frames = static_cast<int64_t>(r.frames);
  for (int i = 0; i < kStageCount; ++i) out->stage_mean[i] = r.stage_mean[i];
  out->stage_sum = r.stage_sum;
  out->total_mean = r.total_mean;
  out->overhead = r.overhead;
  out->fps = r.fps;
  for (int i = 0; i < 3; ++i) {
    out->group_seconds[i] = r.group_seconds[i];
    out->group_pct[i] = r.group_pct[i];
  }
}

void fill_estimate(qsiam_perf_estimate* out, const PerfEstimate& est) {
  require(est.cycles.size() == QSIAM_LAYER_COUNT, "estimate layer count mismatch");
  for (int i = 0; i < QSIAM_LAYER_COUNT; ++i) out->layer_cycles[i] = est.cycles[i];
  out->latency_cycles = est.latency_cycles;
  out->bottleneck_cycles = est.bottleneck_cycles;
  out->bottleneck_layer = est.bottleneck_layer;
  out->latency_fps = est.latency_fps;
  out->throughput_fps = est.throughput_fps;
  out->resource_units = est.resource_units;
}

}  // namespace

struct qsiam_weights {
  WeightContainer container;
};

struct qsiam_tracker {
  std::optional<Network> net;
  std::optional<Tracker> tracker;
};

struct qsiam_benchmark {
  BenchmarkReport report;
};

struct qsiam_calibration {
  std::vector<CalibrationRow> rows;
};

struct qsiam_front {
  std::vector<FrontPoint> points;
};

extern "C" {

const char* qsiam_version(void) { return "0.1.0"; }

const char* qsiam_status_name(int status) {
  switch (status) {
    case QSIAM_OK: return "ok";
    case QSIAM_ERR_ARGUMENT: return "argument";
    case QSIAM_ERR_SHAPE: return "shape";
    case QSIAM_ERR_UNSUPPORTED: return "unsupported";
    case QSIAM_ERR_FOLDING: return "folding";
    case QSIAM_ERR_CONTAINER: return "container";
    case QSIAM_ERR_INGEST: return "ingest";
    case QSIAM_ERR_FIT: return "fit";
    case QSIAM_ERR_IO: return "io";
    case QSIAM_ERR_INTERNAL: return "internal";
    default: return "unknown";
  }
}

const char* qsiam_last_error(void) { return g_last_error.c_str(); }

uint64_t qsiam_param_count(void) { return param_count(canonical_network()); }

int qsiam_weights_generate(uint64_t seed, qsiam_weights** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    auto* w = new qsiam_weights{gen_random_weights(canonical_network(), seed)};
    *out = w;
  });
}

int qsiam_weights_load(const char* path, qsiam_weights** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and output must be non-null");
    auto* w = new qsiam_weights{load_weights(path, canonical_network())};
    *out = w;
  });
}

int qsiam_weights_save(const qsiam_weights* weights, const char* path) {
  return guarded([&] {
    require(weights != nullptr && path != nullptr, "weights and path must be non-null");
    save_weights(weights->container, path);
  });
}

void qsiam_weights_free(qsiam_weights* weights) { delete weights; }

void qsiam_tracker_config_init(qsiam_tracker_config* cfg) {
  if (!cfg) return;
  const TrackerConfig d;
  cfg->num_scales = d.num_scales;
  cfg->scale_step = d.scale_step;
  cfg->scale_penalty = d.scale_penalty;
  cfg->scale_damping = d.scale_damping;
  cfg->window_influence = d.window_influence;
  cfg->context = d.context;
  cfg->upsample = d.upsample;
  cfg->exemplar_size = d.exemplar_size;
  cfg->roi_size = d.roi_size;
  cfg->stub_features = d.stub_features ? 1 : 0;
}

int qsiam_tracker_create(const qsiam_weights* weights, const qsiam_tracker_config* cfg,
                         qsiam_tracker** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    const TrackerConfig config = to_config(cfg);
    auto t = std::make_unique<qsiam_tracker>();
    if (!config.stub_features) {
      require(weights != nullptr, "weights are required unless stub features are enabled");
      t->net.emplace(canonical_network(), weights->container);
    }
    t->tracker.emplace(t->net ? &*t->net : nullptr, config);
    *out = t.release();
  });
}

int qsiam_tracker_init(qsiam_tracker* tracker, const qsiam_image* frame,
                       qsiam_bbox box) {
  return guarded([&] {
    require(tracker != nullptr, "tracker pointer is null");
    tracker->tracker->init(to_image(frame), to_core(box));
  });
}

int qsiam_tracker_update(qsiam_tracker* tracker, const qsiam_image* frame,
                         qsiam_bbox* out_box, qsiam_stage_times* out_times) {
  return guarded([&] {
    require(tracker != nullptr, "tracker pointer is null");
    StageTiming st;
    const BBox box = tracker->tracker->update(to_image(frame), &st);
    if (out_box) *out_box = from_core(box);
    if (out_times) {
      out_times->crop_resize = st.seconds[kStageCrop];
      out_times->input_transfer = st.seconds[kStageInputTransfer];
      out_times->network = st.seconds[kStageNetwork];
      out_times->output_transfer = st.seconds[kStageOutputTransfer];
      out_times->cross_correlation = st.seconds[kStageCorrelation];
      out_times->upsampling = st.seconds[kStageUpsample];
      out_times->locate = st.seconds[kStageLocate];
      out_times->total = st.sum();
    }
  });
}

void qsiam_tracker_free(qsiam_tracker* tracker) { delete tracker; }

const char* qsiam_stage_name(int32_t index) {
  if (index < 0 || index >= kStageCount) return nullptr;
  return kStageNames[index];
}

const char* qsiam_group_name(int32_t index) {
  if (index < 0 || index >= 3) return nullptr;
  return kGroupNames[index];
}

int qsiam_timing_aggregate(const double* stage_seconds, const double* totals,
                           int64_t frames, qsiam_timing_report* out) {
  return guarded([&] {
    require(stage_seconds != nullptr && totals != nullptr && out != nullptr,
            "stage, total, and output pointers must be non-null");
    require(frames > 0, "need at least one frame");
    std::vector<StageTiming> samples(static_cast<std::size_t>(frames));
    for (int64_t f = 0; f < frames; ++f)
      for (int i = 0; i < kStageCount; ++i)
        samples[f].seconds[i] = stage_seconds[f * kStageCount + i];
    const std::vector<double> tot(totals, totals + frames);
    fill_report(out, aggregate_timings(samples, tot));
  });
}

int qsiam_track_sequence(const qsiam_weights* weights, const qsiam_tracker_config* cfg,
                         const char* sequence_dir, qsiam_bbox** out_boxes,
                         int64_t* out_count, qsiam_stage_times** out_frame_times,
                         int64_t* out_frame_count, qsiam_timing_report* out_report) {
  return guarded([&] {
    require(sequence_dir != nullptr, "sequence directory is null");
    const TrackerConfig config = to_config(cfg);
    std::optional<Network> net;
    if (!config.stub_features) {
      require(weights != nullptr, "weights are required unless stub features are enabled");
      net.emplace(canonical_network(), weights->container);
    }
    const Sequence seq = load_sequence(sequence_dir);
    const TrackRun run =
        track_paths(net ? &*net : nullptr, config, seq.frames, seq.groundtruth[0]);

    if (out_boxes) {
      auto* boxes = new qsiam_bbox[run.boxes.size()];
      for (std::size_t i = 0; i < run.boxes.size(); ++i) boxes[i] = from_core(run.boxes[i]);
      *out_boxes = boxes;
    }
    if (out_count) *out_count = static_cast<int64_t>(run.boxes.size());
    if (out_frame_times) {
      auto* times = new qsiam_stage_times[run.stages.size()];
      for (std::size_t i = 0; i < run.stages.size(); ++i) {
        const StageTiming& st = run.stages[i];
        times[i].crop_resize = st.seconds[kStageCrop];
        times[i].input_transfer = st.seconds[kStageInputTransfer];
        times[i].network = st.seconds[kStageNetwork];
        times[i].output_transfer = st.seconds[kStageOutputTransfer];
        times[i].cross_correlation = st.seconds[kStageCorrelation];
        times[i].upsampling = st.seconds[kStageUpsample];
        times[i].locate = st.seconds[kStageLocate];
        times[i].total = run.frame_seconds[i];  // measured loop time
      }
      *out_frame_times = times;
    }
    if (out_frame_count) *out_frame_count = static_cast<int64_t>(run.stages.size());
    if (out_report) {
      if (run.stages.empty()) {
        *out_report = qsiam_timing_report{};
      } else {
        fill_report(out_report, aggregate_timings(run.stages, run.frame_seconds));
      }
    }
  });
}

void qsiam_boxes_free(qsiam_bbox* boxes) { delete[] boxes; }

void qsiam_stage_times_free(qsiam_stage_times* times) { delete[] times; }

int qsiam_write_results(const char* path, const qsiam_bbox* boxes, int64_t count) {
  return guarded([&] {
    require(path != nullptr && boxes != nullptr, "path and boxes must be non-null");
    require(count >= 0, "box count must be non-negative");
    std::vector<BBox> core;
    core.reserve(static_cast<std::size_t>(count));
    for (int64_t i = 0; i < count; ++i) core.push_back(to_core(boxes[i]));
    write_results(path, core);
  });
}

int qsiam_annotate_sequence(const char* sequence_dir, const char* results_path,
                            const char* out_dir) {
  return guarded([&] {
    require(sequence_dir != nullptr && results_path != nullptr && out_dir != nullptr,
            "sequence, results, and output paths must be non-null");
    const Sequence seq = load_sequence(sequence_dir);
    const std::vector<BBox> boxes = read_results(results_path);
    require(boxes.size() == seq.frames.size(),
            "results box count does not match the sequence");
    std::filesystem::create_directories(out_dir);
    char name[32];
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      Image frame = load_image(seq.frames[i]);
      draw_box(frame, seq.groundtruth[i], {0.f, 255.f, 0.f});
      draw_box(frame, boxes[i], {255.f, 0.f, 0.f});
      std::snprintf(name, sizeof(name), "%06zu.ppm", i);
      save_image(frame, (std::filesystem::path(out_dir) / name).string());
    }
  });
}

int qsiam_benchmark_run(const qsiam_weights* weights, const qsiam_tracker_config* cfg,
                        const char* dataset_dir, int echo_groundtruth,
                        qsiam_benchmark** out) {
  return guarded([&] {
    require(dataset_dir != nullptr && out != nullptr,
            "dataset path and output must be non-null");
    const TrackerConfig config = to_config(cfg);
    std::optional<Network> net;
    if (!echo_groundtruth && !config.stub_features) {
      require(weights != nullptr, "weights are required unless stub features are enabled");
      net.emplace(canonical_network(), weights->container);
    }

    TrackerFn fn;
    if (echo_groundtruth) {
      fn = [](const Sequence& seq, double* seconds) {
        const auto start = std::chrono::steady_clock::now();
        std::vector<BBox> boxes = seq.groundtruth;
        *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                       .count();
        return boxes;
      };
    } else {
      const Network* net_ptr = net ? &*net : nullptr;
      fn = [net_ptr, config](const Sequence& seq, double* seconds) {
        const TrackRun run = track_paths(net_ptr, config, seq.frames, seq.groundtruth[0]);
        *seconds = 0;
        for (double t : run.frame_seconds) *seconds += t;
        return run.boxes;
      };
    }
    auto* bench = new qsiam_benchmark{run_benchmark(list_dataset(dataset_dir), fn)};
    *out = bench;
  });
}

int64_t qsiam_benchmark_sequences(const qsiam_benchmark* bench) {
  return bench ? static_cast<int64_t>(bench->report.sequences.size()) : 0;
}

int qsiam_benchmark_sequence(const qsiam_benchmark* bench, int64_t index,
                             const char** out_name, int64_t* out_frames,
                             double* out_ao) {
  return guarded([&] {
    require(bench != nullptr, "benchmark pointer is null");
    require(index >= 0 && index < static_cast<int64_t>(bench->report.sequences.size()),
            "sequence index out of range");
    const SequenceResult& r = bench->report.sequences[static_cast<std::size_t>(index)];
    if (out_name) *out_name = r.name.c_str();
    if (out_frames) *out_frames = static_cast<int64_t>(r.frames);
    if (out_ao) *out_ao = r.ao;
  });
}

double qsiam_benchmark_mao(const qsiam_benchmark* bench) {
  return bench ? bench->report.mao : 0.0;
}

double qsiam_benchmark_fps(const qsiam_benchmark* bench) {
  return bench ? bench->report.fps : 0.0;
}

void qsiam_benchmark_free(qsiam_benchmark* bench) { delete bench; }

int qsiam_perf_estimate_run(const int32_t* pe, const int32_t* simd, int32_t layers,
                            double clock_hz, qsiam_perf_estimate* out) {
  return guarded([&] {
    require(pe != nullptr && simd != nullptr && out != nullptr,
            "fold arrays and output must be non-null");
    require(layers == QSIAM_LAYER_COUNT, "fold arrays must cover every layer");
    FoldingConfig cfg;
    cfg.clock_hz = clock_hz;
    for (int i = 0; i < layers; ++i) cfg.folds.push_back({pe[i], simd[i]});
    fill_estimate(out, estimate(canonical_network(), cfg));
  });
}

int32_t qsiam_preset_count(void) {
  return static_cast<int32_t>(preset_configs().size());
}

int qsiam_preset(int32_t index, const char** out_name, int32_t* out_pe,
                 int32_t* out_simd) {
  return guarded([&] {
    static const std::vector<NamedConfig> presets = preset_configs();
    require(index >= 0 && index < static_cast<int32_t>(presets.size()),
            "preset index out of range");
    const NamedConfig& p = presets[static_cast<std::size_t>(index)];
    if (out_name) *out_name = p.name.c_str();
    for (std::size_t i = 0; i < p.config.folds.size(); ++i) {
      if (out_pe) out_pe[i] = p.config.folds[i].pe;
      if (out_simd) out_simd[i] = p.config.folds[i].simd;
    }
  });
}

int qsiam_calibration_builtin(qsiam_calibration** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = new qsiam_calibration{builtin_calibration()};
  });
}

int qsiam_calibration_load(const char* path, qsiam_calibration** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and output must be non-null");
    *out = new qsiam_calibration{load_calibration_csv(path)};
  });
}

int64_t qsiam_calibration_size(const qsiam_calibration* table) {
  return table ? static_cast<int64_t>(table->rows.size()) : 0;
}

int qsiam_calibration_row(const qsiam_calibration* table, int64_t index,
                          const char** out_name, double* out_fps, double* out_lut_pct,
                          double* out_ff_pct, double* out_bram_pct,
                          double* out_lutram_pct, double* out_watts) {
  return guarded([&] {
    require(table != nullptr, "calibration pointer is null");
    require(index >= 0 && index < static_cast<int64_t>(table->rows.size()),
            "calibration index out of range");
    const CalibrationRow& r = table->rows[static_cast<std::size_t>(index)];
    if (out_name) *out_name = r.name.c_str();
    if (out_fps) *out_fps = r.fps;
    if (out_lut_pct) *out_lut_pct = r.lut_pct;
    if (out_ff_pct) *out_ff_pct = r.ff_pct;
    if (out_bram_pct) *out_bram_pct = r.bram_pct;
    if (out_lutram_pct) *out_lutram_pct = r.lutram_pct;
    if (out_watts) *out_watts = r.watts;
  });
}

void qsiam_calibration_free(qsiam_calibration* table) { delete table; }

int qsiam_fit_energy(const int64_t* units, const double* watts, int32_t count,
                     double* out_base_watts, double* out_watts_per_unit) {
  return guarded([&] {
    require(units != nullptr && watts != nullptr, "unit and watt arrays must be non-null");
    require(count >= 0, "count must be non-negative");
    const std::vector<std::int64_t> u(units, units + count);
    const std::vector<double> w(watts, watts + count);
    const EnergyFit fit = fit_energy(u, w);
    if (out_base_watts) *out_base_watts = fit.base_watts;
    if (out_watts_per_unit) *out_watts_per_unit = fit.watts_per_unit;
  });
}

int qsiam_explore(int64_t unit_budget, const int32_t* pe_candidates, int32_t pe_count,
                  const int32_t* simd_candidates, int32_t simd_count, double clock_hz,
                  qsiam_front** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    require(pe_candidates != nullptr && simd_candidates != nullptr,
            "candidate arrays must be non-null");
    require(pe_count > 0 && simd_count > 0, "candidate sets must be non-empty");
    const std::vector<int> pe(pe_candidates, pe_candidates + pe_count);
    const std::vector<int> simd(simd_candidates, simd_candidates + simd_count);
    *out = new qsiam_front{explore(canonical_network(), unit_budget, pe, simd, clock_hz)};
  });
}

int64_t qsiam_front_size(const qsiam_front* front) {
  return front ? static_cast<int64_t>(front->points.size()) : 0;
}

int qsiam_front_point(const qsiam_front* front, int64_t index, int32_t* out_pe,
                      int32_t* out_simd, qsiam_perf_estimate* out_est) {
  return guarded([&] {
    require(front != nullptr, "front pointer is null");
    require(index >= 0 && index < static_cast<int64_t>(front->points.size()),
            "front index out of range");
    const FrontPoint& p = front->points[static_cast<std::size_t>(index)];
    for (std::size_t i = 0; i < p.config.folds.size(); ++i) {
      if (out_pe) out_pe[i] = p.config.folds[i].pe;
      if (out_simd) out_simd[i] = p.config.folds[i].simd;
    }
    if (out_est) fill_estimate(out_est, p.est);
  });
}

void qsiam_front_free(qsiam_front* front) { delete front; }

}  // extern "C"
