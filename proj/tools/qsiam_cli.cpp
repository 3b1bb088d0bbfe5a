// Command line front end. Talks to the tracker exclusively through the C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qsiam/qsiam.h"

namespace {

// Exit codes: 0 ok, 2 bad arguments/config, 3 unreadable input data,
// 4 internal failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

int exit_code_for(int status) {
  switch (status) {
    case QSIAM_OK:
      return kExitOk;
    case QSIAM_ERR_ARGUMENT:
    case QSIAM_ERR_FOLDING:
    case QSIAM_ERR_UNSUPPORTED:
    case QSIAM_ERR_FIT:
      return kExitUsage;
    case QSIAM_ERR_INGEST:
    case QSIAM_ERR_CONTAINER:
    case QSIAM_ERR_IO:
      return kExitData;
    default:
      return kExitInternal;
  }
}

// Prints the library error and throws the matching exit code.
[[noreturn]] void die(int status) {
  std::fprintf(stderr, "error (%s): %s\n", qsiam_status_name(status),
               qsiam_last_error());
  std::exit(exit_code_for(status));
}

void check(int status) {
  if (status != QSIAM_OK) die(status);
}

[[noreturn]] void die_usage(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(kExitUsage);
}

[[noreturn]] void die_data(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(kExitData);
}

struct TrackOptions {
  std::string sequence, weights, config_file, output = "results.txt";
  std::string timing_csv, dump_dir, features;
  int scales = 0;  // 0: keep config value
  bool no_timing = false;
};

void apply_config_file(const std::string& path, qsiam_tracker_config& cfg) {
  std::ifstream in(path);
  if (!in) die_data("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    die_usage("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) die_usage("config file '" + path + "' must hold an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "num_scales") cfg.num_scales = value.get<int>();
      else if (key == "scale_step") cfg.scale_step = value.get<double>();
      else if (key == "scale_penalty") cfg.scale_penalty = value.get<double>();
      else if (key == "scale_damping") cfg.scale_damping = value.get<double>();
      else if (key == "window_influence") cfg.window_influence = value.get<double>();
      else if (key == "context") cfg.context = value.get<double>();
      else if (key == "upsample") cfg.upsample = value.get<int>();
      else if (key == "exemplar_size") cfg.exemplar_size = value.get<int>();
      else if (key == "roi_size") cfg.roi_size = value.get<int>();
      else if (key == "features") {
        const std::string f = value.get<std::string>();
        if (f == "network") cfg.stub_features = 0;
        else if (f == "stub") cfg.stub_features = 1;
        else die_usage("config 'features' must be \"network\" or \"stub\"");
      } else {
        die_usage("config file '" + path + "': unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    die_usage("config file '" + path + "': " + e.what());
  }
}

void apply_feature_flag(const std::string& features, qsiam_tracker_config& cfg) {
  if (features.empty()) return;
  if (features == "network") cfg.stub_features = 0;
  else if (features == "stub") cfg.stub_features = 1;
  else die_usage("--features must be 'network' or 'stub'");
}

qsiam_weights* load_weights_checked(const std::string& path) {
  qsiam_weights* w = nullptr;
  check(qsiam_weights_load(path.c_str(), &w));
  return w;
}

void print_report(const qsiam_timing_report& r) {
  std::printf("frames tracked: %" PRId64 "\n", r.frames);
  std::printf("%-18s %12s %8s\n", "stage", "mean_s", "share");
  for (int i = 0; i < 7; ++i)
    std::printf("%-18s %12.6f %7.2f%%\n", qsiam_stage_name(i), r.stage_mean[i],
                100.0 * r.stage_mean[i] / r.total_mean);
  std::printf("%-18s %12.6f\n", "stage_sum", r.stage_sum);
  std::printf("%-18s %12.6f\n", "total", r.total_mean);
  std::printf("%-18s %12.6f\n", "overhead", r.overhead);
  std::printf("fps %.2f\n", r.fps);
  std::printf("\n%-12s %12s %8s %10s\n", "group", "seconds", "share", "group_fps");
  for (int i = 0; i < 3; ++i)
    std::printf("%-12s %12.6f %7.2f%% %10.2f\n", qsiam_group_name(i),
                r.group_seconds[i], r.group_pct[i],
                r.group_seconds[i] > 0 ? 1.0 / r.group_seconds[i] : 0.0);
}

constexpr const char* kStageCsvHeader =
    "crop_resize,input_transfer,network,output_transfer,cross_correlation,"
    "upsampling,locate,total";

void write_stage_csv(const std::string& path, const qsiam_stage_times* times,
                     int64_t count) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) die_data("cannot open '" + path + "' for writing");
  out << kStageCsvHeader << "\n";
  char buf[256];
  for (int64_t i = 0; i < count; ++i) {
    const qsiam_stage_times& t = times[i];
    std::snprintf(buf, sizeof(buf), "%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n",
                  t.crop_resize, t.input_transfer, t.network, t.output_transfer,
                  t.cross_correlation, t.upsampling, t.locate, t.total);
    out << buf;
  }
}

int cmd_track(const TrackOptions& opt) {
  qsiam_tracker_config cfg;
  qsiam_tracker_config_init(&cfg);
  if (!opt.config_file.empty()) apply_config_file(opt.config_file, cfg);
  apply_feature_flag(opt.features, cfg);
  if (opt.scales > 0) cfg.num_scales = opt.scales;

  qsiam_weights* weights = nullptr;
  if (!cfg.stub_features) {
    if (opt.weights.empty()) die_usage("track: --weights is required (or use --features stub)");
    weights = load_weights_checked(opt.weights);
  }

  qsiam_bbox* boxes = nullptr;
  int64_t count = 0;
  qsiam_stage_times* times = nullptr;
  int64_t frame_count = 0;
  qsiam_timing_report report{};
  const int status = qsiam_track_sequence(
      weights, &cfg, opt.sequence.c_str(), &boxes, &count,
      opt.no_timing ? nullptr : &times, opt.no_timing ? nullptr : &frame_count,
      opt.no_timing ? nullptr : &report);
  if (status != QSIAM_OK) {
    qsiam_weights_free(weights);
    die(status);
  }

  check(qsiam_write_results(opt.output.c_str(), boxes, count));
  std::printf("tracked %" PRId64 " frames, results written to %s\n", count,
              opt.output.c_str());

  if (!opt.no_timing && frame_count > 0) {
    print_report(report);
    if (!opt.timing_csv.empty()) write_stage_csv(opt.timing_csv, times, frame_count);
  }
  if (!opt.dump_dir.empty())
    check(qsiam_annotate_sequence(opt.sequence.c_str(), opt.output.c_str(),
                                  opt.dump_dir.c_str()));

  qsiam_stage_times_free(times);
  qsiam_boxes_free(boxes);
  qsiam_weights_free(weights);
  return kExitOk;
}

struct BenchOptions {
  std::string dataset, weights, config_file, output, features;
  int scales = 0;
  bool echo_gt = false;
};

int cmd_bench(const BenchOptions& opt) {
  qsiam_tracker_config cfg;
  qsiam_tracker_config_init(&cfg);
  if (!opt.config_file.empty()) apply_config_file(opt.config_file, cfg);
  apply_feature_flag(opt.features, cfg);
  if (opt.scales > 0) cfg.num_scales = opt.scales;

  qsiam_weights* weights = nullptr;
  if (!opt.echo_gt && !cfg.stub_features) {
    if (opt.weights.empty())
      die_usage("bench: --weights is required (or use --features stub / --echo-gt)");
    weights = load_weights_checked(opt.weights);
  }

  qsiam_benchmark* bench = nullptr;
  const int status = qsiam_benchmark_run(weights, &cfg, opt.dataset.c_str(),
                                         opt.echo_gt ? 1 : 0, &bench);
  if (status != QSIAM_OK) {
    qsiam_weights_free(weights);
    die(status);
  }

  const int64_t n = qsiam_benchmark_sequences(bench);
  std::printf("%-24s %8s %8s\n", "sequence", "frames", "ao");
  std::ofstream csv;
  if (!opt.output.empty()) {
    csv.open(opt.output, std::ios::binary | std::ios::trunc);
    if (!csv) die_data("cannot open '" + opt.output + "' for writing");
    csv << "sequence,frames,ao\n";
  }
  char buf[128];
  int64_t total_frames = 0;
  for (int64_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    int64_t frames = 0;
    double ao = 0;
    check(qsiam_benchmark_sequence(bench, i, &name, &frames, &ao));
    total_frames += frames;
    std::printf("%-24s %8" PRId64 " %8.4f\n", name, frames, ao);
    if (csv.is_open()) {
      std::snprintf(buf, sizeof(buf), "%s,%" PRId64 ",%.6f\n", name, frames, ao);
      csv << buf;
    }
  }
  const double mao = qsiam_benchmark_mao(bench);
  const double fps = qsiam_benchmark_fps(bench);
  if (csv.is_open()) {
    std::snprintf(buf, sizeof(buf), "ALL,%" PRId64 ",%.6f\n", total_frames, mao);
    csv << buf;
  }
  std::printf("mAO %.3f\n", mao);
  std::printf("fps %.2f\n", fps);

  qsiam_benchmark_free(bench);
  qsiam_weights_free(weights);
  return kExitOk;
}

struct DseOptions {
  std::string configs;  // "table3" evaluates the reference presets
  std::string calibration, output, detail;
  std::string pe_set = "8,16,32,64", simd_set = "3,8,16,32,64";
  std::int64_t budget = -1;  // <0: unlimited
  double clock_hz = 100e6;
};

std::vector<int32_t> parse_int_list(const std::string& text, const char* what) {
  std::vector<int32_t> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      out.push_back(std::stoi(field));
    } catch (const std::exception&) {
      die_usage(std::string(what) + ": '" + field + "' is not an integer");
    }
  }
  if (out.empty()) die_usage(std::string(what) + ": empty list");
  return out;
}

// Energy model fitted on the reference presets against the calibration table
// (matched by name). Returns false if no usable pairs exist.
bool fit_reference_energy(qsiam_calibration* table, double* base, double* per_unit) {
  const int32_t presets = qsiam_preset_count();
  std::vector<int64_t> units;
  std::vector<double> watts;
  const int64_t rows = qsiam_calibration_size(table);
  for (int64_t r = 0; r < rows; ++r) {
    const char* row_name = nullptr;
    double w = 0;
    check(qsiam_calibration_row(table, r, &row_name, nullptr, nullptr, nullptr,
                                nullptr, nullptr, &w));
    for (int32_t p = 0; p < presets; ++p) {
      const char* name = nullptr;
      int32_t pe[QSIAM_LAYER_COUNT], simd[QSIAM_LAYER_COUNT];
      check(qsiam_preset(p, &name, pe, simd));
      if (std::string(name) != row_name) continue;
      qsiam_perf_estimate est{};
      check(qsiam_perf_estimate_run(pe, simd, QSIAM_LAYER_COUNT, 100e6, &est));
      units.push_back(est.resource_units);
      watts.push_back(w);
      break;
    }
  }
  if (units.size() < 2) return false;
  check(qsiam_fit_energy(units.data(), watts.data(),
                         static_cast<int32_t>(units.size()), base, per_unit));
  return true;
}

int cmd_dse(const DseOptions& opt) {
  qsiam_calibration* table = nullptr;
  if (opt.calibration.empty()) check(qsiam_calibration_builtin(&table));
  else check(qsiam_calibration_load(opt.calibration.c_str(), &table));

  double base = 0, per_unit = 0;
  const bool have_fit = fit_reference_energy(table, &base, &per_unit);
  if (have_fit)
    std::printf("energy fit: %.4f W base + %.6f W per resource unit\n", base, per_unit);

  char buf[512];
  if (opt.configs == "table3") {
    std::ofstream csv;
    if (!opt.output.empty()) {
      csv.open(opt.output, std::ios::binary | std::ios::trunc);
      if (!csv) die_data("cannot open '" + opt.output + "' for writing");
      csv << "name,latency_cycles,latency_fps,throughput_fps,bottleneck_layer,"
             "resource_units,pred_watts\n";
    }
    std::printf("%-5s %14s %12s %14s %6s %10s\n", "name", "latency_cycles",
                "latency_fps", "throughput_fps", "units", "pred_watts");
    const int32_t presets = qsiam_preset_count();
    for (int32_t p = 0; p < presets; ++p) {
      const char* name = nullptr;
      int32_t pe[QSIAM_LAYER_COUNT], simd[QSIAM_LAYER_COUNT];
      check(qsiam_preset(p, &name, pe, simd));
      qsiam_perf_estimate est{};
      check(qsiam_perf_estimate_run(pe, simd, QSIAM_LAYER_COUNT, opt.clock_hz, &est));
      const double watts = have_fit ? base + per_unit * est.resource_units : 0.0;
      std::printf("%-5s %14" PRId64 " %12.3f %14.3f %6" PRId64 " %10.3f\n", name,
                  est.latency_cycles, est.latency_fps, est.throughput_fps,
                  est.resource_units, watts);
      if (csv.is_open()) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%" PRId64 ",%.6f,%.6f,%d,%" PRId64 ",%.6f\n", name,
                      est.latency_cycles, est.latency_fps, est.throughput_fps,
                      est.bottleneck_layer, est.resource_units, watts);
        csv << buf;
      }
    }
    qsiam_calibration_free(table);
    return kExitOk;
  }
  if (!opt.configs.empty()) die_usage("dse: unknown --configs value '" + opt.configs + "'");

  const std::vector<int32_t> pe = parse_int_list(opt.pe_set, "--pe-set");
  const std::vector<int32_t> simd = parse_int_list(opt.simd_set, "--simd-set");
  const int64_t budget = opt.budget < 0 ? INT64_MAX : opt.budget;

  qsiam_front* front = nullptr;
  check(qsiam_explore(budget, pe.data(), static_cast<int32_t>(pe.size()), simd.data(),
                      static_cast<int32_t>(simd.size()), opt.clock_hz, &front));
  const int64_t n = qsiam_front_size(front);
  std::printf("pareto front: %" PRId64 " configurations\n", n);

  std::ofstream csv;
  if (!opt.output.empty()) {
    csv.open(opt.output, std::ios::binary | std::ios::trunc);
    if (!csv) die_data("cannot open '" + opt.output + "' for writing");
    csv << "index,pe0,pe1,pe2,pe3,pe4,pe5,simd0,simd1,simd2,simd3,simd4,simd5,"
           "latency_cycles,latency_fps,resource_units,pred_watts\n";
  }
  std::ofstream detail;
  if (!opt.detail.empty()) {
    detail.open(opt.detail, std::ios::binary | std::ios::trunc);
    if (!detail) die_data("cannot open '" + opt.detail + "' for writing");
    detail << "index,layer,pe,simd,cycles\n";
  }

  for (int64_t i = 0; i < n; ++i) {
    int32_t fpe[QSIAM_LAYER_COUNT], fsimd[QSIAM_LAYER_COUNT];
    qsiam_perf_estimate est{};
    check(qsiam_front_point(front, i, fpe, fsimd, &est));
    const double watts = have_fit ? base + per_unit * est.resource_units : 0.0;
    if (i == 0 || i == n - 1)
      std::printf("  [%" PRId64 "] units %" PRId64 ", %.2f fps, %.3f W\n", i,
                  est.resource_units, est.latency_fps, watts);
    if (csv.is_open()) {
      std::snprintf(buf, sizeof(buf),
                    "%" PRId64 ",%d,%d,%d,%d,%d,%d,%d,%d,%d,%d,%d,%d,%" PRId64
                    ",%.6f,%" PRId64 ",%.6f\n",
                    i, fpe[0], fpe[1], fpe[2], fpe[3], fpe[4], fpe[5], fsimd[0],
                    fsimd[1], fsimd[2], fsimd[3], fsimd[4], fsimd[5],
                    est.latency_cycles, est.latency_fps, est.resource_units, watts);
      csv << buf;
    }
    if (detail.is_open())
      for (int l = 0; l < QSIAM_LAYER_COUNT; ++l) {
        std::snprintf(buf, sizeof(buf), "%" PRId64 ",%d,%d,%d,%" PRId64 "\n", i, l,
                      fpe[l], fsimd[l], est.layer_cycles[l]);
        detail << buf;
      }
  }

  qsiam_front_free(front);
  qsiam_calibration_free(table);
  return kExitOk;
}

struct ProfileOptions {
  std::string sequence, weights, config_file, stage_csv, features;
  int scales = 0;
};

int cmd_profile(const ProfileOptions& opt) {
  if (!opt.stage_csv.empty()) {
    // Offline aggregation of previously recorded per-frame rows.
    std::ifstream in(opt.stage_csv);
    if (!in) die_data("cannot open stage csv '" + opt.stage_csv + "'");
    std::string line;
    if (!std::getline(in, line) || line != kStageCsvHeader)
      die_data("stage csv '" + opt.stage_csv + "' has an unexpected header");
    std::vector<double> stages, totals;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string field;
      std::vector<double> row;
      while (std::getline(ss, field, ',')) {
        try {
          row.push_back(std::stod(field));
        } catch (const std::exception&) {
          die_data("stage csv line " + std::to_string(line_no) + " is malformed");
        }
      }
      if (row.size() != 8)
        die_data("stage csv line " + std::to_string(line_no) + " needs 8 columns");
      for (int i = 0; i < 7; ++i) stages.push_back(row[i]);
      totals.push_back(row[7]);
    }
    if (totals.empty()) die_data("stage csv '" + opt.stage_csv + "' has no rows");
    qsiam_timing_report report{};
    check(qsiam_timing_aggregate(stages.data(), totals.data(),
                                 static_cast<int64_t>(totals.size()), &report));
    print_report(report);
    return kExitOk;
  }

  if (opt.sequence.empty())
    die_usage("profile: provide --sequence for a live run or --stage-csv for offline data");

  qsiam_tracker_config cfg;
  qsiam_tracker_config_init(&cfg);
  if (!opt.config_file.empty()) apply_config_file(opt.config_file, cfg);
  apply_feature_flag(opt.features, cfg);
  if (opt.scales > 0) cfg.num_scales = opt.scales;

  qsiam_weights* weights = nullptr;
  if (!cfg.stub_features) {
    if (opt.weights.empty())
      die_usage("profile: --weights is required (or use --features stub)");
    weights = load_weights_checked(opt.weights);
  }
  qsiam_timing_report report{};
  const int status = qsiam_track_sequence(weights, &cfg, opt.sequence.c_str(), nullptr,
                                          nullptr, nullptr, nullptr, &report);
  if (status != QSIAM_OK) {
    qsiam_weights_free(weights);
    die(status);
  }
  if (report.frames == 0)
    die_data("profile: sequence has a single frame, nothing to measure");
  print_report(report);
  qsiam_weights_free(weights);
  return kExitOk;
}

struct GenOptions {
  std::string output;
  std::uint64_t seed = 1;
};

int cmd_gen(const GenOptions& opt) {
  qsiam_weights* w = nullptr;
  check(qsiam_weights_generate(opt.seed, &w));
  const int status = qsiam_weights_save(w, opt.output.c_str());
  qsiam_weights_free(w);
  check(status);
  std::printf("wrote %s (%" PRIu64 " weight elements, seed %" PRIu64 ")\n",
              opt.output.c_str(), qsiam_param_count(), opt.seed);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized Siamese tracker and accelerator design explorer"};
  app.require_subcommand(1);

  TrackOptions track;
  auto* t = app.add_subcommand("track", "Track one sequence and write a results file");
  t->add_option("--sequence", track.sequence, "Sequence directory")->required();
  t->add_option("--weights", track.weights, "Weight container path");
  t->add_option("--config", track.config_file, "JSON tracker config");
  t->add_option("--output", track.output, "Results file (default results.txt)");
  t->add_option("--timing-csv", track.timing_csv, "Write per-frame stage rows");
  t->add_option("--scales", track.scales, "Override scale pyramid size");
  t->add_option("--features", track.features, "Feature extractor: network|stub");
  t->add_option("--dump-frames", track.dump_dir, "Write annotated frames here");
  t->add_flag("--no-timing", track.no_timing, "Skip stage timing entirely");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Evaluate accuracy over a dataset");
  b->add_option("--dataset", bench.dataset, "Dataset root directory")->required();
  b->add_option("--weights", bench.weights, "Weight container path");
  b->add_option("--config", bench.config_file, "JSON tracker config");
  b->add_option("--output", bench.output, "Per-sequence CSV");
  b->add_option("--scales", bench.scales, "Override scale pyramid size");
  b->add_option("--features", bench.features, "Feature extractor: network|stub");
  b->add_flag("--echo-gt", bench.echo_gt, "Replay ground truth boxes (oracle)");

  DseOptions dse;
  auto* d = app.add_subcommand("dse", "Analytical folding model and design search");
  d->add_option("--configs", dse.configs, "'table3': evaluate the reference presets");
  d->add_option("--budget", dse.budget, "Resource unit budget (default unlimited)");
  d->add_option("--pe-set", dse.pe_set, "PE candidates (default 8,16,32,64)");
  d->add_option("--simd-set", dse.simd_set, "SIMD candidates (default 3,8,16,32,64)");
  d->add_option("--clock-hz", dse.clock_hz, "Clock in Hz (default 1e8)");
  d->add_option("--calibration", dse.calibration, "Calibration CSV (default builtin)");
  d->add_option("--output", dse.output, "Front/preset CSV");
  d->add_option("--detail", dse.detail, "Per-layer cycles CSV (explore mode)");

  ProfileOptions prof;
  auto* p = app.add_subcommand("profile", "Stage latency accounting");
  p->add_option("--sequence", prof.sequence, "Sequence directory (live run)");
  p->add_option("--weights", prof.weights, "Weight container path");
  p->add_option("--config", prof.config_file, "JSON tracker config");
  p->add_option("--stage-csv", prof.stage_csv, "Aggregate recorded rows instead");
  p->add_option("--scales", prof.scales, "Override scale pyramid size");
  p->add_option("--features", prof.features, "Feature extractor: network|stub");

  GenOptions gen;
  auto* g = app.add_subcommand("gen-weights", "Write a random weight container");
  g->add_option("--output", gen.output, "Container path")->required();
  g->add_option("--seed", gen.seed, "RNG seed (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (t->parsed()) return cmd_track(track);
  if (b->parsed()) return cmd_bench(bench);
  if (d->parsed()) return cmd_dse(dse);
  if (p->parsed()) return cmd_profile(prof);
  if (g->parsed()) return cmd_gen(gen);
  return kExitUsage;
}
