#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "core/metrics.hpp"
#include "core/netspec.hpp"
#include "core/perfmodel.hpp"
#include "core/sequence.hpp"
#include "core/tracker.hpp"
#include "qsiam/qsiam.h"
#include "testutil.hpp"

using namespace qsiam;
using test::TempDir;

namespace {

qsiam_image borrow(const Image& img) {
  qsiam_image out;
  out.channels = img.channels;
  out.height = img.height;
  out.width = img.width;
  out.data = img.data.data();
  return out;
}

qsiam_tracker_config stub_config() {
  qsiam_tracker_config cfg;
  qsiam_tracker_config_init(&cfg);
  cfg.stub_features = 1;
  return cfg;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version, parameter count, and names are stable") {
  CHECK(qsiam_version() != nullptr);
  CHECK(std::string(qsiam_version()).find('.') != std::string::npos);
  CHECK(qsiam_param_count() == 554688);

  CHECK(std::string(qsiam_status_name(QSIAM_OK)) == "ok");
  CHECK(std::string(qsiam_status_name(QSIAM_ERR_ARGUMENT)) == "argument");
  CHECK(std::string(qsiam_status_name(QSIAM_ERR_CONTAINER)) == "container");
  CHECK(std::string(qsiam_status_name(QSIAM_ERR_IO)) == "io");
  CHECK(std::string(qsiam_status_name(999)) == "unknown");

  for (int i = 0; i < 7; ++i) {
    REQUIRE(qsiam_stage_name(i) != nullptr);
    CHECK(std::string(qsiam_stage_name(i)) == kStageNames[i]);
  }
  CHECK(qsiam_stage_name(7) == nullptr);
  CHECK(qsiam_stage_name(-1) == nullptr);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(qsiam_group_name(i) != nullptr);
    CHECK(std::string(qsiam_group_name(i)) == kGroupNames[i]);
  }
  CHECK(qsiam_group_name(3) == nullptr);
}

TEST_CASE("config init mirrors the core defaults") {
  qsiam_tracker_config cfg;
  qsiam_tracker_config_init(&cfg);
  const TrackerConfig core;
  CHECK(cfg.num_scales == core.num_scales);
  CHECK(cfg.scale_step == core.scale_step);
  CHECK(cfg.scale_penalty == core.scale_penalty);
  CHECK(cfg.scale_damping == core.scale_damping);
  CHECK(cfg.window_influence == core.window_influence);
  CHECK(cfg.context == core.context);
  CHECK(cfg.upsample == core.upsample);
  CHECK(cfg.exemplar_size == core.exemplar_size);
  CHECK(cfg.roi_size == core.roi_size);
  CHECK(cfg.stub_features == 0);
}

TEST_CASE("weights round trip through generate, save, and load") {
  TempDir tmp;
  qsiam_weights* w = nullptr;
  REQUIRE(qsiam_weights_generate(7, &w) == QSIAM_OK);
  REQUIRE(w != nullptr);

  const std::string a = tmp.file("a.qsw");
  const std::string b = tmp.file("b.qsw");
  REQUIRE(qsiam_weights_save(w, a.c_str()) == QSIAM_OK);

  qsiam_weights* back = nullptr;
  REQUIRE(qsiam_weights_load(a.c_str(), &back) == QSIAM_OK);
  REQUIRE(qsiam_weights_save(back, b.c_str()) == QSIAM_OK);
  CHECK(test::read_file(a) == test::read_file(b));

  qsiam_weights_free(w);
  qsiam_weights_free(back);
}

TEST_CASE("failures set a status and a readable message") {
  TempDir tmp;
  qsiam_weights* w = nullptr;
  const std::string missing = tmp.file("missing.qsw");
  CHECK(qsiam_weights_load(missing.c_str(), &w) == QSIAM_ERR_IO);
  CHECK(w == nullptr);
  CHECK(std::string(qsiam_last_error()).find("missing.qsw") != std::string::npos);

  CHECK(qsiam_weights_load(nullptr, &w) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_weights_generate(1, nullptr) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_weights_save(nullptr, missing.c_str()) == QSIAM_ERR_ARGUMENT);

  // A successful call clears the message.
  CHECK(std::string(qsiam_last_error()).size() > 0);
  qsiam_tracker_config cfg;
  qsiam_tracker_config_init(&cfg);
  CHECK(std::string(qsiam_last_error()).empty() == false);
  qsiam_weights* ok = nullptr;
  REQUIRE(qsiam_weights_generate(1, &ok) == QSIAM_OK);
  CHECK(std::string(qsiam_last_error()).empty());
  qsiam_weights_free(ok);
}

TEST_CASE("free functions tolerate null") {
  qsiam_weights_free(nullptr);
  qsiam_tracker_free(nullptr);
  qsiam_boxes_free(nullptr);
  qsiam_stage_times_free(nullptr);
  qsiam_benchmark_free(nullptr);
  qsiam_calibration_free(nullptr);
  qsiam_front_free(nullptr);
}

TEST_CASE("tracker over the boundary matches the core loop") {
  test::SynthSpec sc;
  sc.frames = 4;
  const std::vector<Image> frames = test::synth_frames(sc);
  const BBox init = test::synth_box(sc, 0);

  // Core reference run.
  TrackerConfig core_cfg;
  core_cfg.stub_features = true;
  const TrackRun ref = track_frames(nullptr, core_cfg, frames, init);

  const qsiam_tracker_config cfg = stub_config();
  qsiam_tracker* t = nullptr;
  REQUIRE(qsiam_tracker_create(nullptr, &cfg, &t) == QSIAM_OK);

  const qsiam_image f0 = borrow(frames[0]);
  qsiam_bbox seed{init.left(), init.top(), init.w, init.h};
  REQUIRE(qsiam_tracker_init(t, &f0, seed) == QSIAM_OK);

  for (std::size_t i = 1; i < frames.size(); ++i) {
    const qsiam_image fi = borrow(frames[i]);
    qsiam_bbox box{};
    qsiam_stage_times times{};
    REQUIRE(qsiam_tracker_update(t, &fi, &box, &times) == QSIAM_OK);

    // Boxes cross the boundary in top-left form, bit for bit.
    CHECK(box.x == ref.boxes[i].left());
    CHECK(box.y == ref.boxes[i].top());
    CHECK(box.w == ref.boxes[i].w);
    CHECK(box.h == ref.boxes[i].h);

    const double sum = times.crop_resize + times.input_transfer + times.network +
                       times.output_transfer + times.cross_correlation +
                       times.upsampling + times.locate;
    CHECK(times.total == doctest::Approx(sum).epsilon(1e-12));
  }
  qsiam_tracker_free(t);
}

TEST_CASE("tracker creation and update guard their arguments") {
  const qsiam_tracker_config cfg = stub_config();
  qsiam_tracker* t = nullptr;

  qsiam_tracker_config no_stub = cfg;
  no_stub.stub_features = 0;
  CHECK(qsiam_tracker_create(nullptr, &no_stub, &t) == QSIAM_ERR_ARGUMENT);
  CHECK(t == nullptr);
  CHECK(qsiam_tracker_create(nullptr, &cfg, nullptr) == QSIAM_ERR_ARGUMENT);

  qsiam_tracker_config bad = cfg;
  bad.num_scales = 0;
  CHECK(qsiam_tracker_create(nullptr, &bad, &t) == QSIAM_ERR_ARGUMENT);

  REQUIRE(qsiam_tracker_create(nullptr, &cfg, &t) == QSIAM_OK);
  const Image frame = test::synth_frame(64, 64, 32, 32, 16);
  const qsiam_image img = borrow(frame);
  qsiam_bbox box{};
  CHECK(qsiam_tracker_update(t, &img, &box, nullptr) == QSIAM_ERR_ARGUMENT);

  qsiam_image broken = img;
  broken.channels = 2;
  CHECK(qsiam_tracker_init(t, &broken, qsiam_bbox{20, 20, 16, 16}) ==
        QSIAM_ERR_ARGUMENT);
  broken = img;
  broken.data = nullptr;
  CHECK(qsiam_tracker_init(t, &broken, qsiam_bbox{20, 20, 16, 16}) ==
        QSIAM_ERR_ARGUMENT);
  qsiam_tracker_free(t);
}

TEST_CASE("timing aggregation over the boundary matches the core") {
  const double stages[7] = {0.0102, 0.0010, 0.0205, 0.0080, 0.0081, 0.0011, 0.0057};
  const double total = 0.0587;
  qsiam_timing_report r{};
  REQUIRE(qsiam_timing_aggregate(stages, &total, 1, &r) == QSIAM_OK);
  CHECK(r.frames == 1);
  CHECK(r.stage_sum == doctest::Approx(0.0546).epsilon(1e-9));
  CHECK(r.fps == doctest::Approx(17.035775).epsilon(1e-5));
  CHECK(r.group_pct[1] == doctest::Approx(50.2555).epsilon(1e-4));

  CHECK(qsiam_timing_aggregate(nullptr, &total, 1, &r) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_timing_aggregate(stages, &total, 0, &r) == QSIAM_ERR_ARGUMENT);
  const double zero = 0.0;
  CHECK(qsiam_timing_aggregate(stages, &zero, 1, &r) == QSIAM_ERR_ARGUMENT);
}

TEST_CASE("sequence tracking returns boxes, per frame times, and the report") {
  TempDir tmp;
  test::SynthSpec sc;
  sc.frames = 6;
  const std::vector<BBox> gt = test::write_synth_sequence(tmp.path, sc);

  const qsiam_tracker_config cfg = stub_config();
  qsiam_bbox* boxes = nullptr;
  int64_t count = 0;
  qsiam_stage_times* times = nullptr;
  int64_t tracked = 0;
  qsiam_timing_report report{};
  REQUIRE(qsiam_track_sequence(nullptr, &cfg, tmp.path.string().c_str(), &boxes, &count,
                               &times, &tracked, &report) == QSIAM_OK);

  REQUIRE(count == sc.frames);
  REQUIRE(tracked == sc.frames - 1);
  REQUIRE(boxes != nullptr);
  REQUIRE(times != nullptr);

  // The first box echoes the seed in top-left form.
  CHECK(boxes[0].x == doctest::Approx(gt[0].left()).epsilon(1e-6));
  CHECK(boxes[0].y == doctest::Approx(gt[0].top()).epsilon(1e-6));
  CHECK(boxes[0].w == doctest::Approx(gt[0].w));

  for (int64_t i = 0; i < tracked; ++i) {
    CHECK(times[i].total > 0.0);
    const double sum = times[i].crop_resize + times[i].input_transfer +
                       times[i].network + times[i].output_transfer +
                       times[i].cross_correlation + times[i].upsampling +
                       times[i].locate;
    CHECK(sum > 0.0);
  }
  CHECK(report.frames == tracked);
  CHECK(report.total_mean > 0.0);
  CHECK(report.fps > 0.0);

  // The report is exactly the aggregate of the returned rows.
  std::vector<double> flat, totals;
  for (int64_t i = 0; i < tracked; ++i) {
    flat.insert(flat.end(), {times[i].crop_resize, times[i].input_transfer,
                             times[i].network, times[i].output_transfer,
                             times[i].cross_correlation, times[i].upsampling,
                             times[i].locate});
    totals.push_back(times[i].total);
  }
  qsiam_timing_report again{};
  REQUIRE(qsiam_timing_aggregate(flat.data(), totals.data(), tracked, &again) ==
          QSIAM_OK);
  CHECK(again.total_mean == doctest::Approx(report.total_mean).epsilon(1e-12));
  CHECK(again.stage_sum == doctest::Approx(report.stage_sum).epsilon(1e-12));

  qsiam_boxes_free(boxes);
  qsiam_stage_times_free(times);
}

TEST_CASE("sequence tracking handles edge cases") {
  TempDir tmp;

  // Missing directory.
  qsiam_bbox* boxes = nullptr;
  int64_t count = 0;
  const qsiam_tracker_config cfg = stub_config();
  const std::string absent = tmp.file("absent");
  CHECK(qsiam_track_sequence(nullptr, &cfg, absent.c_str(), &boxes, &count, nullptr,
                             nullptr, nullptr) == QSIAM_ERR_INGEST);
  CHECK(boxes == nullptr);

  // Single frame: report zeroed, one box, nothing tracked.
  test::SynthSpec sc;
  sc.frames = 1;
  test::write_synth_sequence(tmp.path / "single", sc);
  int64_t tracked = -1;
  qsiam_timing_report report;
  report.frames = 99;
  REQUIRE(qsiam_track_sequence(nullptr, &cfg, (tmp.path / "single").string().c_str(),
                               &boxes, &count, nullptr, &tracked, &report) == QSIAM_OK);
  CHECK(count == 1);
  CHECK(tracked == 0);
  CHECK(report.frames == 0);
  CHECK(report.fps == 0.0);
  qsiam_boxes_free(boxes);

  // All outputs optional.
  CHECK(qsiam_track_sequence(nullptr, &cfg, (tmp.path / "single").string().c_str(),
                             nullptr, nullptr, nullptr, nullptr, nullptr) == QSIAM_OK);
  CHECK(qsiam_track_sequence(nullptr, &cfg, nullptr, nullptr, nullptr, nullptr, nullptr,
                             nullptr) == QSIAM_ERR_ARGUMENT);
}

TEST_CASE("results write through the boundary and read back in core form") {
  TempDir tmp;
  const qsiam_bbox boxes[2] = {{10.25, 20.5, 30.0, 40.0}, {1.0, 2.0, 3.0, 4.0}};
  const std::string path = tmp.file("results.txt");
  REQUIRE(qsiam_write_results(path.c_str(), boxes, 2) == QSIAM_OK);

  const std::vector<BBox> back = read_results(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].left() == doctest::Approx(10.25));
  CHECK(back[1].h == doctest::Approx(4.0));

  CHECK(qsiam_write_results(nullptr, boxes, 2) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_write_results(path.c_str(), nullptr, 2) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_write_results(path.c_str(), boxes, -1) == QSIAM_ERR_ARGUMENT);
}

TEST_CASE("annotation writes one outlined frame per input frame") {
  TempDir tmp;
  test::SynthSpec sc;
  sc.frames = 3;
  const std::vector<BBox> gt = test::write_synth_sequence(tmp.path / "seq", sc);

  std::vector<qsiam_bbox> boxes;
  for (const BBox& b : gt) boxes.push_back({b.left(), b.top(), b.w, b.h});
  const std::string results = tmp.file("results.txt");
  REQUIRE(qsiam_write_results(results.c_str(), boxes.data(),
                              static_cast<int64_t>(boxes.size())) == QSIAM_OK);

  const std::string out_dir = tmp.file("annotated");
  REQUIRE(qsiam_annotate_sequence((tmp.path / "seq").string().c_str(), results.c_str(),
                                  out_dir.c_str()) == QSIAM_OK);

  int written = 0;
  for (const auto& e : std::filesystem::directory_iterator(out_dir))
    if (e.path().extension() == ".ppm") ++written;
  CHECK(written == sc.frames);

  // The results box outline is painted in the first annotated frame.
  const Image annotated = load_image(out_dir + "/000000.ppm");
  const int top = static_cast<int>(std::lround(gt[0].top()));
  const int left = static_cast<int>(std::lround(gt[0].left()));
  CHECK(annotated.at(0, top, left) == 255.f);

  // Mismatched counts are rejected.
  REQUIRE(qsiam_write_results(results.c_str(), boxes.data(), 2) == QSIAM_OK);
  CHECK(qsiam_annotate_sequence((tmp.path / "seq").string().c_str(), results.c_str(),
                                out_dir.c_str()) == QSIAM_ERR_ARGUMENT);
}

TEST_CASE("benchmark echo mode scores a perfect mao") {
  TempDir tmp;
  test::SynthSpec sc;
  sc.frames = 5;
  test::write_synth_sequence(tmp.path / "a", sc);
  sc.start_x += 10;
  sc.frames = 7;
  test::write_synth_sequence(tmp.path / "b", sc);

  qsiam_benchmark* bench = nullptr;
  REQUIRE(qsiam_benchmark_run(nullptr, nullptr, tmp.path.string().c_str(), 1, &bench) ==
          QSIAM_OK);
  REQUIRE(bench != nullptr);
  CHECK(qsiam_benchmark_sequences(bench) == 2);
  CHECK(qsiam_benchmark_mao(bench) == doctest::Approx(1.0));

  const char* name = nullptr;
  int64_t frames = 0;
  double ao = 0;
  REQUIRE(qsiam_benchmark_sequence(bench, 0, &name, &frames, &ao) == QSIAM_OK);
  CHECK(std::string(name) == "a");
  CHECK(frames == 4);  // init frame excluded
  CHECK(ao == doctest::Approx(1.0));

  CHECK(qsiam_benchmark_sequence(bench, 2, &name, &frames, &ao) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_benchmark_sequence(bench, -1, &name, &frames, &ao) == QSIAM_ERR_ARGUMENT);
  qsiam_benchmark_free(bench);

  CHECK(qsiam_benchmark_run(nullptr, nullptr, tmp.path.string().c_str(), 0, &bench) ==
        QSIAM_ERR_ARGUMENT);  // real run needs weights or the stub
}

TEST_CASE("benchmark with the stub tracker follows the synthetic scenes") {
  TempDir tmp;
  test::SynthSpec sc;
  sc.frames = 10;
  test::write_synth_sequence(tmp.path / "a", sc);

  const qsiam_tracker_config cfg = stub_config();
  qsiam_benchmark* bench = nullptr;
  REQUIRE(qsiam_benchmark_run(nullptr, &cfg, tmp.path.string().c_str(), 0, &bench) ==
          QSIAM_OK);
  CHECK(qsiam_benchmark_mao(bench) >= 0.5);
  CHECK(qsiam_benchmark_fps(bench) > 0.0);
  qsiam_benchmark_free(bench);
}

TEST_CASE("perf estimates cross the boundary intact") {
  const int32_t pe[6] = {32, 32, 16, 8, 8, 8};
  const int32_t simd[6] = {3, 16, 16, 16, 16, 8};
  qsiam_perf_estimate est{};
  REQUIRE(qsiam_perf_estimate_run(pe, simd, 6, 100e6, &est) == QSIAM_OK);
  CHECK(est.latency_cycles == 6917040);
  CHECK(est.resource_units == 672);
  CHECK(est.bottleneck_layer == 5);
  CHECK(est.bottleneck_cycles == 1937664);
  CHECK(est.latency_fps == doctest::Approx(1e8 / 6917040.0));

  int32_t bad_pe[6] = {7, 32, 16, 8, 8, 8};
  CHECK(qsiam_perf_estimate_run(bad_pe, simd, 6, 100e6, &est) == QSIAM_ERR_FOLDING);
  CHECK(qsiam_perf_estimate_run(pe, simd, 5, 100e6, &est) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_perf_estimate_run(nullptr, simd, 6, 100e6, &est) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_perf_estimate_run(pe, simd, 6, 0.0, &est) == QSIAM_ERR_ARGUMENT);
}

TEST_CASE("presets are exposed with their folds") {
  REQUIRE(qsiam_preset_count() == 6);
  const std::vector<NamedConfig> core = preset_configs();
  for (int32_t i = 0; i < 6; ++i) {
    const char* name = nullptr;
    int32_t pe[6], simd[6];
    REQUIRE(qsiam_preset(i, &name, pe, simd) == QSIAM_OK);
    CHECK(std::string(name) == core[i].name);
    for (int l = 0; l < 6; ++l) {
      CHECK(pe[l] == core[i].config.folds[l].pe);
      CHECK(simd[l] == core[i].config.folds[l].simd);
    }
  }
  const char* name = nullptr;
  CHECK(qsiam_preset(6, &name, nullptr, nullptr) == QSIAM_ERR_ARGUMENT);
}

TEST_CASE("calibration tables load and index safely") {
  qsiam_calibration* table = nullptr;
  REQUIRE(qsiam_calibration_builtin(&table) == QSIAM_OK);
  REQUIRE(qsiam_calibration_size(table) == 6);

  const char* name = nullptr;
  double fps = 0, lut = 0, ff = 0, bram = 0, lutram = 0, watts = 0;
  REQUIRE(qsiam_calibration_row(table, 0, &name, &fps, &lut, &ff, &bram, &lutram,
                                &watts) == QSIAM_OK);
  CHECK(std::string(name) == "V1");
  CHECK(fps == doctest::Approx(38.46));
  CHECK(watts == doctest::Approx(4.50));
  CHECK(qsiam_calibration_row(table, 6, &name, &fps, &lut, &ff, &bram, &lutram,
                              &watts) == QSIAM_ERR_ARGUMENT);
  qsiam_calibration_free(table);

  const char* data_dir = std::getenv("QSIAM_DATA");
  REQUIRE(data_dir != nullptr);
  const std::string csv = std::string(data_dir) + "/calibration_v1_v6.csv";
  qsiam_calibration* loaded = nullptr;
  REQUIRE(qsiam_calibration_load(csv.c_str(), &loaded) == QSIAM_OK);
  CHECK(qsiam_calibration_size(loaded) == 6);
  qsiam_calibration_free(loaded);

  TempDir tmp;
  qsiam_calibration* none = nullptr;
  CHECK(qsiam_calibration_load(tmp.file("absent.csv").c_str(), &none) == QSIAM_ERR_IO);
  CHECK(qsiam_calibration_load(nullptr, &none) == QSIAM_ERR_ARGUMENT);
}

TEST_CASE("the energy fit crosses the boundary") {
  const int64_t units[6] = {672, 736, 864, 992, 1632, 2656};
  const double watts[6] = {4.50, 4.56, 4.81, 4.92, 5.50, 6.79};
  double base = 0, per = 0;
  REQUIRE(qsiam_fit_energy(units, watts, 6, &base, &per) == QSIAM_OK);
  CHECK(base == doctest::Approx(3.762134387).epsilon(1e-6));
  CHECK(per == doctest::Approx(0.001126482).epsilon(1e-6));

  CHECK(qsiam_fit_energy(units, watts, 1, &base, &per) == QSIAM_ERR_FIT);
  const int64_t flat[2] = {100, 100};
  const double w2[2] = {4.0, 5.0};
  CHECK(qsiam_fit_energy(flat, w2, 2, &base, &per) == QSIAM_ERR_FIT);
  CHECK(qsiam_fit_energy(nullptr, watts, 6, &base, &per) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_fit_energy(units, watts, 6, nullptr, nullptr) == QSIAM_OK);
}

TEST_CASE("exploration over the boundary matches the core front") {
  const int32_t pes[2] = {8, 16};
  const int32_t simds[2] = {3, 9};
  qsiam_front* front = nullptr;
  REQUIRE(qsiam_explore(std::numeric_limits<int64_t>::max(), pes, 2, simds, 2, 100e6,
                        &front) == QSIAM_OK);
  REQUIRE(front != nullptr);

  const std::vector<FrontPoint> core =
      explore(canonical_network(), std::numeric_limits<std::int64_t>::max(), {8, 16},
              {3, 9}, 100e6);
  REQUIRE(qsiam_front_size(front) == static_cast<int64_t>(core.size()));

  for (int64_t i = 0; i < qsiam_front_size(front); ++i) {
    int32_t pe[6], simd[6];
    qsiam_perf_estimate est{};
    REQUIRE(qsiam_front_point(front, i, pe, simd, &est) == QSIAM_OK);
    CHECK(est.latency_cycles == core[i].est.latency_cycles);
    CHECK(est.resource_units == core[i].est.resource_units);
    for (int l = 0; l < 6; ++l) {
      CHECK(pe[l] == core[i].config.folds[l].pe);
      CHECK(simd[l] == core[i].config.folds[l].simd);
    }
    // Outputs are individually optional.
    REQUIRE(qsiam_front_point(front, i, nullptr, nullptr, nullptr) == QSIAM_OK);
  }
  CHECK(qsiam_front_point(front, qsiam_front_size(front), nullptr, nullptr, nullptr) ==
        QSIAM_ERR_ARGUMENT);
  qsiam_front_free(front);

  // Zero budget: a valid, empty front.
  qsiam_front* empty = nullptr;
  REQUIRE(qsiam_explore(0, pes, 2, simds, 2, 100e6, &empty) == QSIAM_OK);
  CHECK(qsiam_front_size(empty) == 0);
  qsiam_front_free(empty);

  CHECK(qsiam_explore(100, nullptr, 2, simds, 2, 100e6, &front) == QSIAM_ERR_ARGUMENT);
  CHECK(qsiam_explore(100, pes, 0, simds, 2, 100e6, &front) == QSIAM_ERR_ARGUMENT);
}

}  // TEST_SUITE
