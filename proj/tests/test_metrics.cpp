#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "testutil.hpp"

using namespace qsiam;

namespace {

Sequence make_seq(const std::string& name, int frames) {
  Sequence seq;
  seq.name = name;
  for (int i = 0; i < frames; ++i) {
    seq.frames.push_back(name + "/" + std::to_string(i) + ".ppm");
    seq.groundtruth.push_back(BBox::from_topleft(5.0 * i, 3.0 * i, 10, 10));
  }
  return seq;
}

BBox far_away(const BBox& b) { return BBox::from_topleft(b.left() + 1000, b.top(), b.w, b.h); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("iou of identical boxes is one") {
  const BBox a = BBox::from_topleft(3, 4, 10, 20);
  CHECK(iou(a, a) == doctest::Approx(1.0));
}

TEST_CASE("iou of disjoint or touching boxes is zero") {
  const BBox a = BBox::from_topleft(0, 0, 2, 2);
  CHECK(iou(a, BBox::from_topleft(10, 10, 2, 2)) == 0.0);
  CHECK(iou(a, BBox::from_topleft(2, 0, 2, 2)) == 0.0);  // shared edge only
}

TEST_CASE("iou handles partial overlap and containment exactly") {
  const BBox a = BBox::from_topleft(0, 0, 2, 2);
  const BBox shifted = BBox::from_topleft(1, 0, 2, 2);
  CHECK(iou(a, shifted) == doctest::Approx(1.0 / 3.0));

  const BBox outer = BBox::from_topleft(0, 0, 4, 4);
  const BBox inner = BBox::from_topleft(1, 1, 2, 2);
  CHECK(iou(outer, inner) == doctest::Approx(0.25));
}

TEST_CASE("iou is symmetric") {
  Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    const BBox a = BBox::from_topleft(rng.uniform(-10, 10), rng.uniform(-10, 10),
                                      rng.uniform(0.5, 20), rng.uniform(0.5, 20));
    const BBox b = BBox::from_topleft(rng.uniform(-10, 10), rng.uniform(-10, 10),
                                      rng.uniform(0.5, 20), rng.uniform(0.5, 20));
    CHECK(iou(a, b) == doctest::Approx(iou(b, a)).epsilon(1e-12));
    CHECK(iou(a, b) >= 0.0);
    CHECK(iou(a, b) <= 1.0);
  }
}

TEST_CASE("degenerate boxes never overlap anything") {
  const BBox a = BBox::from_topleft(0, 0, 10, 10);
  BBox flat = a;
  flat.w = 0;
  CHECK(iou(a, flat) == 0.0);
  CHECK(iou(flat, a) == 0.0);
  flat.w = -3;
  CHECK(iou(flat, a) == 0.0);
}

TEST_CASE("the init frame never counts toward accuracy") {
  const Sequence seq = make_seq("s", 3);
  std::vector<BBox> boxes = seq.groundtruth;
  boxes[0] = far_away(boxes[0]);  // a bad init box is still ignored

  const SequenceResult r = evaluate_sequence(seq, boxes);
  CHECK(r.frames == 2);
  REQUIRE(r.ious.size() == 2);
  CHECK(r.ao == doctest::Approx(1.0));
}

TEST_CASE("a sequence with only the init frame has nothing to evaluate") {
  const Sequence seq = make_seq("one", 1);
  const SequenceResult r = evaluate_sequence(seq, {seq.groundtruth[0]});
  CHECK(r.frames == 0);
  CHECK(r.ao == 0.0);
}

TEST_CASE("box and frame counts must agree") {
  const Sequence seq = make_seq("s", 3);
  std::vector<BBox> boxes = seq.groundtruth;
  boxes.pop_back();
  CHECK_THROWS_AS(evaluate_sequence(seq, boxes), ParamError);
}

TEST_CASE("mean ao weights sequences by evaluated frames") {
  SequenceResult a;
  a.frames = 100;
  a.ao = 0.5;
  SequenceResult b;
  b.frames = 300;
  b.ao = 0.7;
  CHECK(mean_ao({a}) == doctest::Approx(0.5));
  CHECK(mean_ao({a, b}) == doctest::Approx(0.65));
  CHECK(mean_ao({b, a}) == doctest::Approx(0.65));  // order independent

  SequenceResult c = a;
  c.ao = 0.9;
  // Equal lengths degrade to the arithmetic mean.
  CHECK(mean_ao({a, c}) == doctest::Approx(0.7));
}

TEST_CASE("mean ao rejects empty input") {
  CHECK_THROWS_AS(mean_ao({}), ParamError);
  SequenceResult empty;
  empty.frames = 0;
  CHECK_THROWS_AS(mean_ao({empty}), ParamError);
}

TEST_CASE("a ground truth echo scores a perfect benchmark") {
  const std::vector<Sequence> dataset{make_seq("a", 5), make_seq("b", 9)};
  const TrackerFn echo = [](const Sequence& seq, double* seconds) {
    if (seconds) *seconds = 1.0;
    return seq.groundtruth;
  };
  const BenchmarkReport report = run_benchmark(dataset, echo);
  CHECK(report.mao == doctest::Approx(1.0));
  CHECK(report.total_frames == 4 + 8);
  CHECK(report.seconds == doctest::Approx(2.0));
  CHECK(report.fps == doctest::Approx(12.0 / 2.0));
  REQUIRE(report.sequences.size() == 2);
  CHECK(report.sequences[0].name == "a");
  CHECK(report.sequences[1].ao == doctest::Approx(1.0));
}

TEST_CASE("a lost tracker scores zero") {
  const std::vector<Sequence> dataset{make_seq("a", 6)};
  const TrackerFn lost = [](const Sequence& seq, double*) {
    std::vector<BBox> boxes = seq.groundtruth;
    for (std::size_t i = 1; i < boxes.size(); ++i) boxes[i] = far_away(boxes[i]);
    return boxes;
  };
  const BenchmarkReport report = run_benchmark(dataset, lost);
  CHECK(report.mao == doctest::Approx(0.0));
  CHECK(report.fps == 0.0);  // no time was reported
}

TEST_CASE("planted per sequence accuracies combine frame weighted") {
  // 100 evaluated frames at exactly 0.5, 300 at exactly 0.7.
  const std::vector<Sequence> dataset{make_seq("half", 101), make_seq("seventy", 301)};
  const TrackerFn planted = [](const Sequence& seq, double*) {
    std::vector<BBox> boxes = seq.groundtruth;
    const std::size_t evaluated = boxes.size() - 1;
    const std::size_t hits =
        seq.name == "half" ? evaluated / 2 : evaluated * 7 / 10;
    for (std::size_t i = 1 + hits; i < boxes.size(); ++i) boxes[i] = far_away(boxes[i]);
    return boxes;
  };
  const BenchmarkReport report = run_benchmark(dataset, planted);
  REQUIRE(report.sequences.size() == 2);
  CHECK(report.sequences[0].ao == doctest::Approx(0.5));
  CHECK(report.sequences[1].ao == doctest::Approx(0.7));
  CHECK(report.mao == doctest::Approx(0.65));
}

TEST_CASE("benchmarks need at least one sequence") {
  const TrackerFn echo = [](const Sequence& seq, double*) { return seq.groundtruth; };
  CHECK_THROWS_AS(run_benchmark({}, echo), ParamError);
}

}  // TEST_SUITE
