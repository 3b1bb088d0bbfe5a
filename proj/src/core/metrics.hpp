#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/bbox.hpp"
#include "core/sequence.hpp"

namespace qsiam {

// Intersection over union of two axis-aligned boxes. Non-positive sizes give 0.
double iou(const BBox& a, const BBox& b);

// Per-sequence accuracy. The init frame is given to the tracker, so it is
// excluded from the average; `frames` counts evaluated frames only.
struct SequenceResult {
  std::string name;
  std::size_t frames = 0;
  double ao = 0;
  std::vector<double> ious;  // one per evaluated frame
};

SequenceResult evaluate_sequence(const Sequence& seq, const std::vector<BBox>& boxes);

// Frame-weighted mean of per-sequence AO. Zero evaluated frames -> error.
double mean_ao(const std::vector<SequenceResult>& results);

struct BenchmarkReport {
  std::vector<SequenceResult> sequences;
  double mao = 0;
  std::size_t total_frames = 0;  // evaluated frames
  double seconds = 0;            // tracker time over all evaluated frames
  double fps = 0;
};

// Runs `tracker` over every sequence (one-pass: init on the first frame, never
// re-seeded). The callable is injectable so oracles can stand in for the real
// tracker.
using TrackerFn =
    std::function<std::vector<BBox>(const Sequence& seq, double* seconds)>;

BenchmarkReport run_benchmark(const std::vector<Sequence>& dataset,
                              const TrackerFn& tracker);

}  // namespace qsiam
