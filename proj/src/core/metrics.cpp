#include "core/metrics.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace qsiam {

double iou(const BBox& a, const BBox& b) {
  if (!(a.w > 0.0) || !(a.h > 0.0) || !(b.w > 0.0) || !(b.h > 0.0)) return 0.0;
  const double ix = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return inter / uni;
}

SequenceResult evaluate_sequence(const Sequence& seq, const std::vector<BBox>& boxes) {
  if (boxes.size() != seq.frames.size())
    throw ParamError("evaluate_sequence: box count does not match frame count");
  SequenceResult r;
  r.name = seq.name;
  double sum = 0;
  for (std::size_t i = 1; i < boxes.size(); ++i) {
    const double v = iou(boxes[i], seq.groundtruth[i]);
    r.ious.push_back(v);
    sum += v;
  }
  r.frames = r.ious.size();
  r.ao = r.frames ? sum / static_cast<double>(r.frames) : 0.0;
  return r;
}

double mean_ao(const std::vector<SequenceResult>& results) {
  if (results.empty()) throw ParamError("mean_ao: no sequences");
  double weighted = 0;
  std::size_t frames = 0;
  for (const auto& r : results) {
    weighted += r.ao * static_cast<double>(r.frames);
    frames += r.frames;
  }
  if (frames == 0) throw ParamError("mean_ao: no evaluated frames");
  return weighted / static_cast<double>(frames);
}

BenchmarkReport run_benchmark(const std::vector<Sequence>& dataset,
                              const TrackerFn& tracker) {
  if (dataset.empty()) throw ParamError("run_benchmark: empty dataset");
  BenchmarkReport report;
  for (const Sequence& seq : dataset) {
    double seconds = 0;
    const std::vector<BBox> boxes = tracker(seq, &seconds);
    SequenceResult r = evaluate_sequence(seq, boxes);
    report.total_frames += r.frames;
    report.seconds += seconds;
    report.sequences.push_back(std::move(r));
  }
  report.mao = mean_ao(report.sequences);
  report.fps = report.seconds > 0
                   ? static_cast<double>(report.total_frames) / report.seconds
                   : 0.0;
  return report;
}

}  // namespace qsiam
