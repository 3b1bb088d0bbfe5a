#include "core/timing.hpp"

#include "core/errors.hpp"

namespace qsiam {

TimingReport aggregate_timings(const std::vector<StageTiming>& samples,
                               const std::vector<double>& totals) {
  if (samples.empty()) throw ParamError("aggregate_timings: no samples");
  if (samples.size() != totals.size())
    throw ParamError("aggregate_timings: sample and total counts differ");

  TimingReport r;
  r.frames = samples.size();
  const double n = static_cast<double>(r.frames);

  for (const StageTiming& s : samples)
    for (int i = 0; i < kStageCount; ++i) r.stage_mean[i] += s.seconds[i];
  for (int i = 0; i < kStageCount; ++i) {
    r.stage_mean[i] /= n;
    r.stage_sum += r.stage_mean[i];
  }

  for (double t : totals) {
    if (!(t > 0.0)) throw ParamError("aggregate_timings: totals must be positive");
    r.total_mean += t;
  }
  r.total_mean /= n;
  r.overhead = r.total_mean - r.stage_sum;
  r.fps = 1.0 / r.total_mean;

  for (std::size_t g = 0; g < kGroupStages.size(); ++g) {
    double s = 0;
    for (int idx : kGroupStages[g])
      if (idx >= 0) s += r.stage_mean[idx];
    r.group_seconds[g] = s;
    r.group_pct[g] = 100.0 * s / r.total_mean;
  }
  return r;
}

}  // namespace qsiam
