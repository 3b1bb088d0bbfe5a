#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace qsiam {

// Fixed per-frame stage accounting for the tracking loop.
enum Stage : int {
  kStageCrop = 0,
  kStageInputTransfer,
  kStageNetwork,
  kStageOutputTransfer,
  kStageCorrelation,
  kStageUpsample,
  kStageLocate,
  kStageCount
};

inline constexpr std::array<const char*, kStageCount> kStageNames = {
    "crop_resize",     "input_transfer", "network", "output_transfer",
    "cross_correlation", "upsampling",     "locate"};

// Stage groups used by the summary: frame preprocessing, feature extraction
// (transfers + network), response postprocessing.
inline constexpr std::array<const char*, 3> kGroupNames = {"preprocess", "extract",
                                                           "postprocess"};
inline constexpr std::array<std::array<int, 3>, 3> kGroupStages = {{
    {kStageCrop, -1, -1},
    {kStageInputTransfer, kStageNetwork, kStageOutputTransfer},
    {kStageCorrelation, kStageUpsample, kStageLocate},
}};

struct StageTiming {
  std::array<double, kStageCount> seconds{};

  double sum() const {
    double s = 0;
    for (double v : seconds) s += v;
    return s;
  }
};

struct TimingReport {
  std::size_t frames = 0;
  std::array<double, kStageCount> stage_mean{};
  double stage_sum = 0;    // sum of per-stage means
  double total_mean = 0;   // measured wall time per frame
  double overhead = 0;     // total_mean - stage_sum
  double fps = 0;          // 1 / total_mean
  std::array<double, 3> group_seconds{};
  std::array<double, 3> group_pct{};  // share of total_mean, in percent
};

// Means per stage + group shares. `totals` holds the measured per-frame loop
// durations; sizes must match and be non-empty, totals must be positive.
TimingReport aggregate_timings(const std::vector<StageTiming>& samples,
                               const std::vector<double>& totals);

}  // namespace qsiam
