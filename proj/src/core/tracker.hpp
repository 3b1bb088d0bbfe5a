#pragma once

#include <string>
#include <vector>

#include "core/bbox.hpp"
#include "core/image.hpp"
#include "core/network.hpp"
#include "core/qtensor.hpp"
#include "core/tensor.hpp"
#include "core/timing.hpp"

namespace qsiam {

struct TrackerConfig {
  int num_scales = 3;
  double scale_step = 1.0375;
  double scale_penalty = 0.9745;
  double scale_damping = 0.59;
  double window_influence = 0.176;
  double context = 0.5;
  int upsample = 16;
  int exemplar_size = 110;
  int roi_size = 238;
  bool stub_features = false;  // grayscale block-average features, no network

  void validate() const;
};

// Dense sliding-window match of the exemplar over the search features.
// roi [C,Hr,Wr], exemplar [C,He,We] -> int64 sums [Hr-He+1, Wr-We+1].
CorrMap cross_correlate(const QTensor& roi, const QTensor& exemplar);

// Separable Catmull-Rom upsampling by an integer factor, edge-clamped.
ScoreMap upsample_bicubic(const ScoreMap& map, int factor);

// Cosine taper, outer product, normalized to sum 1.
ScoreMap hann_window(int side);

struct Peak {
  int scale_index = 0;
  int y = 0, x = 0;
  double value = 0;
};

// Picks the scale by penalized max response, then the peak of the chosen
// map after min-max normalization and window blending.
Peak penalize_and_locate(const std::vector<ScoreMap>& maps, const ScoreMap& window,
                         const TrackerConfig& cfg);

// Applies a located peak to the previous box: displacement mapped back
// through the crop geometry, size updated by the damped scale factor.
BBox update_state(const BBox& prev, const Peak& peak, const TrackerConfig& cfg,
                  int map_side, int stride, double roi_side_in_frame);

// Cheap deterministic feature extractor used when no weights are wanted:
// grayscale 8x8 block means, quantized, replicated over 4 channels.
QTensor stub_features(const Image& patch);

class Tracker {
 public:
  // `net` may be null only when cfg.stub_features is set.
  Tracker(const Network* net, const TrackerConfig& cfg);

  void init(const Image& frame, const BBox& box);

  // Tracks one frame; returns the new box. Optional stage timing output.
  BBox update(const Image& frame, StageTiming* timing = nullptr);

  const BBox& box() const { return box_; }
  int feature_stride() const { return stride_; }

 private:
  QTensor extract(const Image& patch, StageTiming* timing);

  const Network* net_;
  TrackerConfig cfg_;
  BBox box_;
  QTensor exemplar_;
  ScoreMap window_;  // built lazily once the response size is known
  int stride_ = 8;
  bool ready_ = false;
};

struct TrackRun {
  std::vector<BBox> boxes;           // one per frame, first is the init box
  std::vector<StageTiming> stages;   // one per tracked frame
  std::vector<double> frame_seconds; // measured loop total per tracked frame
};

TrackRun track_frames(const Network* net, const TrackerConfig& cfg,
                      const std::vector<Image>& frames, const BBox& init);

// Loads frames one at a time; IngestError reports the failing frame path.
TrackRun track_paths(const Network* net, const TrackerConfig& cfg,
                     const std::vector<std::string>& paths, const BBox& init);

}  // namespace qsiam
