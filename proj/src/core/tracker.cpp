#include "core/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace qsiam {

void TrackerConfig::validate() const {
  if (num_scales < 1) throw ParamError("tracker config: need at least one scale");
  if (!(scale_step > 0.0)) throw ParamError("tracker config: scale step must be positive");
  if (!(scale_penalty > 0.0) || scale_penalty > 1.0)
    throw ParamError("tracker config: scale penalty must be in (0,1]");
  if (scale_damping < 0.0 || scale_damping > 1.0)
    throw ParamError("tracker config: scale damping must be in [0,1]");
  if (window_influence < 0.0 || window_influence > 1.0)
    throw ParamError("tracker config: window influence must be in [0,1]");
  if (context < 0.0) throw ParamError("tracker config: context must be non-negative");
  if (upsample < 1) throw ParamError("tracker config: upsample factor must be positive");
  if (exemplar_size < 8 || roi_size <= exemplar_size)
    throw ParamError("tracker config: need roi_size > exemplar_size >= 8");
}

CorrMap cross_correlate(const QTensor& roi, const QTensor& exemplar) {
  if (roi.dims.size() != 3 || exemplar.dims.size() != 3)
    throw ShapeError("cross_correlate: feature tensors must be [C,H,W]");
  if (roi.dims[0] != exemplar.dims[0])
    throw ShapeError("cross_correlate: channel counts differ");
  const int C = roi.dims[0];
  const int Hr = roi.dims[1], Wr = roi.dims[2];
  const int He = exemplar.dims[1], We = exemplar.dims[2];
  if (He > Hr || We > Wr)
    throw ShapeError("cross_correlate: exemplar larger than search features");

  CorrMap out({Hr - He + 1, Wr - We + 1});
  for (int oy = 0; oy < out.dims[0]; ++oy)
    for (int ox = 0; ox < out.dims[1]; ++ox) {
      std::int64_t acc = 0;
      for (int c = 0; c < C; ++c)
        for (int y = 0; y < He; ++y) {
          const std::int8_t* r =
              roi.data.data() +
              (static_cast<std::size_t>(c) * Hr + oy + y) * Wr + ox;
          const std::int8_t* e =
              exemplar.data.data() + (static_cast<std::size_t>(c) * He + y) * We;
          for (int x = 0; x < We; ++x)
            acc += static_cast<std::int32_t>(r[x]) * e[x];
        }
      out.at2(oy, ox) = acc;
    }
  return out;
}

namespace {

// Catmull-Rom kernel (cubic, a = -0.5).
double cubic_weight(double t) {
  t = std::abs(t);
  if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

struct Taps {
  int idx[4];
  double w[4];
};

// Edge-clamped tap positions for every output coordinate of one axis.
std::vector<Taps> make_taps(int n_in, int factor) {
  std::vector<Taps> taps(static_cast<std::size_t>(n_in) * factor);
  for (std::size_t o = 0; o < taps.size(); ++o) {
    const double src = (o + 0.5) / factor - 0.5;
    const int base = static_cast<int>(std::floor(src));
    const double frac = src - base;
    for (int k = 0; k < 4; ++k) {
      taps[o].idx[k] = std::clamp(base - 1 + k, 0, n_in - 1);
      taps[o].w[k] = cubic_weight(frac - (k - 1));
    }
  }
  return taps;
}

}  // namespace

ScoreMap upsample_bicubic(const ScoreMap& map, int factor) {
  if (map.dims.size() != 2) throw ShapeError("upsample_bicubic: map must be [H,W]");
  if (factor < 1) throw ParamError("upsample_bicubic: factor must be positive");
  const int H = map.dims[0], W = map.dims[1];
  if (H < 1 || W < 1) throw ShapeError("upsample_bicubic: empty map");
  if (factor == 1) return map;

  const auto tx = make_taps(W, factor);
  const auto ty = make_taps(H, factor);
  const int Wo = W * factor, Ho = H * factor;

  ScoreMap rows({H, Wo});
  for (int y = 0; y < H; ++y)
    for (int ox = 0; ox < Wo; ++ox) {
      const Taps& t = tx[ox];
      double v = 0;
      for (int k = 0; k < 4; ++k) v += t.w[k] * map.at2(y, t.idx[k]);
      rows.at2(y, ox) = v;
    }

  ScoreMap out({Ho, Wo});
  for (int oy = 0; oy < Ho; ++oy) {
    const Taps& t = ty[oy];
    for (int ox = 0; ox < Wo; ++ox) {
      double v = 0;
      for (int k = 0; k < 4; ++k) v += t.w[k] * rows.at2(t.idx[k], ox);
      out.at2(oy, ox) = v;
    }
  }
  return out;
}

ScoreMap hann_window(int side) {
  if (side < 1) throw ParamError("hann_window: side must be positive");
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::vector<double> w(side, 1.0);
  if (side > 1) {
    const double denom = side - 1;
    for (int i = 0; i < side; ++i)
      w[i] = 0.5 * (1.0 - std::cos(kTwoPi * i / denom));
  }
  ScoreMap out({side, side});
  double sum = 0;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      out.at2(y, x) = w[y] * w[x];
      sum += out.at2(y, x);
    }
  if (sum > 0)
    for (auto& v : out.data) v /= sum;
  return out;
}

Peak penalize_and_locate(const std::vector<ScoreMap>& maps, const ScoreMap& window,
                         const TrackerConfig& cfg) {
  if (maps.empty()) throw ParamError("penalize_and_locate: no score maps");
  for (const auto& m : maps)
    if (m.dims != window.dims)
      throw ShapeError("penalize_and_locate: map and window dims differ");

  const int n = static_cast<int>(maps.size());
  const int mid = n / 2;
  int best_k = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  int best_absoff = std::numeric_limits<int>::max();
  for (int k = 0; k < n; ++k) {
    const int absoff = std::abs(k - mid);
    const double pen = std::pow(cfg.scale_penalty, absoff);
    const double peak = *std::max_element(maps[k].data.begin(), maps[k].data.end());
    const double v = peak * pen;
    // Ties go to the least-penalized (most central) scale.
    if (v > best_val || (v == best_val && absoff < best_absoff)) {
      best_val = v;
      best_k = k;
      best_absoff = absoff;
    }
  }

  const ScoreMap& m = maps[best_k];
  const auto [mn_it, mx_it] = std::minmax_element(m.data.begin(), m.data.end());
  const double mn = *mn_it, mx = *mx_it;
  const double span = mx - mn;

  Peak p;
  p.scale_index = best_k;
  double best = -std::numeric_limits<double>::infinity();
  const int H = m.dims[0], W = m.dims[1];
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      const double norm = span > 0 ? (m.at2(y, x) - mn) / span : 0.0;
      const double v = (1.0 - cfg.window_influence) * norm +
                       cfg.window_influence * window.at2(y, x);
      if (v > best) {
        best = v;
        p.y = y;
        p.x = x;
      }
    }
  p.value = best;
  return p;
}

BBox update_state(const BBox& prev, const Peak& peak, const TrackerConfig& cfg,
                  int map_side, int stride, double roi_center_side) {
  const int center = map_side / 2;
  const int off = peak.scale_index - cfg.num_scales / 2;
  const double chosen_side = roi_center_side * std::pow(cfg.scale_step, off);

  // Peak displacement in upsampled-map cells -> search-crop pixels -> frame.
  const double crop_dx = (peak.x - center) * static_cast<double>(stride) / cfg.upsample;
  const double crop_dy = (peak.y - center) * static_cast<double>(stride) / cfg.upsample;
  const double to_frame = chosen_side / cfg.roi_size;

  const double factor = 1.0 + cfg.scale_damping * (std::pow(cfg.scale_step, off) - 1.0);
  BBox next = prev;
  next.cx = prev.cx + crop_dx * to_frame;
  next.cy = prev.cy + crop_dy * to_frame;
  next.w = prev.w * factor;
  next.h = prev.h * factor;
  return next;
}

QTensor stub_features(const Image& patch) {
  constexpr int kBlock = 8;
  const int oh = patch.height / kBlock, ow = patch.width / kBlock;
  if (oh < 1 || ow < 1) throw ParamError("stub_features: patch smaller than one block");

  QTensor out({4, oh, ow}, 8, 1.0 / 128.0);
  for (int by = 0; by < oh; ++by)
    for (int bx = 0; bx < ow; ++bx) {
      double s = 0;
      for (int y = 0; y < kBlock; ++y)
        for (int x = 0; x < kBlock; ++x) {
          double px = 0;
          for (int c = 0; c < patch.channels; ++c)
            px += patch.at(c, by * kBlock + y, bx * kBlock + x);
          s += px / patch.channels;
        }
      const double mean = s / (kBlock * kBlock);
      double q = round_half_even((mean / 127.5 - 1.0) * 128.0);
      q = std::clamp(q, -128.0, 127.0);
      for (int c = 0; c < 4; ++c)
        out.at3(c, by, bx) = static_cast<std::int8_t>(q);
    }
  return out;
}

namespace {

using SteadyClock = std::chrono::steady_clock;

double seconds_since(SteadyClock::time_point start) {
  return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

}  // namespace

Tracker::Tracker(const Network* net, const TrackerConfig& cfg) : net_(net), cfg_(cfg) {
  cfg_.validate();
  if (!net_ && !cfg_.stub_features)
    throw ParamError("tracker: weights are required unless stub features are enabled");
  if (cfg_.stub_features) net_ = nullptr;

  stride_ = 8;  // stub block size
  if (net_) {
    stride_ = 1;
    for (const auto& l : net_->spec().layers)
      if (l.pool) stride_ *= 2;
  }
}

QTensor Tracker::extract(const Image& patch, StageTiming* timing) {
  auto mark = SteadyClock::now();
  if (net_) {
    const QTensor input = net_->quantize_input(patch.to_tensor());
    if (timing) timing->seconds[kStageInputTransfer] += seconds_since(mark);
    mark = SteadyClock::now();
    QTensor f = net_->forward(input);
    if (timing) timing->seconds[kStageNetwork] += seconds_since(mark);
    return f;
  }
  // Stub path: grayscale conversion plays the input transfer role, block
  // averaging the network role.
  Image gray(1, patch.height, patch.width);
  for (int y = 0; y < patch.height; ++y)
    for (int x = 0; x < patch.width; ++x) {
      double s = 0;
      for (int c = 0; c < patch.channels; ++c) s += patch.at(c, y, x);
      gray.at(0, y, x) = static_cast<float>(s / patch.channels);
    }
  if (timing) timing->seconds[kStageInputTransfer] += seconds_since(mark);
  mark = SteadyClock::now();
  QTensor f = stub_features(gray);
  if (timing) timing->seconds[kStageNetwork] += seconds_since(mark);
  return f;
}

void Tracker::init(const Image& frame, const BBox& box) {
  if (!(box.w > 0.0) || !(box.h > 0.0))
    throw ParamError("tracker: initial box must have positive size");
  const Image patch =
      crop_resize(frame, box, cfg_.context, cfg_.exemplar_size, cfg_.exemplar_size);
  exemplar_ = extract(patch, nullptr);
  box_ = box;
  window_ = ScoreMap();
  ready_ = true;
}

BBox Tracker::update(const Image& frame, StageTiming* timing) {
  if (!ready_) throw ParamError("tracker: update before init");

  const double s_z = context_side(box_, cfg_.context);
  const double s_x = s_z * static_cast<double>(cfg_.roi_size) / cfg_.exemplar_size;
  const int n = cfg_.num_scales;
  const int mid = n / 2;

  auto mark = SteadyClock::now();
  std::vector<Image> crops;
  crops.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double side = s_x * std::pow(cfg_.scale_step, k - mid);
    crops.push_back(crop_patch(frame, box_.cx, box_.cy, side, cfg_.roi_size));
  }
  if (timing) timing->seconds[kStageCrop] += seconds_since(mark);

  std::vector<QTensor> feats;
  feats.reserve(n);
  for (int k = 0; k < n; ++k) feats.push_back(extract(crops[k], timing));

  // Unpack pass between the feature extractor and the matcher.
  mark = SteadyClock::now();
  std::vector<QTensor> unpacked = feats;
  if (timing) timing->seconds[kStageOutputTransfer] += seconds_since(mark);

  mark = SteadyClock::now();
  std::vector<ScoreMap> raw;
  raw.reserve(n);
  for (int k = 0; k < n; ++k) {
    const CorrMap corr = cross_correlate(unpacked[k], exemplar_);
    ScoreMap m({corr.dims[0], corr.dims[1]});
    for (std::size_t i = 0; i < corr.data.size(); ++i)
      m.data[i] = static_cast<double>(corr.data[i]);
    raw.push_back(std::move(m));
  }
  if (timing) timing->seconds[kStageCorrelation] += seconds_since(mark);

  mark = SteadyClock::now();
  std::vector<ScoreMap> up;
  up.reserve(n);
  for (int k = 0; k < n; ++k) up.push_back(upsample_bicubic(raw[k], cfg_.upsample));
  if (timing) timing->seconds[kStageUpsample] += seconds_since(mark);

  mark = SteadyClock::now();
  const int side = up[0].dims[0];
  if (window_.dims != std::vector<int>{side, side}) window_ = hann_window(side);
  const Peak peak = penalize_and_locate(up, window_, cfg_);
  box_ = update_state(box_, peak, cfg_, side, stride_, s_x);
  if (timing) timing->seconds[kStageLocate] += seconds_since(mark);

  return box_;
}

namespace {

template <typename FrameAt>
TrackRun run_loop(const Network* net, const TrackerConfig& cfg, std::size_t count,
                  const BBox& init, FrameAt&& frame_at) {
  if (count == 0) throw ParamError("track: need at least one frame");
  TrackRun run;
  Tracker tracker(net, cfg);
  tracker.init(frame_at(0), init);
  run.boxes.push_back(init);
  for (std::size_t i = 1; i < count; ++i) {
    auto&& frame = frame_at(i);
    const auto start = SteadyClock::now();
    StageTiming st;
    run.boxes.push_back(tracker.update(frame, &st));
    run.frame_seconds.push_back(seconds_since(start));
    run.stages.push_back(st);
  }
  return run;
}

}  // namespace

TrackRun track_frames(const Network* net, const TrackerConfig& cfg,
                      const std::vector<Image>& frames, const BBox& init) {
  return run_loop(net, cfg, frames.size(), init,
                  [&](std::size_t i) -> const Image& { return frames[i]; });
}

TrackRun track_paths(const Network* net, const TrackerConfig& cfg,
                     const std::vector<std::string>& paths, const BBox& init) {
  return run_loop(net, cfg, paths.size(), init,
                  [&](std::size_t i) { return load_image(paths[i]); });
}

}  // namespace qsiam
