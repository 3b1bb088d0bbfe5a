#include "core/qtensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsiam {

double round_half_even(double v) {
  // Explicit ties-to-even so results do not depend on the FPU rounding mode.
  const double floor_v = std::floor(v);
  const double frac = v - floor_v;
  if (frac > 0.5) return floor_v + 1.0;
  if (frac < 0.5) return floor_v;
  const double even = std::fmod(floor_v, 2.0);
  return (even == 0.0) ? floor_v : floor_v + 1.0;
}

void QTensor::validate(const char* what) const {
  const std::string who = what ? what : "tensor";
  if (bits < 1 || bits > 8)
    throw ParamError(who + ": bit width must be in [1,8]");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ParamError(who + ": scale must be finite and positive");
  if (data.size() != TensorT<float>::element_count(dims))
    throw ShapeError(who + ": element count does not match dims");
  const int lo = qmin(), hi = qmax();
  for (std::int8_t v : data)
    if (v < lo || v > hi)
      throw ParamError(who + ": stored value outside the declared bit range");
}

QTensor quantize(const TensorT<float>& reals, int bits, double scale) {
  if (bits < 1 || bits > 8) throw ParamError("quantize: bit width must be in [1,8]");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ParamError("quantize: scale must be finite and positive");
  QTensor q(reals.dims, bits, scale);
  const int lo = q.qmin(), hi = q.qmax();
  for (std::size_t i = 0; i < reals.data.size(); ++i) {
    double v = round_half_even(static_cast<double>(reals.data[i]) / scale);
    v = std::min(static_cast<double>(hi), std::max(static_cast<double>(lo), v));
    q.data[i] = static_cast<std::int8_t>(v);
  }
  return q;
}

TensorT<float> dequantize(const QTensor& q) {
  TensorT<float> out(q.dims);
  for (std::size_t i = 0; i < q.data.size(); ++i)
    out.data[i] = static_cast<float>(q.data[i] * q.scale);
  return out;
}

AccTensor conv2d_same(const QTensor& input, const QTensor& weights) {
  if (input.dims.size() != 3)
    throw ShapeError("conv2d_same: input must be [C,H,W]");
  if (weights.dims.size() != 4)
    throw ShapeError("conv2d_same: weights must be [F,C,Kh,Kw]");
  if (weights.dims[2] != 3 || weights.dims[3] != 3)
    throw UnsupportedError("conv2d_same: only 3x3 kernels are supported");
  if (weights.dims[1] != input.dims[0])
    throw ShapeError("conv2d_same: weight channel count does not match input");

  const int C = input.dims[0], H = input.dims[1], W = input.dims[2];
  const int F = weights.dims[0];
  if (H < 1 || W < 1) throw ShapeError("conv2d_same: empty spatial extent");

  AccTensor out({F, H, W});
  const std::size_t plane = static_cast<std::size_t>(H) * W;

  for (int f = 0; f < F; ++f) {
    std::int32_t* acc = out.data.data() + static_cast<std::size_t>(f) * plane;
    for (int c = 0; c < C; ++c) {
      const std::int8_t* src = input.data.data() + static_cast<std::size_t>(c) * plane;
      const std::int8_t* wf =
          weights.data.data() + (static_cast<std::size_t>(f) * C + c) * 9;
      for (int ky = 0; ky < 3; ++ky) {
        const int dy = ky - 1;
        const int y_begin = dy < 0 ? 1 : 0;
        const int y_end = dy > 0 ? H - 1 : H;
        const std::int32_t w0 = wf[ky * 3 + 0];
        const std::int32_t w1 = wf[ky * 3 + 1];
        const std::int32_t w2 = wf[ky * 3 + 2];
        for (int y = y_begin; y < y_end; ++y) {
          const std::int8_t* r = src + static_cast<std::size_t>(y + dy) * W;
          std::int32_t* a = acc + static_cast<std::size_t>(y) * W;
          if (W == 1) {
            a[0] += w1 * r[0];
            continue;
          }
          a[0] += w1 * r[0] + w2 * r[1];
          for (int x = 1; x < W - 1; ++x)
            a[x] += w0 * r[x - 1] + w1 * r[x] + w2 * r[x + 1];
          a[W - 1] += w0 * r[W - 2] + w1 * r[W - 1];
        }
      }
    }
  }
  return out;
}

QTensor maxpool2x2(const QTensor& input) {
  if (input.dims.size() != 3)
    throw ShapeError("maxpool2x2: input must be [C,H,W]");
  const int C = input.dims[0], H = input.dims[1], W = input.dims[2];
  if (H < 2 || W < 2)
    throw ShapeError("maxpool2x2: spatial extent must be at least 2x2");

  QTensor out({C, H / 2, W / 2}, input.bits, input.scale);
  for (int c = 0; c < C; ++c)
    for (int y = 0; y + 1 < H; y += 2)
      for (int x = 0; x + 1 < W; x += 2) {
        std::int8_t m = std::max(std::max(input.at3(c, y, x), input.at3(c, y, x + 1)),
                                 std::max(input.at3(c, y + 1, x), input.at3(c, y + 1, x + 1)));
        out.at3(c, y / 2, x / 2) = m;
      }
  return out;
}

void ThresholdSet::validate() const {
  if (bits < 1 || bits > 8)
    throw ParamError("threshold set: bit width must be in [1,8]");
  if (!(out_scale > 0.0) || !std::isfinite(out_scale))
    throw ParamError("threshold set: scale must be finite and positive");
  const std::size_t want = static_cast<std::size_t>(levels());
  for (const auto& t : thresholds) {
    if (t.size() != want)
      throw ParamError("threshold set: each channel needs 2^bits - 1 thresholds");
    for (std::size_t k = 1; k < t.size(); ++k)
      if (t[k] < t[k - 1])
        throw ParamError("threshold set: thresholds must be non-decreasing");
  }
}

QTensor threshold_activate(const AccTensor& acc, const ThresholdSet& set) {
  if (acc.dims.size() != 3)
    throw ShapeError("threshold_activate: input must be [C,H,W]");
  if (static_cast<std::size_t>(acc.dims[0]) != set.thresholds.size())
    throw ShapeError("threshold_activate: channel count does not match threshold set");
  set.validate();

  const int C = acc.dims[0], H = acc.dims[1], W = acc.dims[2];
  QTensor out({C, H, W}, set.bits, set.out_scale);
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  for (int c = 0; c < C; ++c) {
    const auto& t = set.thresholds[c];
    const std::int32_t* a = acc.data.data() + static_cast<std::size_t>(c) * plane;
    std::int8_t* o = out.data.data() + static_cast<std::size_t>(c) * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      // Thresholds are sorted, so the count of met thresholds is an upper bound.
      const auto it = std::upper_bound(t.begin(), t.end(), a[i]);
      o[i] = static_cast<std::int8_t>(set.out_min + (it - t.begin()));
    }
  }
  return out;
}

ThresholdSet lower_batchnorm(const BatchNorm& bn, double acc_scale, int bits,
                             double out_scale) {
  const std::size_t C = bn.channels();
  if (bn.beta.size() != C || bn.mean.size() != C || bn.stddev.size() != C)
    throw ParamError("lower_batchnorm: parameter vectors differ in length");
  if (bits < 1 || bits > 8)
    throw ParamError("lower_batchnorm: bit width must be in [1,8]");
  if (!(acc_scale > 0.0) || !(out_scale > 0.0))
    throw ParamError("lower_batchnorm: scales must be positive");

  ThresholdSet set;
  set.bits = bits;
  set.out_min = -(1 << (bits - 1));
  set.out_scale = out_scale;
  set.thresholds.resize(C);

  const int levels = set.levels();
  for (std::size_t c = 0; c < C; ++c) {
    if (!(bn.stddev[c] > 0.0f))
      throw ParamError("lower_batchnorm: stddev must be positive");
    if (!(bn.gamma[c] > 0.0f))
      throw ParamError("lower_batchnorm: gamma must be positive for monotone thresholds");
    const double a = static_cast<double>(bn.gamma[c]) * acc_scale / bn.stddev[c];
    const double b = static_cast<double>(bn.beta[c]) -
                     static_cast<double>(bn.gamma[c]) * bn.mean[c] / bn.stddev[c];
    auto& t = set.thresholds[c];
    t.resize(levels);
    for (int k = 1; k <= levels; ++k) {
      const double edge = ((set.out_min + k - 0.5) * out_scale - b) / a;
      double cell = std::ceil(edge);
      cell = std::min(cell, static_cast<double>(std::numeric_limits<std::int32_t>::max()));
      cell = std::max(cell, static_cast<double>(std::numeric_limits<std::int32_t>::min()));
      t[k - 1] = static_cast<std::int32_t>(cell);
    }
    for (int k = 1; k < levels; ++k) t[k] = std::max(t[k], t[k - 1]);
  }
  return set;
}

QTensor requantize(const AccTensor& acc, double acc_scale, int bits, double out_scale) {
  if (!(acc_scale > 0.0) || !(out_scale > 0.0))
    throw ParamError("requantize: scales must be positive");
  if (bits < 1 || bits > 8) throw ParamError("requantize: bit width must be in [1,8]");
  QTensor out(acc.dims, bits, out_scale);
  const int lo = out.qmin(), hi = out.qmax();
  for (std::size_t i = 0; i < acc.data.size(); ++i) {
    double v = round_half_even(acc.data[i] * acc_scale / out_scale);
    v = std::min(static_cast<double>(hi), std::max(static_cast<double>(lo), v));
    out.data[i] = static_cast<std::int8_t>(v);
  }
  return out;
}

}  // namespace qsiam
