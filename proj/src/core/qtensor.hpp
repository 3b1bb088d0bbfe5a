#pragma once

#include <cstdint>
#include <vector>

#include "core/tensor.hpp"

namespace qsiam {

// Symmetric uniform quantized tensor: real value = int value * scale.
// Stored as int8 regardless of bit width; values stay inside
// [-2^(bits-1), 2^(bits-1) - 1].
struct QTensor {
  std::vector<int> dims;
  std::vector<std::int8_t> data;
  int bits = 8;
  double scale = 1.0;

  QTensor() = default;
  QTensor(std::vector<int> d, int b, double s)
      : dims(std::move(d)), data(TensorT<float>::element_count(dims)), bits(b), scale(s) {}

  int qmin() const { return -(1 << (bits - 1)); }
  int qmax() const { return (1 << (bits - 1)) - 1; }
  std::size_t size() const { return data.size(); }

  std::int8_t& at3(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * dims[1] + y) * dims[2] + x];
  }
  std::int8_t at3(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * dims[1] + y) * dims[2] + x];
  }

  // Throws if bits/scale/dims/stored values are out of contract.
  void validate(const char* what) const;
};

// Round to nearest, ties to even. Used everywhere a real becomes an integer.
double round_half_even(double v);

// reals -> quantized ints with saturation. bits in [1,8], scale > 0.
QTensor quantize(const TensorT<float>& reals, int bits, double scale);

TensorT<float> dequantize(const QTensor& q);

// 3x3 convolution, stride 1, zero padding 1, full-precision int32 accumulators.
// input [C,H,W], weights [F,C,3,3] -> output [F,H,W]. No bias term.
AccTensor conv2d_same(const QTensor& input, const QTensor& weights);

// 2x2 max pooling, stride 2, floor semantics: odd trailing row/column dropped.
QTensor maxpool2x2(const QTensor& input);

// Integer threshold activation unit. For channel c the output is
//   out_min + |{ k : acc >= thresholds[c][k] }|
// which equals a rounded affine transform of the accumulator when the
// thresholds come from lower_batchnorm below.
struct ThresholdSet {
  std::vector<std::vector<std::int32_t>> thresholds;  // [channels][2^bits - 1], non-decreasing
  int bits = 4;        // output bit width
  int out_min = -8;    // value emitted when no threshold is met
  double out_scale = 1.0;

  int levels() const { return (1 << bits) - 1; }
  void validate() const;
};

// acc [C,H,W] -> quantized [C,H,W] with bits/out_scale taken from the set.
QTensor threshold_activate(const AccTensor& acc, const ThresholdSet& set);

// Per-channel batch norm parameters; stddev already includes epsilon.
struct BatchNorm {
  std::vector<float> gamma, beta, mean, stddev;
  std::size_t channels() const { return gamma.size(); }
};

// Folds batch norm + uniform quantizer into integer thresholds:
//   real = gamma * (acc * acc_scale - mean) / stddev + beta
//   q    = clamp(round(real / out_scale), out_min, out_min + 2^bits - 1)
// Requires gamma > 0 and stddev > 0 so thresholds stay monotone.
ThresholdSet lower_batchnorm(const BatchNorm& bn, double acc_scale, int bits,
                             double out_scale);

// Rescale accumulators into a plain quantized tensor (no batch norm):
// real = acc * acc_scale, then quantize to (bits, out_scale).
QTensor requantize(const AccTensor& acc, double acc_scale, int bits, double out_scale);

}  // namespace qsiam
