#pragma once

#include <optional>
#include <vector>

#include "core/netspec.hpp"
#include "core/qtensor.hpp"
#include "core/weights.hpp"

namespace qsiam {

// Integer-only inference pipeline. Batch norm parameters are folded into
// per-channel thresholds when the network is built, so forward() touches
// nothing but int8 tensors and int32 accumulators.
class Network {
 public:
  Network(NetworkSpec spec, const WeightContainer& weights);

  // Pixel values 0..255, planar [C,H,W] -> int8 input tensor.
  QTensor quantize_input(const TensorT<float>& pixels) const;

  QTensor forward(const QTensor& input) const;

  // As forward(), also records the output dims after every layer.
  QTensor forward_traced(const QTensor& input,
                         std::vector<std::vector<int>>* shapes) const;

  const NetworkSpec& spec() const { return spec_; }
  double input_scale() const { return input_scale_; }

 private:
  struct Stage {
    QTensor weights;
    std::optional<ThresholdSet> act;  // folded batch norm + quantizer
    bool pool = false;
    double acc_scale = 1.0;
    int out_bits = 8;       // used when act is empty
    double out_scale = 1.0;
  };

  NetworkSpec spec_;
  double input_scale_ = 1.0;
  std::vector<Stage> stages_;
};

}  // namespace qsiam
