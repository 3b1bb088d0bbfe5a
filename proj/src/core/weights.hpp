#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/netspec.hpp"
#include "core/qtensor.hpp"

namespace qsiam {

// Weights plus the quantizer settings for one layer. out_scale is the scale of
// the layer's quantized output: the activation quantizer scale when batch norm
// is present, otherwise the recorded requantization scale of the final layer.
struct LayerWeights {
  std::string name;
  QTensor weights;  // [out,in,3,3]
  std::optional<BatchNorm> bn;
  int out_bits = 4;
  double out_scale = 1.0;
};

struct WeightContainer {
  double input_scale = 1.0 / 128.0;
  std::vector<LayerWeights> layers;
};

// Single-file container: magic line, little-endian length-prefixed JSON
// manifest, int8 weight blob, float32 batch norm blob. Self-describing and
// byte-stable for a given container value.
void save_weights(const WeightContainer& container, const std::string& path);

// Loads and validates against `spec` (layer count, dims, bit widths, blob
// bounds, stored value ranges). Throws ContainerError/IoError.
WeightContainer load_weights(const std::string& path, const NetworkSpec& spec);

// Seeded random weights with batch norm statistics calibrated on random
// probe inputs so every layer's activations stay non-degenerate. Identical
// seeds produce byte-identical containers.
WeightContainer gen_random_weights(const NetworkSpec& spec, std::uint64_t seed);

}  // namespace qsiam
