#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsiam {

// One 3x3 convolution stage. act_bits is empty on the final layer, whose
// output is requantized with a recorded scale instead of thresholded.
struct LayerSpec {
  std::string name;
  int in_channels = 0;
  int out_channels = 0;
  int weight_bits = 8;
  std::optional<int> act_bits;
  bool pool = false;        // 2x2 max pool after the activation
  bool batch_norm = true;   // folded into thresholds at load time
};

struct NetworkSpec {
  std::vector<LayerSpec> layers;
  int input_channels = 3;
  int exemplar_size = 110;  // exemplar input is [3,110,110]
  int roi_size = 238;       // search input is [3,238,238]

  void validate() const;

  // Spatial side after running `layers` on an input of side `n`.
  int output_side(int n) const;
};

// The fixed six layer feature extractor used by the tracker.
NetworkSpec canonical_network();

// Total weight element count (bias-free 3x3 convolutions).
std::uint64_t param_count(const NetworkSpec& spec);

}  // namespace qsiam
