#include "core/netspec.hpp"

#include "core/errors.hpp"

namespace qsiam {

void NetworkSpec::validate() const {
  if (input_channels < 1) throw ParamError("network spec: input channels must be positive");
  int prev = input_channels;
  for (const auto& l : layers) {
    if (l.in_channels != prev)
      throw ParamError("network spec: layer '" + l.name + "' input channels do not chain");
    if (l.out_channels < 1)
      throw ParamError("network spec: layer '" + l.name + "' needs positive output channels");
    if (l.weight_bits < 1 || l.weight_bits > 8)
      throw ParamError("network spec: layer '" + l.name + "' weight bits must be in [1,8]");
    if (l.act_bits && (*l.act_bits < 1 || *l.act_bits > 8))
      throw ParamError("network spec: layer '" + l.name + "' activation bits must be in [1,8]");
    prev = l.out_channels;
  }
}

int NetworkSpec::output_side(int n) const {
  for (const auto& l : layers) {
    // 3x3 stride 1 pad 1 keeps the side; pooling halves it (floor).
    if (l.pool) n /= 2;
  }
  return n;
}

NetworkSpec canonical_network() {
  NetworkSpec spec;
  auto layer = [](const char* name, int in, int out, int wbits,
                  std::optional<int> abits, bool pool) {
    LayerSpec l;
    l.name = name;
    l.in_channels = in;
    l.out_channels = out;
    l.weight_bits = wbits;
    l.act_bits = abits;
    l.pool = pool;
    l.batch_norm = abits.has_value();
    return l;
  };
  spec.layers = {
      layer("conv0", 3, 64, 8, 4, true),
      layer("conv1", 64, 64, 4, 4, true),
      layer("conv2", 64, 128, 4, 4, true),
      layer("conv3", 128, 128, 4, 4, false),
      layer("conv4", 128, 128, 4, 4, false),
      layer("conv5", 128, 128, 8, std::nullopt, false),
  };
  spec.validate();
  return spec;
}

std::uint64_t param_count(const NetworkSpec& spec) {
  std::uint64_t total = 0;
  for (const auto& l : spec.layers)
    total += 9ull * static_cast<std::uint64_t>(l.in_channels) * l.out_channels;
  return total;
}

}  // namespace qsiam
