#include "core/network.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace qsiam {

Network::Network(NetworkSpec spec, const WeightContainer& weights)
    : spec_(std::move(spec)), input_scale_(weights.input_scale) {
  spec_.validate();
  if (weights.layers.size() != spec_.layers.size())
    throw ContainerError("weight container does not cover every layer");
  if (!(input_scale_ > 0.0)) throw ParamError("input scale must be positive");

  double cur_scale = input_scale_;
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const LayerSpec& ls = spec_.layers[i];
    const LayerWeights& lw = weights.layers[i];
    Stage st;
    st.weights = lw.weights;
    st.weights.validate(ls.name.c_str());
    if (st.weights.dims != std::vector<int>{ls.out_channels, ls.in_channels, 3, 3})
      throw ShapeError("layer '" + ls.name + "' weights do not match the network spec");
    st.pool = ls.pool;
    st.acc_scale = st.weights.scale * cur_scale;
    if (ls.act_bits) {
      if (!lw.bn)
        throw ContainerError("layer '" + ls.name + "' needs batch norm parameters");
      if (lw.bn->channels() != static_cast<std::size_t>(ls.out_channels))
        throw ShapeError("layer '" + ls.name + "' batch norm size mismatch");
      st.act = lower_batchnorm(*lw.bn, st.acc_scale, *ls.act_bits, lw.out_scale);
    } else {
      st.out_bits = lw.out_bits;
      st.out_scale = lw.out_scale;
    }
    cur_scale = lw.out_scale;
    stages_.push_back(std::move(st));
  }
}

QTensor Network::quantize_input(const TensorT<float>& pixels) const {
  if (pixels.dims.size() != 3 || pixels.dims[0] != spec_.input_channels)
    throw ShapeError("network input must be [" + std::to_string(spec_.input_channels) +
                     ",H,W]");
  TensorT<float> centered(pixels.dims);
  for (std::size_t i = 0; i < pixels.data.size(); ++i)
    centered.data[i] = pixels.data[i] / 127.5f - 1.0f;
  return quantize(centered, 8, input_scale_);
}

QTensor Network::forward(const QTensor& input) const {
  return forward_traced(input, nullptr);
}

QTensor Network::forward_traced(const QTensor& input,
                                std::vector<std::vector<int>>* shapes) const {
  if (input.dims.size() != 3 || input.dims[0] != spec_.input_channels)
    throw ShapeError("network input must be [" + std::to_string(spec_.input_channels) +
                     ",H,W]");
  if (input.bits != 8 || input.scale != input_scale_)
    throw ParamError("network input must use the container's input quantizer");

  QTensor x = input;
  for (const Stage& st : stages_) {
    AccTensor acc = conv2d_same(x, st.weights);
    x = st.act ? threshold_activate(acc, *st.act)
               : requantize(acc, st.acc_scale, st.out_bits, st.out_scale);
    if (st.pool) x = maxpool2x2(x);
    if (shapes) shapes->push_back(x.dims);
  }
  return x;
}

}  // namespace qsiam
