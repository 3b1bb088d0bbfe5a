#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "core/errors.hpp"

namespace qsiam {

// Dense row-major tensor, outermost dimension first (e.g. [C,H,W]).
template <typename T>
struct TensorT {
  std::vector<int> dims;
  std::vector<T> data;

  TensorT() = default;
  explicit TensorT(std::vector<int> d, T fill = T{})
      : dims(std::move(d)), data(element_count(dims), fill) {}

  static std::size_t element_count(const std::vector<int>& d) {
    std::size_t n = 1;
    for (int v : d) {
      if (v < 0) throw ShapeError("tensor dimension must be non-negative");
      n *= static_cast<std::size_t>(v);
    }
    return n;
  }

  std::size_t size() const { return data.size(); }

  T& at3(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * dims[1] + y) * dims[2] + x];
  }
  const T& at3(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * dims[1] + y) * dims[2] + x];
  }

  T& at2(int y, int x) { return data[static_cast<std::size_t>(y) * dims[1] + x]; }
  const T& at2(int y, int x) const {
    return data[static_cast<std::size_t>(y) * dims[1] + x];
  }
};

using AccTensor = TensorT<std::int32_t>;   // convolution accumulators
using ScoreMap = TensorT<double>;          // response maps, dims [H,W]
using CorrMap = TensorT<std::int64_t>;     // raw correlation sums, dims [H,W]

}  // namespace qsiam
