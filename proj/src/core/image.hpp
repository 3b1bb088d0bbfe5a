#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/bbox.hpp"
#include "core/tensor.hpp"

namespace qsiam {

// Planar CHW image, values 0..255. Channels: 3 (RGB) or 1 (gray).
struct Image {
  int channels = 0, height = 0, width = 0;
  std::vector<float> data;

  Image() = default;
  Image(int c, int h, int w, float fill = 0.f)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * h * w, fill) {}

  float& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  float at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  TensorT<float> to_tensor() const;
};

// Binary PPM (P6) and PGM (P5), 8-bit. Throws IngestError on malformed input.
Image load_image(const std::string& path);
void save_image(const Image& img, const std::string& path);

std::vector<double> channel_means(const Image& img);

// Square side of the context-padded exemplar region.
double context_side(const BBox& box, double context);

// Crops a square of side `side` centered at (cx, cy) and resizes it to
// out_size x out_size with bilinear sampling. Samples outside the frame take
// the per-channel frame mean.
Image crop_patch(const Image& frame, double cx, double cy, double side, int out_size);

// Context-padded crop around `box`, resized to out_size. base_size is the
// exemplar input side; out_size / base_size sets the region scaling, and
// side_mul applies an extra scale-pyramid factor on top.
Image crop_resize(const Image& frame, const BBox& box, double context, int out_size,
                  int base_size, double side_mul = 1.0);

// 1px rectangle outline, clipped to the frame (annotation dumps).
void draw_box(Image& img, const BBox& box, std::array<float, 3> rgb);

}  // namespace qsiam
