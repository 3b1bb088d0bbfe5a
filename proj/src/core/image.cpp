#include "core/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/errors.hpp"

namespace qsiam {

TensorT<float> Image::to_tensor() const {
  TensorT<float> t({channels, height, width});
  t.data = data;
  return t;
}

namespace {

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int parse_dim(const std::string& tok, const std::string& path) {
  try {
    const int v = std::stoi(tok);
    if (v < 1) throw std::invalid_argument("non-positive");
    return v;
  } catch (const std::exception&) {
    throw IngestError("'" + path + "': bad image header field '" + tok + "'");
  }
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open frame '" + path + "'");

  const std::string magic = next_token(in);
  int channels = 0;
  if (magic == "P6") channels = 3;
  else if (magic == "P5") channels = 1;
  else throw IngestError("'" + path + "': unsupported image format '" + magic + "'");

  const int width = parse_dim(next_token(in), path);
  const int height = parse_dim(next_token(in), path);
  const int maxval = parse_dim(next_token(in), path);
  if (maxval != 255)
    throw IngestError("'" + path + "': only 8-bit images are supported");

  const std::size_t count = static_cast<std::size_t>(channels) * height * width;
  std::vector<unsigned char> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count)
    throw IngestError("'" + path + "': truncated pixel data");

  // File data is interleaved; store planar.
  Image img(channels, height, width);
  std::size_t i = 0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c) img.at(c, y, x) = raw[i++];
  return img;
}

void save_image(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << (img.channels == 3 ? "P6" : "P5") << "\n"
      << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raw;
  raw.reserve(img.data.size());
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c) {
        const float v = std::clamp(img.at(c, y, x), 0.f, 255.f);
        raw.push_back(static_cast<unsigned char>(std::lround(v)));
      }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

std::vector<double> channel_means(const Image& img) {
  std::vector<double> means(img.channels, 0.0);
  const std::size_t plane = static_cast<std::size_t>(img.height) * img.width;
  if (plane == 0) return means;
  for (int c = 0; c < img.channels; ++c) {
    double s = 0.0;
    const float* p = img.data.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) s += p[i];
    means[c] = s / static_cast<double>(plane);
  }
  return means;
}

double context_side(const BBox& box, double context) {
  const double pad = context * (box.w + box.h);
  return std::sqrt((box.w + pad) * (box.h + pad));
}

Image crop_patch(const Image& frame, double cx, double cy, double side, int out_size) {
  if (out_size < 1) throw ParamError("crop_patch: output size must be positive");
  if (!(side > 0.0)) throw ParamError("crop_patch: crop side must be positive");
  if (frame.channels < 1 || frame.height < 1 || frame.width < 1)
    throw ParamError("crop_patch: empty frame");

  const std::vector<double> fill = channel_means(frame);
  Image out(frame.channels, out_size, out_size);
  const double step = side / out_size;
  const double x0 = cx - side / 2.0;
  const double y0 = cy - side / 2.0;

  auto sample = [&](int c, int ix, int iy) -> double {
    if (ix < 0 || iy < 0 || ix >= frame.width || iy >= frame.height) return fill[c];
    return frame.at(c, iy, ix);
  };

  for (int oy = 0; oy < out_size; ++oy) {
    const double sy = y0 + (oy + 0.5) * step - 0.5;
    const int iy = static_cast<int>(std::floor(sy));
    const double fy = sy - iy;
    for (int ox = 0; ox < out_size; ++ox) {
      const double sx = x0 + (ox + 0.5) * step - 0.5;
      const int ix = static_cast<int>(std::floor(sx));
      const double fx = sx - ix;
      for (int c = 0; c < frame.channels; ++c) {
        const double v00 = sample(c, ix, iy);
        const double v01 = sample(c, ix + 1, iy);
        const double v10 = sample(c, ix, iy + 1);
        const double v11 = sample(c, ix + 1, iy + 1);
        const double v = (1 - fy) * ((1 - fx) * v00 + fx * v01) +
                         fy * ((1 - fx) * v10 + fx * v11);
        out.at(c, oy, ox) = static_cast<float>(v);
      }
    }
  }
  return out;
}

Image crop_resize(const Image& frame, const BBox& box, double context, int out_size,
                  int base_size, double side_mul) {
  if (base_size < 1) throw ParamError("crop_resize: base size must be positive");
  const double side =
      context_side(box, context) * (static_cast<double>(out_size) / base_size) * side_mul;
  return crop_patch(frame, box.cx, box.cy, side, out_size);
}

void draw_box(Image& img, const BBox& box, std::array<float, 3> rgb) {
  const int x0 = std::clamp(static_cast<int>(std::lround(box.left())), 0, img.width - 1);
  const int x1 = std::clamp(static_cast<int>(std::lround(box.right())), 0, img.width - 1);
  const int y0 = std::clamp(static_cast<int>(std::lround(box.top())), 0, img.height - 1);
  const int y1 = std::clamp(static_cast<int>(std::lround(box.bottom())), 0, img.height - 1);
  auto put = [&](int y, int x) {
    for (int c = 0; c < img.channels; ++c)
      img.at(c, y, x) = rgb[std::min(c, 2)];
  };
  for (int x = x0; x <= x1; ++x) {
    put(y0, x);
    put(y1, x);
  }
  for (int y = y0; y <= y1; ++y) {
    put(y, x0);
    put(y, x1);
  }
}

}  // namespace qsiam
