#include "testutil.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <sys/wait.h>

#include "core/sequence.hpp"

namespace qsiam::test {

namespace {
std::atomic<unsigned> g_dir_counter{0};
}

TempDir::TempDir() {
  const auto base = std::filesystem::temp_directory_path();
  path = base / ("qsiam_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(g_dir_counter++));
  std::filesystem::create_directories(path);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path, ec);
}

AccTensor conv_oracle(const QTensor& input, const QTensor& weights) {
  const int C = input.dims[0], H = input.dims[1], W = input.dims[2];
  const int F = weights.dims[0];
  AccTensor out({F, H, W});
  for (int f = 0; f < F; ++f)
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        std::int32_t acc = 0;
        for (int c = 0; c < C; ++c)
          for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
              const int sy = y + ky - 1, sx = x + kx - 1;
              if (sy < 0 || sx < 0 || sy >= H || sx >= W) continue;
              const std::int8_t wv =
                  weights.data[((static_cast<std::size_t>(f) * C + c) * 3 + ky) * 3 + kx];
              acc += static_cast<std::int32_t>(input.at3(c, sy, sx)) * wv;
            }
        out.at3(f, y, x) = acc;
      }
  return out;
}

CorrMap correlate_oracle(const QTensor& roi, const QTensor& exemplar) {
  const int C = roi.dims[0];
  const int Ho = roi.dims[1] - exemplar.dims[1] + 1;
  const int Wo = roi.dims[2] - exemplar.dims[2] + 1;
  CorrMap out({Ho, Wo});
  for (int oy = 0; oy < Ho; ++oy)
    for (int ox = 0; ox < Wo; ++ox) {
      std::int64_t acc = 0;
      for (int c = 0; c < C; ++c)
        for (int y = 0; y < exemplar.dims[1]; ++y)
          for (int x = 0; x < exemplar.dims[2]; ++x)
            acc += static_cast<std::int64_t>(roi.at3(c, oy + y, ox + x)) *
                   exemplar.at3(c, y, x);
      out.at2(oy, ox) = acc;
    }
  return out;
}

QTensor random_qtensor(Rng& rng, std::vector<int> dims, int bits, double scale) {
  QTensor q(std::move(dims), bits, scale);
  for (auto& v : q.data)
    v = static_cast<std::int8_t>(rng.uniform_int(q.qmin(), q.qmax()));
  return q;
}

Image synth_frame(int height, int width, double cx, double cy, double side) {
  Image img(3, height, width);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) img.at(c, y, x) = 100.f;
  const int x0 = static_cast<int>(cx - side / 2), x1 = static_cast<int>(cx + side / 2);
  const int y0 = static_cast<int>(cy - side / 2), y1 = static_cast<int>(cy + side / 2);
  for (int y = std::max(0, y0); y < std::min(height, y1); ++y)
    for (int x = std::max(0, x0); x < std::min(width, x1); ++x) {
      // Bright square with a dark cross through the middle: distinctive in
      // both axes and free of periodic patterns that alias under resampling.
      const double lx = x - x0 - side / 2, ly = y - y0 - side / 2;
      const bool cross = std::abs(lx) < side / 10 || std::abs(ly) < side / 10;
      const float v = cross ? 45.f : 235.f;
      img.at(0, y, x) = v;
      img.at(1, y, x) = v;
      img.at(2, y, x) = cross ? 70.f : 220.f;
    }
  return img;
}

BBox synth_box(const SynthSpec& spec, int frame) {
  return {spec.start_x + spec.dx * frame, spec.start_y + spec.dy * frame, spec.side,
          spec.side};
}

std::vector<Image> synth_frames(const SynthSpec& spec) {
  std::vector<Image> frames;
  for (int i = 0; i < spec.frames; ++i) {
    const BBox b = synth_box(spec, i);
    frames.push_back(synth_frame(spec.height, spec.width, b.cx, b.cy, spec.side));
  }
  return frames;
}

std::vector<BBox> write_synth_sequence(const std::filesystem::path& dir,
                                       const SynthSpec& spec) {
  std::filesystem::create_directories(dir);
  std::vector<BBox> boxes;
  std::ofstream gt(dir / "groundtruth.txt", std::ios::binary);
  char buf[128];
  for (int i = 0; i < spec.frames; ++i) {
    const BBox b = synth_box(spec, i);
    boxes.push_back(b);
    const Image frame = synth_frame(spec.height, spec.width, b.cx, b.cy, spec.side);
    std::snprintf(buf, sizeof(buf), "%04d.ppm", i);
    save_image(frame, (dir / buf).string());
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f,%.2f,%.2f\n", b.left(), b.top(), b.w,
                  b.h);
    gt << buf;
  }
  return boxes;
}

bool have_cli() { return std::getenv("QSIAM_CLI") != nullptr; }

CliResult run_cli(const std::string& args) {
  const char* cli = std::getenv("QSIAM_CLI");
  if (!cli) throw std::runtime_error("QSIAM_CLI is not set");
  const std::string cmd = "\"" + std::string(cli) + "\" " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot start CLI");
  CliResult result;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

}  // namespace qsiam::test
