#include "core/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"

namespace fs = std::filesystem;

namespace qsiam {

namespace {

// Trailing integer in the stem, for numeric frame ordering ("frame12" -> 12).
long long trailing_number(const std::string& stem) {
  std::size_t end = stem.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
  if (end == stem.size()) return -1;
  const std::string digits = stem.substr(end);
  if (digits.size() > 17) return -1;  // avoid overflow on absurd names
  return std::stoll(digits);
}

std::vector<double> parse_numbers(const std::string& line) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(std::stod(cur));
    cur.clear();
  };
  for (char ch : line) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) flush();
    else cur.push_back(ch);
  }
  flush();
  return out;
}

}  // namespace

BBox parse_box_line(const std::string& line, const std::string& where) {
  std::vector<double> v;
  try {
    v = parse_numbers(line);
  } catch (const std::exception&) {
    throw IngestError(where + ": cannot parse box line '" + line + "'");
  }
  if (v.size() == 4) {
    if (!(v[2] > 0.0) || !(v[3] > 0.0))
      throw IngestError(where + ": box size must be positive");
    return BBox::from_topleft(v[0], v[1], v[2], v[3]);
  }
  if (v.size() == 8) {
    // Polygon corners -> axis-aligned bounding rectangle.
    double xmin = v[0], xmax = v[0], ymin = v[1], ymax = v[1];
    for (int i = 1; i < 4; ++i) {
      xmin = std::min(xmin, v[2 * i]);
      xmax = std::max(xmax, v[2 * i]);
      ymin = std::min(ymin, v[2 * i + 1]);
      ymax = std::max(ymax, v[2 * i + 1]);
    }
    if (!(xmax > xmin) || !(ymax > ymin))
      throw IngestError(where + ": degenerate polygon");
    return BBox::from_topleft(xmin, ymin, xmax - xmin, ymax - ymin);
  }
  throw IngestError(where + ": box line needs 4 or 8 numbers, got " +
                    std::to_string(v.size()));
}

Sequence load_sequence(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root))
    throw IngestError("sequence directory '" + dir + "' does not exist");

  Sequence seq;
  seq.name = root.filename().string();
  if (seq.name.empty()) seq.name = root.parent_path().filename().string();

  std::vector<std::pair<long long, std::string>> found;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext != ".ppm" && ext != ".pgm") continue;
    found.emplace_back(trailing_number(entry.path().stem().string()),
                       entry.path().string());
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  for (auto& [num, path] : found) seq.frames.push_back(std::move(path));
  if (seq.frames.empty())
    throw IngestError("sequence '" + dir + "' has no .ppm/.pgm frames");

  const fs::path gt_path = root / "groundtruth.txt";
  std::ifstream gt(gt_path);
  if (!gt) throw IngestError("sequence '" + dir + "' has no groundtruth.txt");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(gt, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    seq.groundtruth.push_back(
        parse_box_line(line, gt_path.string() + ":" + std::to_string(line_no)));
  }
  if (seq.groundtruth.size() != seq.frames.size())
    throw IngestError("sequence '" + dir + "': " + std::to_string(seq.frames.size()) +
                      " frames but " + std::to_string(seq.groundtruth.size()) +
                      " ground truth lines");
  return seq;
}

std::vector<Sequence> list_dataset(const std::string& root) {
  if (!fs::is_directory(root))
    throw IngestError("dataset directory '" + root + "' does not exist");
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) dirs.push_back(entry.path().string());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty())
    throw IngestError("dataset directory '" + root + "' has no sequences");
  std::vector<Sequence> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(load_sequence(d));
  return out;
}

void write_results(const std::string& path, const std::vector<BBox>& boxes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  char buf[160];
  for (const BBox& b : boxes) {
    std::snprintf(buf, sizeof(buf), "%.4f,%.4f,%.4f,%.4f\n", b.left(), b.top(), b.w, b.h);
    out << buf;
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

std::vector<BBox> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file '" + path + "'");
  std::vector<BBox> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(parse_box_line(line, path + ":" + std::to_string(line_no)));
  }
  return out;
}

}  // namespace qsiam
