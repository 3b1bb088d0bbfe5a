#pragma once

#include <string>
#include <vector>

#include "core/bbox.hpp"

namespace qsiam {

// One annotated clip: numerically ordered frame files plus one ground truth
// box per frame (top-left x,y,w,h or an 8[4]-number polygon per line).
struct Sequence {
  std::string name;
  std::vector<std::string> frames;  // absolute or dir-relative paths
  std::vector<BBox> groundtruth;
};

Sequence load_sequence(const std::string& dir);

// Every direct subdirectory of `root` that holds a sequence, sorted by name.
std::vector<Sequence> list_dataset(const std::string& root);

// Fixed-format "x,y,w,h" per line (top-left), four decimals. Byte-stable.
void write_results(const std::string& path, const std::vector<BBox>& boxes);
std::vector<BBox> read_results(const std::string& path);

BBox parse_box_line(const std::string& line, const std::string& where);

}  // namespace qsiam
