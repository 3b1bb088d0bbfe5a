#pragma once

namespace qsiam {

// Axis-aligned box, center-based. File formats use top-left x,y,w,h; the
// conversion happens at the I/O boundary.
struct BBox {
  double cx = 0, cy = 0, w = 0, h = 0;

  static BBox from_topleft(double x, double y, double w, double h) {
    return {x + w / 2.0, y + h / 2.0, w, h};
  }
  double left() const { return cx - w / 2.0; }
  double top() const { return cy - h / 2.0; }
  double right() const { return cx + w / 2.0; }
  double bottom() const { return cy + h / 2.0; }
};

}  // namespace qsiam
