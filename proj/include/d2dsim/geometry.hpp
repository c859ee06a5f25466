#pragma once

#include <cmath>
#include <utility>

namespace d2dsim {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance_2d(const Vec3& a, const Vec3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double distance_3d(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

// Axis-aligned rectangle on the ground plane.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  bool overlaps(const Rect& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
  Rect translated(double dx, double dy) const { return {x0 + dx, y0 + dy, x1 + dx, y1 + dy}; }
};

// True if the open segment a->b passes through the box footprint x [0, top].
// Slab test; touching a face without entering the interior does not count.
inline bool segment_hits_box(const Vec3& a, const Vec3& b, const Rect& footprint, double top) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double lo[3] = {footprint.x0, footprint.y0, 0.0};
  const double hi[3] = {footprint.x1, footprint.y1, top};
  const double p[3] = {a.x, a.y, a.z};
  const double d[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (p[k] <= lo[k] || p[k] >= hi[k]) return false;
      continue;
    }
    double ta = (lo[k] - p[k]) / d[k];
    double tb = (hi[k] - p[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    if (ta > t0) t0 = ta;
    if (tb < t1) t1 = tb;
    if (t0 >= t1) return false;
  }
  return true;
}

}  // namespace d2dsim
