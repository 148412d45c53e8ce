#pragma once

#include <cmath>

namespace sumoss {

/// Ground coordinate in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double squared_distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(const Position& a, const Position& b) {
  return std::sqrt(squared_distance(a, b));
}

/// Axis-aligned rectangle; used for reporting and grid construction.
struct Rect {
  Position origin;
  double width = 0.0;
  double height = 0.0;

  Position center() const { return {origin.x + 0.5 * width, origin.y + 0.5 * height}; }
  bool contains(const Position& p) const {
    return p.x >= origin.x && p.x <= origin.x + width && p.y >= origin.y &&
           p.y <= origin.y + height;
  }
};

}  // namespace sumoss
