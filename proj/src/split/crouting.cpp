#include <algorithm>
#include <cmath>

#include "bcamo/split.hpp"

namespace bcamo {

CroutingMetrics crouting_metrics(const SplitView& v, double bbox_frac) {
  if (!(bbox_frac > 0.0)) throw std::invalid_argument("bbox_frac must be positive");
  CroutingMetrics m;
  m.vpins = 2 * v.segments.size();
  if (v.segments.empty()) return m;

  const double pitch = kCellPitch;
  const double half = bbox_frac * (v.placement.width + v.placement.height) * pitch / 2.0;
  // Layout extent in tracks, including the pin columns on both sides.
  const double x_lo = -pitch;
  const double x_hi = (v.placement.width + 1) * pitch;
  const double y_lo = 0.0;
  const double y_hi = std::max(1, v.placement.height) * pitch;
  auto clipped_area = [&](Point c) {
    const double w = std::min(x_hi, c.x + half) - std::max(x_lo, c.x - half);
    const double h = std::min(y_hi, c.y + half) - std::max(y_lo, c.y - half);
    return std::max(1.0, w * h / (pitch * pitch));
  };
  auto inside = [&](Point c, Point q) { return std::abs(q.x - c.x) <= half && std::abs(q.y - c.y) <= half; };

  std::vector<Point> drivers;
  std::vector<Point> sinks;
  for (const Segment& s : v.segments) {
    drivers.push_back(s.driver);
    sinks.push_back(s.sink);
  }
  auto by_x = [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; };
  std::sort(drivers.begin(), drivers.end(), by_x);
  std::sort(sinks.begin(), sinks.end(), by_x);

  double total = 0.0;
  double density = 0.0;
  auto count = [&](const std::vector<Point>& from, const std::vector<Point>& to) {
    for (Point c : from) {
      const auto lo = std::lower_bound(to.begin(), to.end(), Point{static_cast<int>(std::ceil(c.x - half)), INT32_MIN}, by_x);
      std::size_t k = 0;
      for (auto it = lo; it != to.end() && it->x <= c.x + half; ++it) k += inside(c, *it) ? 1 : 0;
      total += static_cast<double>(k);
      density += static_cast<double>(k) / clipped_area(c);
    }
  };
  count(drivers, sinks);
  count(sinks, drivers);
  m.e_ls = total / static_cast<double>(m.vpins);
  m.fom = density / static_cast<double>(m.vpins);
  return m;
}

}  // namespace bcamo
