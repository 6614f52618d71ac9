#include "etpla/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace etpla {

namespace {

constexpr double kEps = 1e-9;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

Point rotate_deg(const Point& p, double degrees) {
  const double rad = degrees * M_PI / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  return {p.x * c - p.y * s, p.x * s + p.y * c};
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double arc_length(const std::vector<Point>& polyline) {
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) total += distance(polyline[i - 1], polyline[i]);
  return total;
}

std::optional<Point> segment_intersection(const Point& a1, const Point& a2, const Point& b1,
                                          const Point& b2) {
  const double d1 = cross(b1, b2, a1);
  const double d2 = cross(b1, b2, a2);
  const double d3 = cross(a1, a2, b1);
  const double d4 = cross(a1, a2, b2);

  if (std::abs(d1) < kEps && std::abs(d2) < kEps && std::abs(d3) < kEps && std::abs(d4) < kEps) {
    // collinear: project onto the dominant axis and intersect the intervals
    const bool use_x = std::abs(a2.x - a1.x) + std::abs(b2.x - b1.x) >
                       std::abs(a2.y - a1.y) + std::abs(b2.y - b1.y);
    auto key = [&](const Point& p) { return use_x ? p.x : p.y; };
    const double lo = std::max(std::min(key(a1), key(a2)), std::min(key(b1), key(b2)));
    const double hi = std::min(std::max(key(a1), key(a2)), std::max(key(b1), key(b2)));
    if (lo > hi + kEps) return std::nullopt;
    const double mid = (lo + hi) / 2.0;
    // reconstruct the midpoint along segment a
    const double len = key(a2) - key(a1);
    const double t = std::abs(len) < kEps ? 0.0 : (mid - key(a1)) / len;
    return Point{a1.x + t * (a2.x - a1.x), a1.y + t * (a2.y - a1.y)};
  }

  if (((d1 > kEps && d2 > kEps) || (d1 < -kEps && d2 < -kEps)) ||
      ((d3 > kEps && d4 > kEps) || (d3 < -kEps && d4 < -kEps))) {
    return std::nullopt;
  }

  const double denom = (a2.x - a1.x) * (b2.y - b1.y) - (a2.y - a1.y) * (b2.x - b1.x);
  if (std::abs(denom) < kEps) return std::nullopt;  // parallel, not collinear
  const double t =
      ((b1.x - a1.x) * (b2.y - b1.y) - (b1.y - a1.y) * (b2.x - b1.x)) / denom;
  if (t < -kEps || t > 1 + kEps) return std::nullopt;
  const double u =
      ((b1.x - a1.x) * (a2.y - a1.y) - (b1.y - a1.y) * (a2.x - a1.x)) / denom;
  if (u < -kEps || u > 1 + kEps) return std::nullopt;
  return Point{a1.x + t * (a2.x - a1.x), a1.y + t * (a2.y - a1.y)};
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 < kEps * kEps ? 0.0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, {a.x + t * dx, a.y + t * dy});
}

double segment_distance(const Point& a1, const Point& a2, const Point& b1, const Point& b2) {
  if (segment_intersection(a1, a2, b1, b2)) return 0.0;
  return std::min(std::min(point_segment_distance(a1, b1, b2), point_segment_distance(a2, b1, b2)),
                  std::min(point_segment_distance(b1, a1, a2), point_segment_distance(b2, a1, a2)));
}

std::vector<Point> polyline_intersections(const std::vector<Point>& a, const std::vector<Point>& b,
                                          double merge_tol) {
  std::vector<Point> hits;
  for (std::size_t i = 1; i < a.size(); ++i) {
    for (std::size_t j = 1; j < b.size(); ++j) {
      const auto hit = segment_intersection(a[i - 1], a[i], b[j - 1], b[j]);
      if (!hit) continue;
      bool duplicate = false;
      for (const auto& seen : hits) {
        if (distance(seen, *hit) < merge_tol) duplicate = true;
      }
      if (!duplicate) hits.push_back(*hit);
    }
  }
  return hits;
}

double polyline_distance(const std::vector<Point>& polyline, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    best = std::min(best, point_segment_distance(p, polyline[i - 1], polyline[i]));
  }
  if (polyline.size() == 1) best = distance(polyline[0], p);
  return best;
}

double arc_position(const std::vector<Point>& polyline, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  double best_pos = 0.0;
  double walked = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const Point& a = polyline[i - 1];
    const Point& b = polyline[i];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 < kEps * kEps ? 0.0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const Point closest{a.x + t * dx, a.y + t * dy};
    const double d = distance(p, closest);
    if (d < best) {
      best = d;
      best_pos = walked + t * std::sqrt(len2);
    }
    walked += std::sqrt(len2);
  }
  return best_pos;
}

std::vector<Point> rect_corners(const OrientedRect& rect) {
  const std::vector<Point> local = {
      {0, 0}, {rect.width, 0}, {rect.width, rect.height}, {0, rect.height}};
  std::vector<Point> world;
  for (const auto& p : local) {
    const Point r = rotate_deg(p, rect.rotation_deg);
    world.push_back({rect.origin.x + r.x, rect.origin.y + r.y});
  }
  return world;
}

bool rects_overlap(const OrientedRect& a, const OrientedRect& b) {
  const auto ca = rect_corners(a);
  const auto cb = rect_corners(b);
  // separating axis over both rectangles' edge normals
  auto axes = [](const std::vector<Point>& corners) {
    std::vector<Point> out;
    for (int i = 0; i < 2; ++i) {
      const Point edge{corners[i + 1].x - corners[i].x, corners[i + 1].y - corners[i].y};
      out.push_back({-edge.y, edge.x});
    }
    return out;
  };
  std::vector<Point> all_axes = axes(ca);
  for (const auto& axis : axes(cb)) all_axes.push_back(axis);
  for (const auto& axis : all_axes) {
    double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
    for (const auto& p : ca) {
      const double d = p.x * axis.x + p.y * axis.y;
      amin = std::min(amin, d);
      amax = std::max(amax, d);
    }
    for (const auto& p : cb) {
      const double d = p.x * axis.x + p.y * axis.y;
      bmin = std::min(bmin, d);
      bmax = std::max(bmax, d);
    }
    if (amax <= bmin + kEps || bmax <= amin + kEps) return false;
  }
  return true;
}

}  // namespace etpla
