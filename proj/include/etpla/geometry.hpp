#pragma once

#include <optional>
#include <vector>

namespace etpla {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

Point rotate_deg(const Point& p, double degrees);

double distance(const Point& a, const Point& b);
double arc_length(const std::vector<Point>& polyline);

/// Intersection point of two closed segments, if any; collinear overlaps
/// report the midpoint of the shared stretch. Endpoint touches count.
std::optional<Point> segment_intersection(const Point& a1, const Point& a2, const Point& b1,
                                          const Point& b2);

double point_segment_distance(const Point& p, const Point& a, const Point& b);
double segment_distance(const Point& a1, const Point& a2, const Point& b1, const Point& b2);

/// All pairwise segment intersections of two polylines, deduplicated
/// within `merge_tol`.
std::vector<Point> polyline_intersections(const std::vector<Point>& a,
                                          const std::vector<Point>& b,
                                          double merge_tol = 1e-6);

/// Distance from p to the nearest point of the polyline.
double polyline_distance(const std::vector<Point>& polyline, const Point& p);

/// Arc-length position of the closest point on the polyline.
double arc_position(const std::vector<Point>& polyline, const Point& p);

/// Oriented rectangle (origin at lower-left corner before rotation).
struct OrientedRect {
  Point origin;
  double width = 0.0;
  double height = 0.0;
  double rotation_deg = 0.0;
};

std::vector<Point> rect_corners(const OrientedRect& rect);

/// Strict interior overlap (touching edges do not count).
bool rects_overlap(const OrientedRect& a, const OrientedRect& b);

}  // namespace etpla
