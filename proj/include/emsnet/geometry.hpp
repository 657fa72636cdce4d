#pragma once

#include <string>
#include <vector>

namespace emsnet {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

// Axis-aligned bounding box.
struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool intersects(const Bounds& other) const {
    return min_x <= other.max_x && other.min_x <= max_x && min_y <= other.max_y &&
           other.min_y <= max_y;
  }

  Bounds expanded(double margin) const {
    return {min_x - margin, min_y - margin, max_x + margin, max_y + margin};
  }

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

// A ring is an open vertex loop: the closing edge last->first is implicit.
// Orientation carries sign: counter-clockwise rings have positive area.
using Ring = std::vector<Point>;

// Simple polygon with optional holes. After normalize(), the shell is
// counter-clockwise and holes are clockwise, so the signed ring areas sum to
// the enclosed area directly.
struct Polygon {
  Ring shell;
  std::vector<Ring> holes;

  void normalize();
  double area() const;
  Bounds bounds() const;
  bool contains(const Point& p) const;  // even-odd rule over shell and holes
};

double distance(const Point& a, const Point& b);
double squared_distance(const Point& a, const Point& b);

double signed_area(const Ring& ring);
Bounds ring_bounds(const Ring& ring);
Bounds bounds_of_points(const std::vector<Point>& points);

// Even-odd point-in-ring test; points on the edge fall on whichever side the
// crossing arithmetic puts them.
bool point_in_ring(const Point& p, const Ring& ring);

double point_segment_distance(const Point& p, const Point& a, const Point& b);

// True when p lies within `tolerance` of any ring edge. Used to treat the
// study region as closed: sites on the boundary belong to it.
bool on_polygon_boundary(const Point& p, const Polygon& polygon, double tolerance);

// Clips `subject` to the half-plane left of the directed line a->b
// (Sutherland-Hodgman step). Works for arbitrary subjects; non-convex
// subjects may come back with degenerate zero-area bridges, which is
// harmless for area computations.
Ring clip_half_plane(const Ring& subject, const Point& a, const Point& b);

// Clips `subject` against a convex counter-clockwise ring. Zero-length clip
// edges are skipped.
Ring clip_to_convex(const Ring& subject, const Ring& convex_clip);

// Area of subject ∩ convex_clip, signed by the subject's orientation.
double clipped_signed_area(const Ring& subject, const Ring& convex_clip);

// |polygon ∩ convex_clip| for a normalized polygon (shell minus holes).
double convex_overlap_area(const Polygon& polygon, const Ring& convex_clip);

// |polygon ∩ convex_ring ∩ mask| for a normalized polygon and mask. The
// polygon is decomposed into signed triangles fanned from its bounds center;
// each triangle is intersected with the convex ring (exact convex clip) and
// the result is clipped against the mask rings. Exact for areas up to
// floating-point rounding, for arbitrary simple polygons.
double masked_overlap_area(const Polygon& polygon, const Ring& convex_ring, const Polygon& mask);

// Strictly convex hull (collinear points dropped), counter-clockwise.
// Fewer than 3 non-collinear points yield a degenerate (empty) hull.
Ring convex_hull(std::vector<Point> points);

// Outward miter offset of a convex counter-clockwise ring.
Ring offset_convex(const Ring& ring, double margin);

// Validates ring/hole structure: closure, finite coordinates, nonzero area,
// no self-intersections, holes inside the shell. Throws ValidationError
// mentioning `label` on failure.
void validate_polygon(const Polygon& polygon, const std::string& label);

}  // namespace emsnet
