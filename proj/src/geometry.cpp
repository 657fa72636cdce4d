#include "emsnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emsnet/errors.hpp"

namespace emsnet {

namespace {

constexpr double kAreaEps = 1e-12;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Proper segment intersection test (shared endpoints excluded by the caller).
bool segments_cross(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

Ring reversed(Ring ring) {
  std::reverse(ring.begin(), ring.end());
  return ring;
}

void drop_duplicate_vertices(Ring& ring) {
  Ring out;
  out.reserve(ring.size());
  for (const Point& p : ring) {
    if (out.empty() || !(out.back() == p)) {
      out.push_back(p);
    }
  }
  while (out.size() > 1 && out.front() == out.back()) {
    out.pop_back();
  }
  ring = std::move(out);
}

}  // namespace

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double signed_area(const Ring& ring) {
  if (ring.size() < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    twice += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
  }
  return 0.5 * twice;
}

Bounds ring_bounds(const Ring& ring) { return bounds_of_points(ring); }

Bounds bounds_of_points(const std::vector<Point>& points) {
  Bounds b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const Point& p : points) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

bool point_in_ring(const Point& p, const Ring& ring) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  if (len2 == 0.0) {
    return distance(p, a);
  }
  const double t = std::clamp(((p.x - a.x) * abx + (p.y - a.y) * aby) / len2, 0.0, 1.0);
  return distance(p, {a.x + t * abx, a.y + t * aby});
}

bool on_polygon_boundary(const Point& p, const Polygon& polygon, double tolerance) {
  auto near_ring = [&](const Ring& ring) {
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      if (point_segment_distance(p, ring[j], ring[i]) <= tolerance) {
        return true;
      }
    }
    return false;
  };
  if (near_ring(polygon.shell)) {
    return true;
  }
  for (const Ring& hole : polygon.holes) {
    if (near_ring(hole)) {
      return true;
    }
  }
  return false;
}

void Polygon::normalize() {
  if (signed_area(shell) < 0.0) {
    shell = reversed(std::move(shell));
  }
  for (Ring& hole : holes) {
    if (signed_area(hole) > 0.0) {
      hole = reversed(std::move(hole));
    }
  }
}

double Polygon::area() const {
  double total = signed_area(shell);
  for (const Ring& hole : holes) {
    total += signed_area(hole);  // holes are clockwise, so this subtracts
  }
  return total;
}

Bounds Polygon::bounds() const { return ring_bounds(shell); }

bool Polygon::contains(const Point& p) const {
  if (!point_in_ring(p, shell)) {
    return false;
  }
  for (const Ring& hole : holes) {
    if (point_in_ring(p, hole)) {
      return false;
    }
  }
  return true;
}

Ring clip_half_plane(const Ring& subject, const Point& a, const Point& b) {
  Ring out;
  if (subject.empty()) {
    return out;
  }
  out.reserve(subject.size() + 2);
  const std::size_t n = subject.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& cur = subject[i];
    const Point& nxt = subject[(i + 1) % n];
    const double side_cur = cross(a, b, cur);
    const double side_nxt = cross(a, b, nxt);
    if (side_cur >= 0.0) {
      out.push_back(cur);
    }
    if ((side_cur > 0.0 && side_nxt < 0.0) || (side_cur < 0.0 && side_nxt > 0.0)) {
      const double t = side_cur / (side_cur - side_nxt);
      out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  return out;
}

Ring clip_to_convex(const Ring& subject, const Ring& convex_clip) {
  if (convex_clip.size() < 3) {
    return {};
  }
  Ring out = subject;
  const std::size_t n = convex_clip.size();
  for (std::size_t i = 0; i < n && !out.empty(); ++i) {
    const Point& a = convex_clip[i];
    const Point& b = convex_clip[(i + 1) % n];
    if (a == b) {
      continue;
    }
    out = clip_half_plane(out, a, b);
  }
  return out;
}

double clipped_signed_area(const Ring& subject, const Ring& convex_clip) {
  return signed_area(clip_to_convex(subject, convex_clip));
}

double convex_overlap_area(const Polygon& polygon, const Ring& convex_clip) {
  double total = clipped_signed_area(polygon.shell, convex_clip);
  for (const Ring& hole : polygon.holes) {
    total += clipped_signed_area(hole, convex_clip);
  }
  return total;
}

double masked_overlap_area(const Polygon& polygon, const Ring& convex_ring, const Polygon& mask) {
  if (convex_ring.size() < 3) {
    return 0.0;
  }
  const Bounds pb = polygon.bounds();
  const Point anchor{0.5 * (pb.min_x + pb.max_x), 0.5 * (pb.min_y + pb.max_y)};

  // 1_polygon = sum of signed indicator triangles fanned from the anchor,
  // taken over every ring edge. Holes are clockwise, so their triangles
  // carry the opposite sign automatically.
  auto accumulate_ring = [&](const Ring& ring, double& acc) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = ring[i];
      const Point& b = ring[(i + 1) % n];
      const double tri_area = 0.5 * cross(anchor, a, b);
      if (std::abs(tri_area) < kAreaEps) {
        continue;
      }
      Ring tri = tri_area > 0.0 ? Ring{anchor, a, b} : Ring{anchor, b, a};
      Ring piece = clip_to_convex(tri, convex_ring);
      drop_duplicate_vertices(piece);
      if (piece.size() < 3) {
        continue;
      }
      double masked = clipped_signed_area(mask.shell, piece);
      for (const Ring& hole : mask.holes) {
        masked += clipped_signed_area(hole, piece);
      }
      acc += (tri_area > 0.0 ? masked : -masked);
    }
  };

  double total = 0.0;
  accumulate_ring(polygon.shell, total);
  for (const Ring& hole : polygon.holes) {
    accumulate_ring(hole, total);
  }
  return total;
}

Ring convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::size_t n = points.size();
  if (n < 3) {
    return {};
  }
  std::vector<Point> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) {
      --k;
    }
    hull[k++] = points[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) {
      --k;
    }
    hull[k++] = points[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  if (hull.size() < 3) {
    return {};
  }
  return hull;
}

Ring offset_convex(const Ring& ring, double margin) {
  const std::size_t n = ring.size();
  if (n < 3 || margin <= 0.0) {
    return ring;
  }
  // Shift each edge outward by `margin`, then intersect adjacent edge lines.
  struct Line {
    Point p;  // point on the shifted line
    Point d;  // direction
  };
  std::vector<Line> lines(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    const double len = distance(a, b);
    // Outward normal of a counter-clockwise edge points right of a->b.
    const Point normal{(b.y - a.y) / len, -(b.x - a.x) / len};
    lines[i] = {{a.x + margin * normal.x, a.y + margin * normal.y}, {b.x - a.x, b.y - a.y}};
  }
  Ring out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Line& l1 = lines[(i + n - 1) % n];
    const Line& l2 = lines[i];
    const double denom = l1.d.x * l2.d.y - l1.d.y * l2.d.x;
    if (std::abs(denom) < 1e-30) {
      out[i] = l2.p;  // nearly parallel edges; fall back to the shifted vertex
      continue;
    }
    const double t = ((l2.p.x - l1.p.x) * l2.d.y - (l2.p.y - l1.p.y) * l2.d.x) / denom;
    out[i] = {l1.p.x + t * l1.d.x, l1.p.y + t * l1.d.y};
  }
  return out;
}

void validate_polygon(const Polygon& polygon, const std::string& label) {
  auto check_ring = [&](const Ring& ring, const char* what) {
    if (ring.size() < 3) {
      throw ValidationError(label + ": " + what + " has fewer than 3 vertices");
    }
    for (const Point& p : ring) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw ValidationError(label + ": " + what + " has non-finite coordinates");
      }
    }
    if (std::abs(signed_area(ring)) < kAreaEps) {
      throw ValidationError(label + ": " + what + " has zero area");
    }
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& p1 = ring[i];
      const Point& p2 = ring[(i + 1) % n];
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i || (j + 1) % n == i || (i + 1) % n == j) {
          continue;  // adjacent edges share a vertex
        }
        const Point& q1 = ring[j];
        const Point& q2 = ring[(j + 1) % n];
        if (segments_cross(p1, p2, q1, q2)) {
          throw ValidationError(label + ": " + what + " is self-intersecting");
        }
      }
    }
  };

  check_ring(polygon.shell, "shell ring");
  for (std::size_t h = 0; h < polygon.holes.size(); ++h) {
    const std::string what = "hole ring " + std::to_string(h);
    check_ring(polygon.holes[h], what.c_str());
    if (!point_in_ring(polygon.holes[h].front(), polygon.shell)) {
      throw ValidationError(label + ": " + what + " lies outside the shell");
    }
  }
}

}  // namespace emsnet
