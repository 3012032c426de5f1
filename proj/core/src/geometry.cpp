#include "haar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace haar {

Affine2 Affine2::inverse() const {
  const double d = det();
  if (d == 0.0) throw std::invalid_argument("Affine2: singular map");
  Affine2 inv;
  inv.a11 = a22 / d;
  inv.a12 = -a12 / d;
  inv.a21 = -a21 / d;
  inv.a22 = a11 / d;
  inv.t = {-(inv.a11 * t.x + inv.a12 * t.y), -(inv.a21 * t.x + inv.a22 * t.y)};
  return inv;
}

Affine2 Affine2::compose(const Affine2& o) const {
  Affine2 r;
  r.a11 = a11 * o.a11 + a12 * o.a21;
  r.a12 = a11 * o.a12 + a12 * o.a22;
  r.a21 = a21 * o.a11 + a22 * o.a21;
  r.a22 = a21 * o.a12 + a22 * o.a22;
  r.t = (*this)(o.t);
  return r;
}

Affine2 Affine2::parallelogram(double b, double phi) {
  return {1.0, b * std::cos(phi), 0.0, b * std::sin(phi), {0.0, 0.0}};
}

Affine2 Affine2::triangle_shear(double a, double b) {
  return {1.0, a, 0.0, b, {0.0, 0.0}};
}

namespace {

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

double signed_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % v.size()];
    s += cross(a, b);
  }
  return 0.5 * s;
}

// Proper crossing of open segments (shared endpoints excluded by the caller).
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

Polygon::Polygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
  if (verts_.size() < 3) throw std::invalid_argument("Polygon: needs at least 3 vertices");
  for (Vec2 v : verts_) {
    if (!finite(v)) throw std::invalid_argument("Polygon: non-finite vertex");
  }
  double s = signed_area(verts_);
  if (s < 0.0) {
    std::reverse(verts_.begin(), verts_.end());
    s = -s;
  }
  area_ = s;
  // simplicity: no proper crossing between non-adjacent edges
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_cross(verts_[i], verts_[(i + 1) % n], verts_[j], verts_[(j + 1) % n]))
        throw std::invalid_argument("Polygon: self-intersecting vertex list");
    }
  }
}

Polygon Polygon::box(Vec2 lo, Vec2 hi) {
  return Polygon({{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}});
}

Polygon Polygon::triangle(Vec2 a, Vec2 b, Vec2 c) { return Polygon({a, b, c}); }

Box2 Polygon::bounding_box() const {
  Box2 b{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
         {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
  for (Vec2 v : verts_) {
    b.lo.x = std::min(b.lo.x, v.x);
    b.lo.y = std::min(b.lo.y, v.y);
    b.hi.x = std::max(b.hi.x, v.x);
    b.hi.y = std::max(b.hi.y, v.y);
  }
  return b;
}

bool Polygon::contains(Vec2 p) const {
  // crossing number; points on the boundary count as inside
  bool inside = false;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = verts_[j];
    const Vec2 b = verts_[i];
    const double d = cross(b - a, p - a);
    if (d == 0.0 && dot(p - a, p - b) <= 0.0) return true;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double xc = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

Polygon Polygon::transformed(const Affine2& map) const {
  std::vector<Vec2> out;
  out.reserve(verts_.size());
  for (Vec2 v : verts_) out.push_back(map(v));
  return Polygon(std::move(out));
}

std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, Vec2 n, double c) {
  std::vector<Vec2> out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 2);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % m];
    const double da = dot(n, a) - c;
    const double db = dot(n, b) - c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double s = da / (da - db);
      out.push_back(a + s * (b - a));
    }
  }
  return out;
}

std::vector<Vec2> clip_to_box(const std::vector<Vec2>& poly, Vec2 lo, Vec2 hi) {
  std::vector<Vec2> p = clip_half_plane(poly, {1.0, 0.0}, hi.x);
  p = clip_half_plane(p, {-1.0, 0.0}, -lo.x);
  p = clip_half_plane(p, {0.0, 1.0}, hi.y);
  p = clip_half_plane(p, {0.0, -1.0}, -lo.y);
  return p;
}

double polygon_area(const std::vector<Vec2>& poly) {
  if (poly.size() < 3) return 0.0;
  return std::abs(signed_area(poly));
}

double convex_intersection_area(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  std::vector<Vec2> p = a;
  const std::size_t m = b.size();
  for (std::size_t i = 0; i < m && !p.empty(); ++i) {
    const Vec2 u = b[i];
    const Vec2 v = b[(i + 1) % m];
    // inside of CCW polygon b is to the left of u->v
    const Vec2 n{v.y - u.y, -(v.x - u.x)};
    p = clip_half_plane(p, n, dot(n, u));
  }
  return polygon_area(p);
}

std::vector<std::array<Vec2, 3>> triangulate(const Polygon& poly) {
  std::vector<Vec2> v = poly.vertices();
  std::vector<std::array<Vec2, 3>> tris;
  tris.reserve(v.size() - 2);
  auto is_ear = [&](std::size_t i) {
    const std::size_t n = v.size();
    const Vec2 a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
    if (cross(b - a, c - b) <= 0.0) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == (i + n - 1) % n || j == i || j == (i + 1) % n) continue;
      const Vec2 p = v[j];
      const bool in = cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 &&
                      cross(a - c, p - c) >= 0.0;
      if (in) return false;
    }
    return true;
  };
  std::size_t guard = 0;
  while (v.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (is_ear(i)) {
        const std::size_t n = v.size();
        tris.push_back({v[(i + n - 1) % n], v[i], v[(i + 1) % n]});
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
    }
    if (!clipped) {
      if (++guard > 2) throw std::runtime_error("triangulate: no ear found (degenerate polygon)");
      // drop exactly collinear vertices and retry
      std::vector<Vec2> w;
      const std::size_t n = v.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
        if (std::abs(cross(b - a, c - b)) > 1e-15) w.push_back(b);
      }
      if (w.size() < 3) break;
      v = std::move(w);
    }
  }
  if (v.size() == 3) tris.push_back({v[0], v[1], v[2]});
  return tris;
}

}  // namespace haar
