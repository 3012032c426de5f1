#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace haar {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
};

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Affine map z -> L z + t with L = [[a11 a12],[a21 a22]].
struct Affine2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
  Vec2 t{};

  Vec2 operator()(Vec2 p) const {
    return {a11 * p.x + a12 * p.y + t.x, a21 * p.x + a22 * p.y + t.y};
  }
  double det() const { return a11 * a22 - a12 * a21; }
  Affine2 inverse() const;
  /// this ∘ other (apply `other` first).
  Affine2 compose(const Affine2& other) const;

  static Affine2 identity() { return {}; }
  static Affine2 scale_shift(double s, Vec2 shift) { return {s, 0.0, 0.0, s, shift}; }
  /// Shear-scale used by the parallelogram lattices: (u,v) -> (u + v b cos(phi), v b sin(phi)).
  static Affine2 parallelogram(double b, double phi);
  /// Triangle lattice transport (u,v) -> (u + a v, b v).
  static Affine2 triangle_shear(double a, double b);
};

struct Box2 {
  Vec2 lo{}, hi{};
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

/// Simple planar polygon with positively oriented (counterclockwise) vertices.
class Polygon {
 public:
  explicit Polygon(std::vector<Vec2> vertices);

  static Polygon box(Vec2 lo, Vec2 hi);
  static Polygon triangle(Vec2 a, Vec2 b, Vec2 c);

  const std::vector<Vec2>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }
  double area() const { return area_; }
  Box2 bounding_box() const;
  bool contains(Vec2 p) const;

  Polygon transformed(const Affine2& map) const;

 private:
  std::vector<Vec2> verts_;
  double area_ = 0.0;
};

/// Clips a convex polygon (as a vertex list) against the half-plane n·z <= c.
/// Returns an empty list when nothing remains.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, Vec2 n, double c);

/// Clips a convex polygon to an axis-aligned box.
std::vector<Vec2> clip_to_box(const std::vector<Vec2>& poly, Vec2 lo, Vec2 hi);

/// Area of the (positively oriented) vertex list by the shoelace formula.
double polygon_area(const std::vector<Vec2>& poly);

/// Intersection area of two convex polygons.
double convex_intersection_area(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

/// Ear-clipping triangulation of a simple CCW polygon.
std::vector<std::array<Vec2, 3>> triangulate(const Polygon& poly);

}  // namespace haar
