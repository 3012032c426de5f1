#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "haar/geometry.hpp"
#include "haar/quad.hpp"

namespace haar {

class UnsupportedParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unimodular coefficients are stored as angles so |sigma| = 1 holds exactly.
Complex unit(double angle);

/// Kernel of the translation average over the square/parallelogram system
/// with coefficients (sigma0, sigma+, sigma-) on the three function types.
struct NewKernelParams {
  double b = 1.0;
  double phi = 1.5707963267948966;
  double arg0 = 0.0;                      // sigma0
  double argp = 3.141592653589793;        // sigma+
  double argm = 3.141592653589793;        // sigma-
};

/// Diagonal-cut system on rectangles 1 x b with sigma± = exp(±i theta).
struct DiagonalKernelParams {
  double b = 1.0;
  double theta = 3.141592653589793;
};

/// Triangle system generated by the triangle (0,0),(1,0),(a,b); sigma0 = 1.
struct TriangleKernelParams {
  double a = 0.0;
  double b = 1.0;
  double argp = 0.0;
  double argm = 0.0;
};

class KernelSpec;

struct ScaledKernelParams {
  std::shared_ptr<const KernelSpec> inner;
  double rho = 1.0;
};

class KernelSpec {
 public:
  using Family =
      std::variant<NewKernelParams, DiagonalKernelParams, TriangleKernelParams, ScaledKernelParams>;

  static KernelSpec new_family(double b, double phi, double arg0, double argp, double argm);
  static KernelSpec diagonal(double b, double theta);
  static KernelSpec triangle(double a, double b, double argp, double argm);
  static KernelSpec scaled(KernelSpec inner, double rho);

  const Family& family() const { return family_; }
  void validate() const;

 private:
  explicit KernelSpec(Family f) : family_(std::move(f)) {}
  Family family_;
};

/// Pointwise kernel evaluation; zero outside the support polygon.
Complex eval_kernel(const KernelSpec& spec, double x, double y);

/// Exact support of the evaluator.
Polygon support_polygon(const KernelSpec& spec);

/// Affine map from the family's reference coordinates to the plane.
Affine2 kernel_reference_map(const KernelSpec& spec);

/// Conservative bound on sup |F|, used for series tail estimates.
double kernel_sup_bound(const KernelSpec& spec);

/// Radii (0, r_max) at which the ray r -> r e^{i phi} crosses a breakline of
/// the kernel's piecewise-polynomial lattice; sorted, deduplicated.
std::vector<double> kernel_ray_breakpoints(const KernelSpec& spec, double phi, double r_max);

// ---- triangle autocorrelation kernels ----

enum class TriangleGKind { Zero, Plus, Minus };

/// The piecewise-quadratic autocorrelations of the triangle Haar profiles,
/// extended from the fundamental wedge by their diagonal/central symmetries;
/// zero outside the support.
double triangle_G(TriangleGKind kind, double x, double y);

/// Piecewise bivariate polynomial (degree <= 2) on disjoint polygonal regions.
struct PiecewisePoly2D {
  struct Region {
    Polygon poly;
    // value = c[0] + c[1] x + c[2] y + c[3] x^2 + c[4] xy + c[5] y^2
    std::array<double, 6> coeff;
  };
  std::vector<Region> regions;

  double eval(double x, double y) const;  // 0 outside all regions
};

/// The fundamental-wedge region table of the given autocorrelation (regions
/// only cover the wedge between the diagonals; use triangle_G for the full
/// symmetrized function).
const PiecewisePoly2D& triangle_G_table(TriangleGKind kind);

}  // namespace haar
