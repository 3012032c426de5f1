#include "haar/constants.hpp"

#include <cmath>
#include <limits>

#include "haar/profiles.hpp"

namespace haar {

namespace {

constexpr double kLog2 = 0.6931471805599453094172321214581766;
constexpr double kPi = 3.141592653589793238462643383279502884;

Complex konst_weight(double x, double y) {
  const double d = x * x + y * y;
  if (d == 0.0) return Complex{};
  const Complex z{x, y};
  return z * z / d;
}

ConstantResult finish(Complex raw_integral, double raw_err, long cells) {
  ConstantResult r;
  r.integral_I = raw_integral / (2.0 * kLog2);
  r.err_est = raw_err / (2.0 * kLog2);
  r.cells_used = cells;
  const double mag = std::abs(r.integral_I);
  r.C = mag > 0.0 ? 1.0 / mag : std::numeric_limits<double>::infinity();
  return r;
}

ConstantResult constant_new_family(const KernelSpec& spec, const QuadConfig& cfg) {
  // integrate in sheared reference coordinates; the Jacobian cancels the
  // kernel's normalization exactly
  const Affine2 map = kernel_reference_map(spec);
  const double jac = std::abs(map.det());
  auto f = [&](double u, double v) -> Complex {
    const Vec2 z = map({u, v});
    return eval_kernel(spec, z.x, z.y) * konst_weight(z.x, z.y) * jac;
  };
  PolygonQuadStats stats;
  const Complex raw =
      integrate_polygon(f, Polygon::box({-1.0, -1.0}, {1.0, 1.0}), 0.5, cfg, &stats);
  return finish(raw, stats.err_est, stats.cells_used);
}

ConstantResult constant_diagonal(const DiagonalKernelParams& p, const QuadConfig& cfg) {
  const Polygon unit = Polygon::box({0.0, 0.0}, {1.0, 1.0});
  const double b2 = p.b * p.b;
  PolygonQuadStats s1, s2, s3;
  const Complex A = integrate_polygon(
      [&](double x, double y) -> Complex {
        const double den = x * x + b2 * y * y;
        if (den == 0.0) return {};
        return alpha(x) * alpha(y) * (x * x / den);
      },
      unit, 0.5, cfg, &s1);
  const Complex B = integrate_polygon(
      [&](double x, double y) -> Complex {
        const double den = x * x + b2 * y * y;
        if (den == 0.0) return {};
        return (alpha(x) * beta(y) + beta(x) * alpha(y)) * (x * x / den);
      },
      unit, 0.5, cfg, &s2);
  const Complex G = integrate_polygon(
      [&](double x, double y) -> Complex {
        const double den = x * x + b2 * y * y;
        if (den == 0.0) return {};
        return gamma(x) * gamma(y) * (x * y / den);
      },
      unit, 0.5, cfg, &s3);
  const double ct = std::cos(p.theta), st = std::sin(p.theta);
  const Complex raw = 8.0 * (A - ct * B) + 16.0 * p.b * st * G;
  const double err = 8.0 * (s1.err_est + std::abs(ct) * s2.err_est) +
                     16.0 * p.b * std::abs(st) * s3.err_est;
  return finish(raw, err, s1.cells_used + s2.cells_used + s3.cells_used);
}

ConstantResult constant_triangle(const TriangleKernelParams& p, const QuadConfig& cfg) {
  const Complex zeta{p.a, p.b};
  const Complex zbar = std::conj(zeta);
  const Complex sp = unit(p.argp), sm = unit(p.argm);
  auto g = [&](double s, double t) -> Complex {
    return triangle_G(TriangleGKind::Zero, s, t) + sp * triangle_G(TriangleGKind::Plus, s, t) +
           sm * triangle_G(TriangleGKind::Minus, s, t);
  };
  auto weight = [&](double s, double t) -> Complex {
    Complex w{};
    const Complex d1 = s + t * zbar;
    if (d1 != Complex{}) w += (s + t * zeta) / d1;
    const Complex d2 = t + s * zbar;
    if (d2 != Complex{}) w += (t + s * zeta) / d2;
    return w;
  };
  Complex raw{};
  double err = 0.0;
  long cells = 0;
  for (const auto& region : triangle_G_table(TriangleGKind::Zero).regions) {
    PolygonQuadStats stats;
    raw += integrate_polygon([&](double s, double t) { return g(s, t) * weight(s, t); },
                             region.poly, 1.0, cfg, &stats);
    err += stats.err_est;
    cells += stats.cells_used;
  }
  // 1/C = (2/log 2) * wedge integral; finish() divides by 2 log 2
  return finish(4.0 * raw, 4.0 * err, cells);
}

}  // namespace

ConstantResult constant_for(const KernelSpec& spec, const QuadConfig& cfg) {
  spec.validate();
  cfg.validate();
  return std::visit(
      [&](const auto& p) -> ConstantResult {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NewKernelParams>) {
          (void)p;
          return constant_new_family(spec, cfg);
        } else if constexpr (std::is_same_v<T, DiagonalKernelParams>) {
          return constant_diagonal(p, cfg);
        } else if constexpr (std::is_same_v<T, TriangleKernelParams>) {
          return constant_triangle(p, cfg);
        } else {
          // the weight is homogeneous of degree zero, so scaling drops out
          return constant_for(*p.inner, cfg);
        }
      },
      spec.family());
}

ConstantResult konst_integral_planar(const KernelSpec& spec, const QuadConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (const auto* sc = std::get_if<ScaledKernelParams>(&spec.family())) {
    // the weight is homogeneous of degree zero
    return konst_integral_planar(*sc->inner, cfg);
  }
  // integrate in reference coordinates so panels align with the kernel lattice
  const Affine2 map = kernel_reference_map(spec);
  const double jac = std::abs(map.det());
  auto f = [&](double u, double v) -> Complex {
    const Vec2 z = map({u, v});
    return eval_kernel(spec, z.x, z.y) * konst_weight(z.x, z.y) * jac;
  };
  if (std::holds_alternative<TriangleKernelParams>(spec.family())) {
    // cover the hexagonal support by the four symmetry images of the wedge
    static const std::array<Affine2, 4> symmetries{
        Affine2::identity(),
        Affine2{0, 1, 1, 0, {0, 0}},    // swap
        Affine2{-1, 0, 0, -1, {0, 0}},  // point reflection
        Affine2{0, -1, -1, 0, {0, 0}},  // reflected swap
    };
    Complex raw{};
    double err = 0.0;
    long cells = 0;
    for (const Affine2& sym : symmetries) {
      for (const auto& region : triangle_G_table(TriangleGKind::Zero).regions) {
        PolygonQuadStats stats;
        raw += integrate_polygon(f, region.poly.transformed(sym), 1.0, cfg, &stats);
        err += stats.err_est;
        cells += stats.cells_used;
      }
    }
    return finish(raw, err, cells);
  }
  PolygonQuadStats stats;
  const Complex raw =
      integrate_polygon(f, Polygon::box({-1.0, -1.0}, {1.0, 1.0}), 0.5, cfg, &stats);
  return finish(raw, stats.err_est, stats.cells_used);
}

double closed_form_I_sqrt2() {
  const double s2 = std::sqrt(2.0);
  return (5.0 * kPi / 6.0 + 9.0 * std::atan(1.0 / s2) - 7.0 * std::atan(s2)) / s2 +
         (8.0 / 3.0) * kLog2 - 2.0 * std::log(3.0);
}

double closed_form_C_unit() {
  return 12.0 * kLog2 /
         (16.0 * kPi + 32.0 * kLog2 - 15.0 * std::log(5.0) - 40.0 * std::atan(2.0));
}

ConstantResult diagonal_constant(double b, double theta, const QuadConfig& cfg) {
  return constant_for(KernelSpec::diagonal(b, theta), cfg);
}

double reduced_I_parallelogram(double b, double phi, const QuadConfig& cfg) {
  const double c2 = 2.0 * b * std::cos(phi);
  const double b2 = b * b;
  auto f = [&](double x, double y) -> Complex {
    const double den = x * x + c2 * x * y + b2 * y * y;
    if (den == 0.0) return {};
    const double F = alpha(x) * beta(y) - beta(x) * alpha(y) - alpha(x) * alpha(y);
    return F * (y * y / den);
  };
  const double s = b * std::sin(phi);
  const Complex v = integrate_polygon(f, Polygon::box({-1.0, -1.0}, {1.0, 1.0}), 0.5, cfg);
  return -2.0 * s * s * v.real();
}

bool degenerate_sign_choice(const KernelSpec& spec) {
  return std::visit(
      [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        const double tol = 1e-12;
        if constexpr (std::is_same_v<T, NewKernelParams>) {
          const Complex s0 = unit(p.arg0);
          return std::abs(unit(p.argp) - s0) < tol && std::abs(unit(p.argm) - s0) < tol;
        } else if constexpr (std::is_same_v<T, DiagonalKernelParams>) {
          return std::abs(unit(p.theta) - Complex{1.0, 0.0}) < tol;
        } else if constexpr (std::is_same_v<T, TriangleKernelParams>) {
          return std::abs(unit(p.argp) - Complex{1.0, 0.0}) < tol &&
                 std::abs(unit(p.argm) - Complex{1.0, 0.0}) < tol;
        } else {
          return degenerate_sign_choice(*p.inner);
        }
      },
      spec.family());
}

}  // namespace haar
