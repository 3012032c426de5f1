#include "haar/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "haar/profiles.hpp"

namespace haar {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

Complex unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

KernelSpec KernelSpec::new_family(double b, double phi, double arg0, double argp, double argm) {
  KernelSpec s(NewKernelParams{b, phi, arg0, argp, argm});
  s.validate();
  return s;
}

KernelSpec KernelSpec::diagonal(double b, double theta) {
  KernelSpec s(DiagonalKernelParams{b, theta});
  s.validate();
  return s;
}

KernelSpec KernelSpec::triangle(double a, double b, double argp, double argm) {
  KernelSpec s(TriangleKernelParams{a, b, argp, argm});
  s.validate();
  return s;
}

KernelSpec KernelSpec::scaled(KernelSpec inner, double rho) {
  KernelSpec s(ScaledKernelParams{std::make_shared<const KernelSpec>(std::move(inner)), rho});
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NewKernelParams>) {
          if (!(p.b > 0.0)) throw UnsupportedParams("kernel: b must be > 0");
          if (!(p.phi > 0.0 && p.phi < kPi))
            throw UnsupportedParams("kernel: phi must lie in (0, pi)");
        } else if constexpr (std::is_same_v<T, DiagonalKernelParams>) {
          if (!(p.b > 0.0)) throw UnsupportedParams("kernel: b must be > 0");
          if (!(p.theta > -kPi && p.theta <= kPi))
            throw UnsupportedParams("kernel: theta must lie in (-pi, pi]");
        } else if constexpr (std::is_same_v<T, TriangleKernelParams>) {
          if (!(p.b > 0.0)) throw UnsupportedParams("kernel: b must be > 0");
        } else {
          if (!(p.rho > 0.0)) throw UnsupportedParams("kernel: rho must be > 0");
          p.inner->validate();
        }
      },
      family_);
}

// ---- triangle autocorrelations ----

namespace {

bool in_wedge(double x, double y) { return y <= x && y >= -x && x + y <= 1.0 && x <= 1.0; }

double wedge_G0(double x, double y) {
  if (y >= 0.0) {
    if (x + y <= 0.5) {
      const double d = x - y, s = 2.0 * x + 2.0 * y - 1.0;
      return -d * d + s * s;  // A
    }
    if (x <= 0.5) {
      const double d = x - y;
      return -d * d;  // B
    }
    const double d = 1.0 - x - y;
    return -d * d;  // C
  }
  if (x <= 0.5) {
    const double d = x - y;
    return (1.0 - x) * (1.0 - x) + 2.0 * d * (d - 1.0);  // D
  }
  if (y <= -0.5) return (1.0 - x) * (1.0 - x);  // G
  if (x + y <= 0.5) {
    const double s = 2.0 * x + 2.0 * y - 1.0;
    return -(1.0 - x) * (1.0 - x) + 0.5 * s * s;  // E
  }
  return -(1.0 - x) * (1.0 - x);  // F
}

double wedge_Gp(double x, double y) {
  if (y >= 0.0) {
    if (x + y <= 0.5) {
      const double s = 2.0 * x + 2.0 * y - 1.0;
      return s * s;  // A
    }
    return 0.0;  // B, C
  }
  if (x <= 0.5) {
    const double s = 2.0 * x - 1.0;
    return s * s - 2.0 * y * y;  // D
  }
  if (y <= -0.5) return -2.0 * (1.0 - x) * (1.0 - x);  // G
  if (x + y <= 0.5) {
    const double s = 2.0 * x + 2.0 * y - 1.0;
    return -0.5 * s * s;  // E
  }
  return 0.0;  // F
}

double wedge_Gm(double x, double y) {
  if (y >= 0.0) {
    if (x + y <= 0.5) {
      const double s = 2.0 * x + 2.0 * y - 1.0;
      return -(1.0 - 2.0 * x) * (1.0 - 2.0 * y) + 2.0 * s * s;  // A
    }
    if (x <= 0.5) return -(1.0 - 2.0 * x) * (1.0 - 2.0 * y);  // B
    return 0.0;  // C
  }
  if (x <= 0.5 && y >= -0.5) return (1.0 - 2.0 * x) * (1.0 - 2.0 * y - 4.0 * x);  // D
  return 0.0;  // E, F, G
}

double wedge_G(TriangleGKind kind, double x, double y) {
  switch (kind) {
    case TriangleGKind::Zero: return wedge_G0(x, y);
    case TriangleGKind::Plus: return wedge_Gp(x, y);
    case TriangleGKind::Minus: return wedge_Gm(x, y);
  }
  return 0.0;
}

}  // namespace

double triangle_G(TriangleGKind kind, double x, double y) {
  // fold by G(z) = G(Sz) = G(-z) = G(-Sz), S(x,y) = (y,x)
  if (in_wedge(x, y)) return wedge_G(kind, x, y);
  if (in_wedge(y, x)) return wedge_G(kind, y, x);
  if (in_wedge(-x, -y)) return wedge_G(kind, -x, -y);
  if (in_wedge(-y, -x)) return wedge_G(kind, -y, -x);
  return 0.0;
}

const PiecewisePoly2D& triangle_G_table(TriangleGKind kind) {
  static const PiecewisePoly2D g0{{
      {Polygon({{0, 0}, {0.5, 0}, {0.25, 0.25}}), {1, -4, -4, 3, 10, 3}},          // A
      {Polygon({{0.25, 0.25}, {0.5, 0}, {0.5, 0.5}}), {0, 0, 0, -1, 2, -1}},       // B
      {Polygon({{0.5, 0}, {1, 0}, {0.5, 0.5}}), {-1, 2, 2, -1, -2, -1}},           // C
      {Polygon({{0, 0}, {0.5, -0.5}, {0.5, 0}}), {1, -4, 2, 3, -4, 2}},            // D
      {Polygon({{0.5, -0.5}, {1, -0.5}, {0.5, 0}}), {-0.5, 0, -2, 1, 4, 2}},       // E
      {Polygon({{0.5, 0}, {1, -0.5}, {1, 0}}), {-1, 2, 0, -1, 0, 0}},              // F
      {Polygon({{0.5, -0.5}, {1, -1}, {1, -0.5}}), {1, -2, 0, 1, 0, 0}},           // G
  }};
  static const PiecewisePoly2D gp{{
      {Polygon({{0, 0}, {0.5, 0}, {0.25, 0.25}}), {1, -4, -4, 4, 8, 4}},           // A
      {Polygon({{0, 0}, {0.5, -0.5}, {0.5, 0}}), {1, -4, 0, 4, 0, -2}},            // D
      {Polygon({{0.5, -0.5}, {1, -0.5}, {0.5, 0}}), {-0.5, 2, 2, -2, -4, -2}},     // E
      {Polygon({{0.5, -0.5}, {1, -1}, {1, -0.5}}), {-2, 4, 0, -2, 0, 0}},          // G
  }};
  static const PiecewisePoly2D gm{{
      {Polygon({{0, 0}, {0.5, 0}, {0.25, 0.25}}), {1, -6, -6, 8, 12, 8}},          // A
      {Polygon({{0.25, 0.25}, {0.5, 0}, {0.5, 0.5}}), {-1, 2, 2, 0, -4, 0}},       // B
      {Polygon({{0, 0}, {0.5, -0.5}, {0.5, 0}}), {1, -6, -2, 8, 4, 0}},            // D
  }};
  switch (kind) {
    case TriangleGKind::Zero: return g0;
    case TriangleGKind::Plus: return gp;
    case TriangleGKind::Minus: return gm;
  }
  return g0;
}

double PiecewisePoly2D::eval(double x, double y) const {
  for (const Region& r : regions) {
    if (r.poly.contains({x, y})) {
      const auto& c = r.coeff;
      return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
    }
  }
  return 0.0;
}

// ---- kernel evaluation ----

namespace {

Complex new_reference_kernel(const NewKernelParams& p, double u, double v) {
  const double au = alpha(u), av = alpha(v);
  const double bu = beta(u), bv = beta(v);
  const Complex s0 = unit(p.arg0);
  const Complex half_sum = 0.5 * (unit(p.argp) + unit(p.argm));
  return s0 * (-bu * av) + half_sum * (-au * bv + au * av);
}

Complex diagonal_reference_kernel(const DiagonalKernelParams& p, double u, double v) {
  const double au = alpha(u), av = alpha(v);
  const double bu = beta(u), bv = beta(v);
  const double gu = gamma(u), gv = gamma(v);
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  return Complex(au * av - c * (au * bv + bu * av), -2.0 * s * gu * gv);
}

Complex triangle_reference_kernel(const TriangleKernelParams& p, double s, double t) {
  const Complex g = triangle_G(TriangleGKind::Zero, s, t) +
                    unit(p.argp) * triangle_G(TriangleGKind::Plus, s, t) +
                    unit(p.argm) * triangle_G(TriangleGKind::Minus, s, t);
  return 2.0 * g;
}

}  // namespace

Complex eval_kernel(const KernelSpec& spec, double x, double y) {
  return std::visit(
      [&](const auto& p) -> Complex {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NewKernelParams>) {
          const double s = p.b * std::sin(p.phi);
          const double u = x - y * std::cos(p.phi) / std::sin(p.phi);
          const double v = y / s;
          return new_reference_kernel(p, u, v) / s;
        } else if constexpr (std::is_same_v<T, DiagonalKernelParams>) {
          return diagonal_reference_kernel(p, x, y / p.b) / p.b;
        } else if constexpr (std::is_same_v<T, TriangleKernelParams>) {
          return triangle_reference_kernel(p, x - (p.a / p.b) * y, y / p.b) / p.b;
        } else {
          return eval_kernel(*p.inner, x / p.rho, y / p.rho) / (p.rho * p.rho);
        }
      },
      spec.family());
}

Affine2 kernel_reference_map(const KernelSpec& spec) {
  return std::visit(
      [&](const auto& p) -> Affine2 {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NewKernelParams>) {
          return Affine2::parallelogram(p.b, p.phi);
        } else if constexpr (std::is_same_v<T, DiagonalKernelParams>) {
          return Affine2{1.0, 0.0, 0.0, p.b, {0.0, 0.0}};
        } else if constexpr (std::is_same_v<T, TriangleKernelParams>) {
          return Affine2::triangle_shear(p.a, p.b);
        } else {
          return Affine2::scale_shift(p.rho, {0.0, 0.0}).compose(kernel_reference_map(*p.inner));
        }
      },
      spec.family());
}

Polygon support_polygon(const KernelSpec& spec) {
  const Affine2 map = kernel_reference_map(spec);
  const bool tri = std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TriangleKernelParams>)
          return true;
        else if constexpr (std::is_same_v<T, ScaledKernelParams>) {
          const KernelSpec* k = p.inner.get();
          while (const auto* sc = std::get_if<ScaledKernelParams>(&k->family()))
            k = sc->inner.get();
          return std::holds_alternative<TriangleKernelParams>(k->family());
        } else
          return false;
      },
      spec.family());
  if (tri) {
    const Polygon hex({{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}});
    return hex.transformed(map);
  }
  return Polygon::box({-1.0, -1.0}, {1.0, 1.0}).transformed(map);
}

double kernel_sup_bound(const KernelSpec& spec) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NewKernelParams>) {
          return 3.0 / (p.b * std::sin(p.phi));
        } else if constexpr (std::is_same_v<T, DiagonalKernelParams>) {
          return 3.5 / p.b;
        } else if constexpr (std::is_same_v<T, TriangleKernelParams>) {
          return 6.0 / p.b;
        } else {
          return kernel_sup_bound(*p.inner) / (p.rho * p.rho);
        }
      },
      spec.family());
}

std::vector<double> kernel_ray_breakpoints(const KernelSpec& spec, double phi, double r_max) {
  if (const auto* sc = std::get_if<ScaledKernelParams>(&spec.family())) {
    std::vector<double> inner = kernel_ray_breakpoints(*sc->inner, phi, r_max / sc->rho);
    for (double& r : inner) r *= sc->rho;
    return inner;
  }
  const Affine2 inv = kernel_reference_map(spec).inverse();
  const Vec2 dir{std::cos(phi), std::sin(phi)};
  // reference coordinates along the ray: (u,v) = r * (cu, cv)
  const double cu = inv.a11 * dir.x + inv.a12 * dir.y;
  const double cv = inv.a21 * dir.x + inv.a22 * dir.y;
  const bool tri = std::holds_alternative<TriangleKernelParams>(spec.family());
  std::vector<double> out;
  auto add_line = [&](double nu, double nv, double d) {
    const double den = nu * cu + nv * cv;
    if (std::abs(den) < 1e-15) return;
    const double r = d / den;
    if (r > 1e-14 && r < r_max) out.push_back(r);
  };
  for (int k = -2; k <= 2; ++k) {
    const double d = 0.5 * k;
    add_line(1.0, 0.0, d);
    add_line(0.0, 1.0, d);
    if (tri) {
      add_line(1.0, 1.0, d);
      add_line(1.0, -1.0, d);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-13; }),
            out.end());
  return out;
}

}  // namespace haar
