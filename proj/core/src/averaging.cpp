#include "haar/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace haar {

namespace {

constexpr double kLog2 = 0.6931471805599453094172321214581766;

// O(1) box integrals of a 2-D grid step function via prefix tables.
class BoxIntegrator {
 public:
  explicit BoxIntegrator(const StepFunction& f)
      : n_(f.grid_n()), lo_(f.grid_lo()), h_(f.grid_h()) {
    vals_ = f.to_grid2d_row_major();
    const std::size_t n = static_cast<std::size_t>(n_);
    full_.assign((n + 1) * (n + 1), Complex{});
    row_.assign((n + 1) * (n + 1), Complex{});
    col_.assign((n + 1) * (n + 1), Complex{});
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < n; ++ix) {
        const Complex v = vals_[iy * n + ix];
        full_[(iy + 1) * (n + 1) + (ix + 1)] =
            full_[iy * (n + 1) + (ix + 1)] + full_[(iy + 1) * (n + 1) + ix] -
            full_[iy * (n + 1) + ix] + v;
        row_[iy * (n + 1) + (ix + 1)] = row_[iy * (n + 1) + ix] + v;  // sum over x' < ix+1 at row iy
        col_[(iy + 1) * (n + 1) + ix] = col_[iy * (n + 1) + ix] + v;  // sum over y' < iy+1 at col ix
      }
    }
  }

  // integral of f over [a.x, b.x] x [a.y, b.y] in reference coordinates
  Complex box(Vec2 a, Vec2 b) const {
    return corner(b) - corner({a.x, b.y}) - corner({b.x, a.y}) + corner(a);
  }

 private:
  // integral over [lo.x, x] x [lo.y, y]
  Complex corner(Vec2 p) const {
    const double gx = std::clamp((p.x - lo_.x) / h_, 0.0, static_cast<double>(n_));
    const double gy = std::clamp((p.y - lo_.y) / h_, 0.0, static_cast<double>(n_));
    const std::size_t ix = static_cast<std::size_t>(std::min(gx, n_ - 1.0));
    const std::size_t iy = static_cast<std::size_t>(std::min(gy, n_ - 1.0));
    const double fx = gx - static_cast<double>(ix);
    const double fy = gy - static_cast<double>(iy);
    const std::size_t n1 = static_cast<std::size_t>(n_) + 1;
    const Complex whole = full_[iy * n1 + ix];
    const Complex part_row = row_[iy * n1 + ix];          // row iy, x' < ix
    const Complex part_col = col_[iy * n1 + ix];          // col ix, y' < iy
    const Complex corner_v = vals_[iy * static_cast<std::size_t>(n_) + ix];
    return h_ * h_ * (whole + fy * part_row + fx * part_col + fx * fy * corner_v);
  }

  int n_;
  Vec2 lo_;
  double h_;
  std::vector<Complex> vals_;
  std::vector<Complex> full_, row_, col_;
};

struct LeafTriangle {
  std::array<Vec2, 3> v;
  Box2 bb;
  Complex value;
};

void collect_leaf_triangles(const StepFunction& f, std::vector<LeafTriangle>& out) {
  const LatticeId root = f.root();
  const double s = std::ldexp(1.0, root.scale);
  std::array<Vec2, 3> tri;
  if (!root.down) {
    tri = {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  } else {
    tri = {Vec2{1, 1}, Vec2{0, 1}, Vec2{1, 0}};
  }
  for (Vec2& p : tri)
    p = {s * (static_cast<double>(root.index[0]) + p.x),
         s * (static_cast<double>(root.index[1]) + p.y)};
  // recursive midpoint refinement matching the child order ll,right,top,mid
  struct Frame {
    std::array<Vec2, 3> t;
    int depth;
    std::size_t idx;
  };
  std::vector<Frame> stack{{tri, 0, 0}};
  out.reserve(f.leaf_count());
  out.resize(f.leaf_count());
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    if (fr.depth == f.level()) {
      LeafTriangle lt;
      lt.v = fr.t;
      lt.bb.lo = {std::min({fr.t[0].x, fr.t[1].x, fr.t[2].x}),
                  std::min({fr.t[0].y, fr.t[1].y, fr.t[2].y})};
      lt.bb.hi = {std::max({fr.t[0].x, fr.t[1].x, fr.t[2].x}),
                  std::max({fr.t[0].y, fr.t[1].y, fr.t[2].y})};
      lt.value = f.values()[fr.idx];
      out[fr.idx] = lt;
      continue;
    }
    const Vec2 a = fr.t[0], b = fr.t[1], c = fr.t[2];
    const Vec2 mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
    // children in the atom-table order: ll, right, top, mid (the mid child is
    // the point reflection, encoded by the reversed vertex role order)
    const std::array<std::array<Vec2, 3>, 4> kids{{{a, mab, mca},
                                                   {mab, b, mbc},
                                                   {mca, mbc, c},
                                                   {mbc, mca, mab}}};
    for (int k = 3; k >= 0; --k)
      stack.push_back({kids[static_cast<std::size_t>(k)], fr.depth + 1, fr.idx * 4 +
                       static_cast<std::size_t>(k)});
  }
}

Complex integrate_step_over_triangle(const std::vector<LeafTriangle>& leaves,
                                     const std::array<Vec2, 3>& tri) {
  Box2 bb;
  bb.lo = {std::min({tri[0].x, tri[1].x, tri[2].x}), std::min({tri[0].y, tri[1].y, tri[2].y})};
  bb.hi = {std::max({tri[0].x, tri[1].x, tri[2].x}), std::max({tri[0].y, tri[1].y, tri[2].y})};
  const std::vector<Vec2> poly{tri[0], tri[1], tri[2]};
  const bool ccw = cross(tri[1] - tri[0], tri[2] - tri[0]) > 0.0;
  const std::vector<Vec2> clip = ccw ? poly : std::vector<Vec2>{tri[0], tri[2], tri[1]};
  Complex sum{};
  for (const LeafTriangle& lt : leaves) {
    if (lt.bb.lo.x >= bb.hi.x || lt.bb.hi.x <= bb.lo.x || lt.bb.lo.y >= bb.hi.y ||
        lt.bb.hi.y <= bb.lo.y)
      continue;
    const bool lccw = cross(lt.v[1] - lt.v[0], lt.v[2] - lt.v[0]) > 0.0;
    const std::vector<Vec2> lv = lccw ? std::vector<Vec2>{lt.v[0], lt.v[1], lt.v[2]}
                                      : std::vector<Vec2>{lt.v[0], lt.v[2], lt.v[1]};
    const double a = convex_intersection_area(lv, clip);
    if (a > 0.0) sum += lt.value * a;
  }
  return sum;
}

}  // namespace

McEstimate mc_average_translations(const SystemSpec& spec, const SignChoice& sigma,
                                   const StepFunction& f, Vec2 x, const McConfig& cfg) {
  cfg.validate();
  sigma.validate(spec.kinds());
  if (!sigma.averaging_compatible())
    throw std::invalid_argument("mc_average_translations: per-atom overrides break homogeneity");
  if (spec.dimension() != 2)
    throw std::invalid_argument("mc_average_translations: 2-D systems only");
  const bool tri = spec.kind == System::Triangle;
  const Affine2 inv = spec.transport().inverse();
  const double det = spec.transport_det();
  const Vec2 xr = inv(x);  // reference coordinates of the evaluation point

  std::vector<LeafTriangle> leaves;
  BoxIntegrator* box = nullptr;
  std::unique_ptr<BoxIntegrator> box_holder;
  if (tri) {
    collect_leaf_triangles(f, leaves);
  } else {
    box_holder = std::make_unique<BoxIntegrator>(f);
    box = box_holder.get();
  }

  const int kinds = spec.kinds();
  const double cell_meas = tri ? 0.5 * det : det;  // scale-0 cell, true measure
  const double inv_sqrt = 1.0 / std::sqrt(cell_meas);

  Rng rng(cfg.seed);
  Complex sum{};
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < cfg.samples; ++s) {
    const Vec2 t{rng.uniform01(), rng.uniform01()};
    const Vec2 w{xr.x - t.x, xr.y - t.y};
    const Vec2 anchor{t.x + std::floor(w.x), t.y + std::floor(w.y)};
    const double lx = xr.x - anchor.x;
    const double ly = xr.y - anchor.y;

    std::array<Complex, 8> child_integrals{};
    int child_at_x = 0;
    if (!tri) {
      for (int c = 0; c < 4; ++c) {
        const Vec2 lo{anchor.x + 0.5 * (c & 1), anchor.y + 0.5 * ((c >> 1) & 1)};
        child_integrals[static_cast<std::size_t>(c)] =
            det * box->box(lo, {lo.x + 0.5, lo.y + 0.5});
      }
      child_at_x = (lx >= 0.5 ? 1 : 0) + (ly >= 0.5 ? 2 : 0);
    } else {
      const bool down = lx + ly >= 1.0;
      // children of the containing triangle cell in reference coordinates
      const Vec2 a = down ? Vec2{anchor.x + 1, anchor.y + 1} : anchor;
      const double sgn = down ? -1.0 : 1.0;
      auto pt = [&](double u, double v) { return Vec2{a.x + sgn * u, a.y + sgn * v}; };
      const std::array<std::array<Vec2, 3>, 4> kids{{
          {pt(0, 0), pt(0.5, 0), pt(0, 0.5)},
          {pt(0.5, 0), pt(1, 0), pt(0.5, 0.5)},
          {pt(0, 0.5), pt(0.5, 0.5), pt(0, 1)},
          {pt(0.5, 0), pt(0.5, 0.5), pt(0, 0.5)},
      }};
      for (int c = 0; c < 4; ++c)
        child_integrals[static_cast<std::size_t>(c)] =
            det * integrate_step_over_triangle(leaves, kids[static_cast<std::size_t>(c)]);
      const double ux = down ? 1.0 - lx : lx;
      const double uy = down ? 1.0 - ly : ly;
      if (ux + uy < 0.5)
        child_at_x = 0;
      else if (ux >= 0.5)
        child_at_x = 1;
      else if (uy >= 0.5)
        child_at_x = 2;
      else
        child_at_x = 3;
    }

    Complex p{};
    for (int k = 0; k < kinds; ++k) {
      Complex coeff{};
      for (int c = 0; c < spec.children(); ++c)
        coeff += atom_table(spec.kind, k, c) * child_integrals[static_cast<std::size_t>(c)];
      coeff *= inv_sqrt;
      const double hx = atom_table(spec.kind, k, child_at_x) * inv_sqrt;
      p += sigma.by_kind[static_cast<std::size_t>(k)] * coeff * hx;
    }
    sum += p;
    sum_sq += std::norm(p);
  }

  const double n = static_cast<double>(cfg.samples);
  const Complex mean = sum / n;
  McEstimate out;
  out.value = mean;
  if (cfg.samples > 1) {
    const double var = std::max(0.0, (sum_sq - n * std::norm(mean)) / (n - 1.0));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

Complex convolve_kernel_with_step(const KernelSpec& kernel, const SystemSpec& spec,
                                  const StepFunction& f, Vec2 x, const QuadConfig& cfg) {
  // (F*f)(x) integrated in the system's reference coordinates
  const Affine2 map = spec.transport();
  const double det = spec.transport_det();
  Polygon domain = [&] {
    if (spec.kind == System::Triangle) {
      const LatticeId root = f.root();
      const double s = std::ldexp(1.0, root.scale);
      const Vec2 o{s * static_cast<double>(root.index[0]), s * static_cast<double>(root.index[1])};
      if (!root.down)
        return Polygon::triangle(o, {o.x + s, o.y}, {o.x, o.y + s});
      return Polygon::triangle({o.x + s, o.y + s}, {o.x, o.y + s}, {o.x + s, o.y});
    }
    const Vec2 lo = f.grid_lo();
    const double len = f.grid_h() * std::ldexp(1.0, f.level());
    return Polygon::box(lo, {lo.x + len, lo.y + len});
  }();
  auto integrand = [&](double u, double v) -> Complex {
    const Vec2 s = map({u, v});
    return eval_kernel(kernel, x.x - s.x, x.y - s.y) * f.eval(spec, {s.x, s.y, 0.0}) * det;
  };
  const double spacing = spec.kind == System::Triangle
                             ? std::ldexp(1.0, f.root().scale - f.level() - 1)
                             : 0.5 * f.grid_h();
  return integrate_polygon(integrand, domain, spacing, cfg);
}

void SeriesTruncation::validate() const {
  if (!(r > 0.0)) throw std::invalid_argument("SeriesTruncation: calibre r must be > 0");
  if (m_low > m_high) throw std::invalid_argument("SeriesTruncation: m_low must be <= m_high");
}

Complex kr_truncated(const KernelSpec& spec, const SeriesTruncation& trunc, Vec2 x) {
  trunc.validate();
  if (x.x == 0.0 && x.y == 0.0)
    throw OriginNotAllowed("kr_truncated: the series is only defined away from the origin");
  Complex sum{};
  for (int n = trunc.m_low; n <= trunc.m_high; ++n) {
    const double rho = trunc.r * std::ldexp(1.0, n);
    sum += eval_kernel(spec, x.x / rho, x.y / rho) / (rho * rho);
  }
  return sum;
}

double kr_tail_bound(const KernelSpec& spec, const SeriesTruncation& trunc, double abs_x) {
  // scales above m_high decay geometrically; scales below m_low vanish once
  // the support (radius <= support_radius * rho) no longer reaches |x|
  const Polygon sup = support_polygon(spec);
  double radius = 0.0;
  for (Vec2 v : sup.vertices()) radius = std::max(radius, std::hypot(v.x, v.y));
  const double sup_f = kernel_sup_bound(spec);
  const double rho_hi = trunc.r * std::ldexp(1.0, trunc.m_high);
  double tail = sup_f / (rho_hi * rho_hi) / 3.0;  // sum_{n>M} rho^-2 = rho_M^-2 / 3
  const double rho_lo = trunc.r * std::ldexp(1.0, trunc.m_low);
  if (rho_lo * radius >= abs_x) {
    // the dropped small scales may still reach x; no useful bound
    tail += sup_f / (rho_lo * rho_lo) * 2.0;
  }
  return tail;
}

Complex homogenized_profile(const KernelSpec& spec, double phi, const QuadConfig& cfg) {
  const Polygon sup = support_polygon(spec);
  double radius = 0.0;
  for (Vec2 v : sup.vertices()) radius = std::max(radius, std::hypot(v.x, v.y));
  if (radius == 0.0) return Complex{};
  const double r_max = radius * 1.0000001;
  std::vector<double> breaks = kernel_ray_breakpoints(spec, phi, r_max);
  const double c = std::cos(phi), s = std::sin(phi);
  auto f = [&](double r) { return eval_kernel(spec, r * c, r * s) * r; };
  return integrate_1d_complex(f, 0.0, r_max, breaks, cfg) / kLog2;
}

RadialKernel::RadialKernel(KernelSpec spec, QuadConfig cfg)
    : spec_(std::move(spec)), cfg_(cfg) {}

Complex RadialKernel::profile(double phi) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(phi);
    if (it != cache_.end()) return it->second;
  }
  const Complex v = homogenized_profile(spec_, phi, cfg_);
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(phi, v);
  return v;
}

Complex RadialKernel::operator()(Vec2 x) const {
  const double r2 = x.x * x.x + x.y * x.y;
  if (r2 == 0.0) throw OriginNotAllowed("RadialKernel: undefined at the origin");
  return profile(std::atan2(x.y, x.x)) / r2;
}

}  // namespace haar
