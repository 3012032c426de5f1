#include <doctest.h>

#include <cmath>

#include "haar/averaging.hpp"
#include "haar/constants.hpp"

using namespace haar;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLog2 = 0.6931471805599453094172321214581766;

StepFunction bump(const SystemSpec& spec, int level) {
  const LatticeId root = LatticeId::unit(spec.kind);
  StepFunction f = StepFunction::on_cell(spec, root, level);
  const Affine2 map = spec.transport();
  // smooth-ish bump sampled on the mesh, complex phase across the cell
  const int n = 1 << level;
  std::size_t idx = 0;
  for (Complex& v : f.values()) {
    const double t = static_cast<double>(idx++) / static_cast<double>(f.leaf_count());
    v = Complex{std::exp(-3.0 * (t - 0.4) * (t - 0.4)), 0.3 * std::sin(5.0 * t)};
  }
  (void)n;
  (void)map;
  return f;
}

KernelSpec kernel_of(const SystemSpec& spec, const SignChoice& sigma) {
  auto angle = [](Complex v) { return std::atan2(v.imag(), v.real()); };
  switch (spec.kind) {
    case System::New2D:
    case System::Parallelogram:
      return KernelSpec::new_family(spec.b, spec.phi, angle(sigma.by_kind[0]),
                                    angle(sigma.by_kind[1]), angle(sigma.by_kind[2]));
    case System::Triangle:
      return KernelSpec::triangle(spec.a, spec.b, angle(sigma.by_kind[1]),
                                  angle(sigma.by_kind[2]));
    default:
      throw std::logic_error("unsupported system in test");
  }
}
}  // namespace

TEST_CASE("translation average of the zero function vanishes") {
  const SystemSpec spec = SystemSpec::new_2d();
  const StepFunction f = StepFunction::on_cell(spec, LatticeId::unit(System::New2D), 3);
  McConfig cfg;
  cfg.samples = 1000;
  cfg.seed = 5;
  const McEstimate est = mc_average_translations(spec, SignChoice::uniform(3), f, {0.4, 0.6}, cfg);
  CHECK(std::abs(est.value) == 0.0);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("translation average matches the kernel convolution") {
  struct Case {
    SystemSpec spec;
    SignChoice sigma;
  };
  std::vector<Case> cases;
  cases.push_back({SystemSpec::new_2d(), SignChoice::from_angles({0.0, kPi, kPi})});
  cases.push_back({SystemSpec::parallelogram(1.3, 1.0), SignChoice::from_angles({0.0, 2.1, -0.8})});
  cases.push_back({SystemSpec::triangle(0.3, 0.8), SignChoice::from_angles({0.0, 1.0, -0.5})});

  QuadConfig qcfg;
  qcfg.abs_tol = 1e-8;
  qcfg.rel_tol = 1e-7;
  Rng rng(404);
  for (const Case& c : cases) {
    const KernelSpec kernel = kernel_of(c.spec, c.sigma);
    const StepFunction f = bump(c.spec, 3);
    for (int trial = 0; trial < 3; ++trial) {
      const Vec2 ref{rng.uniform(-0.4, 1.4), rng.uniform(-0.4, 1.4)};
      const Vec2 x = c.spec.transport()(ref);
      McConfig mcfg;
      mcfg.samples = 60'000;
      mcfg.seed = 1000 + static_cast<std::uint64_t>(trial);
      const McEstimate mc = mc_average_translations(c.spec, c.sigma, f, x, mcfg);
      const Complex quad = convolve_kernel_with_step(kernel, c.spec, f, x, qcfg);
      CAPTURE(system_name(c.spec.kind));
      CHECK(std::abs(mc.value - quad) <= 4.0 * mc.std_error + 1e-6);
    }
  }
}

TEST_CASE("kr series: doubling relation and window stability") {
  const KernelSpec spec = KernelSpec::new_family(1.0, kPi / 2, 0.0, kPi, kPi);
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const Vec2 x{rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0)};
    if (std::hypot(x.x, x.y) < 0.3) continue;
    const double r = rng.uniform(0.8, 1.9);
    const Complex at_x = kr_truncated(spec, {r, -30, 30}, x);
    const Complex at_2x = kr_truncated(spec, {r, -29, 31}, {2 * x.x, 2 * x.y});
    CHECK(std::abs(at_2x - at_x / 4.0) <= 1e-12 * std::max(1.0, std::abs(at_x)));
  }
  // widening the window beyond |n| = 40 changes nothing at |x| = 1
  const Vec2 x{std::cos(0.7), std::sin(0.7)};
  const Complex narrow = kr_truncated(spec, {1.3, -40, 40}, x);
  const Complex wide = kr_truncated(spec, {1.3, -60, 60}, x);
  CHECK(std::abs(narrow - wide) <= 1e-10);
  CHECK(kr_tail_bound(spec, {1.3, -40, 40}, 1.0) <= 1e-10);
}

TEST_CASE("kr rejects the origin and bad windows") {
  const KernelSpec spec = KernelSpec::diagonal(1.0, kPi);
  CHECK_THROWS_AS(kr_truncated(spec, {1.0, -5, 5}, {0.0, 0.0}), OriginNotAllowed);
  CHECK_THROWS_AS(kr_truncated(spec, {1.0, 5, -5}, {1.0, 0.0}), std::invalid_argument);
  CHECK(std::abs(kr_truncated(spec, {1.0, 3, 5}, {100.0, 90.0})) == 0.0);  // outside all supports
}

TEST_CASE("calibre average of the lattice series reproduces the profile") {
  const KernelSpec spec = KernelSpec::new_family(std::sqrt(2.0), kPi / 2, 0.0, kPi, kPi);
  QuadConfig cfg;
  cfg.abs_tol = 1e-11;
  for (int k = 0; k < 8; ++k) {
    const double phi = 0.11 + k * (2.0 * kPi / 8.0);
    const Vec2 x{std::cos(phi), std::sin(phi)};
    // breakpoints in r where some scale's kernel crosses a lattice line
    std::vector<double> breaks;
    for (double rb : kernel_ray_breakpoints(spec, phi, 64.0)) {
      for (int n = -8; n <= 8; ++n) {
        const double r = 1.0 / (rb * std::ldexp(1.0, n));
        if (r > 1.0 && r < 2.0) breaks.push_back(r);
      }
    }
    auto f = [&](double r) {
      return kr_truncated(spec, {r, -45, 45}, x) / r;
    };
    const Complex lhs = integrate_1d_complex(f, 1.0, 2.0, breaks, cfg) / kLog2;
    const Complex rhs = homogenized_profile(spec, phi, cfg);
    CHECK(std::abs(lhs - rhs) <= 1e-8);
  }
}

TEST_CASE("radial kernel is homogeneous of degree -2 by construction") {
  const RadialKernel k(KernelSpec::triangle(0.2, 1.1, 0.9, -0.4));
  Rng rng(33);
  for (int i = 0; i < 10; ++i) {
    const Vec2 x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (std::hypot(x.x, x.y) < 0.1) continue;
    const Complex a = k(x);
    const Complex b = k({2 * x.x, 2 * x.y});
    CHECK(std::abs(b - a / 4.0) <= 1e-12 * std::abs(a));
  }
  CHECK_THROWS_AS(k({0, 0}), OriginNotAllowed);
  // cache does not change values
  const Complex first = k.profile(0.37);
  CHECK(k.profile(0.37) == first);
}

TEST_CASE("rotation-weighted profile integral equals the planar integral") {
  for (const KernelSpec& spec :
       {KernelSpec::new_family(1.0, kPi / 2, 0.0, kPi, kPi), KernelSpec::diagonal(0.8, 1.2),
        KernelSpec::triangle(0.25, 0.9, 0.6, -1.1)}) {
    QuadConfig cfg;
    cfg.abs_tol = 1e-11;
    const RadialKernel k(spec, cfg);
    auto f = [&](double phi) { return k.profile(phi) * std::exp(Complex{0.0, 2.0 * phi}); };
    std::vector<double> breaks;
    for (int i = 1; i < 16; ++i) breaks.push_back(i * kPi / 8.0);
    const Complex lhs = integrate_1d_complex(f, 0.0, 2.0 * kPi, breaks, cfg);
    const Complex rhs = 2.0 * konst_integral_planar(spec, cfg).integral_I;
    CHECK(std::abs(lhs - rhs) <= 1e-7);
  }
}
