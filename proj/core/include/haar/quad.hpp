#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "haar/geometry.hpp"

namespace haar {

using Complex = std::complex<double>;

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdiv = 20;
  int gl_order = 16;

  void validate() const;
};

struct McConfig {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Tolerance not reached within the subdivision budget. Carries the best
/// estimate together with the error actually achieved.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(Complex best, double achieved, double requested);
  Complex best_estimate() const { return best_; }
  double achieved_error() const { return achieved_; }
  double requested_tolerance() const { return requested_; }

 private:
  Complex best_;
  double achieved_;
  double requested_;
};

class DegenerateRegion : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gauss-Legendre nodes/weights on [-1,1]; cached per order, thread safe.
const std::vector<double>& gl_nodes(int order);
const std::vector<double>& gl_weights(int order);

/// Integrates f over [a,b], pre-splitting at the supplied breakpoints and
/// refining each segment adaptively with Gauss-Legendre panels.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    std::span<const double> breakpoints, const QuadConfig& cfg = {});

Complex integrate_1d_complex(const std::function<Complex(double)>& f, double a, double b,
                             std::span<const double> breakpoints, const QuadConfig& cfg = {});

struct PolygonQuadStats {
  double err_est = 0.0;
  long cells_used = 0;
};

/// Integrates f over a polygonal region. The region is first split along the
/// axis-aligned lattice of the given spacing so that piecewise integrands are
/// smooth per cell; each piece is then refined adaptively (tensor rule on
/// rectangles, collapsed-square rule on triangles).
Complex integrate_polygon(const std::function<Complex(double, double)>& f, const Polygon& region,
                          double breaklines, const QuadConfig& cfg = {},
                          PolygonQuadStats* stats = nullptr);

struct McEstimate {
  Complex value{};
  double std_error = 0.0;
};

/// Plain Monte-Carlo over a polygon; sampling by rejection from the bounding
/// box. Identical (seed, samples) give bit-identical results.
McEstimate mc_integrate(const std::function<Complex(double, double)>& f, const Polygon& region,
                        const McConfig& cfg);

/// Minimal deterministic RNG used everywhere randomness is needed. The
/// uniform/normal draws are written out explicitly so sequences do not depend
/// on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform01();                       // in [0,1)
  double uniform(double a, double b);
  Complex standard_normal_complex();        // independent N(0,1) re/im

  /// Derives an independent child stream (for per-trial seeding).
  Rng child(std::uint64_t index) const;

 private:
  std::uint64_t s_[4];
};

}  // namespace haar
