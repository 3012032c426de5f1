#pragma once

#include <map>
#include <mutex>

#include "haar/basis.hpp"
#include "haar/kernels.hpp"
#include "haar/martingale.hpp"
#include "haar/quad.hpp"

namespace haar {

class OriginNotAllowed : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Monte-Carlo estimate of E_t[P_t f](x): translations t are sampled
/// uniformly over the fundamental domain of the system's unit grid and the
/// finitely many atoms whose cell contains x are summed with their sigma
/// coefficients. Deterministic per (seed, samples).
McEstimate mc_average_translations(const SystemSpec& spec, const SignChoice& sigma,
                                   const StepFunction& f, Vec2 x, const McConfig& cfg);

/// Quadrature route for the same quantity: (F * f)(x) with the analytic
/// averaged kernel F.
Complex convolve_kernel_with_step(const KernelSpec& kernel, const SystemSpec& spec,
                                  const StepFunction& f, Vec2 x, const QuadConfig& cfg = {});

struct SeriesTruncation {
  double r = 1.0;   // calibre
  int m_low = -40;  // summation window for n
  int m_high = 40;

  void validate() const;
};

/// Finite truncation sum_{n=m_low}^{m_high} F^{r 2^n}(x) of the lattice
/// kernel series. Requires x != 0.
Complex kr_truncated(const KernelSpec& spec, const SeriesTruncation& trunc, Vec2 x);

/// Bound on the tail dropped by the truncation at |x| (geometric in the
/// large-scale direction, exactly zero below the support cutoff).
double kr_tail_bound(const KernelSpec& spec, const SeriesTruncation& trunc, double abs_x);

/// Profile of the homogenized kernel on the unit circle:
/// k(e^{i phi}) = (1/log 2) * int_0^inf F(r e^{i phi}) r dr (finite range by
/// compact support; ray breakpoints supplied from the kernel lattice).
Complex homogenized_profile(const KernelSpec& spec, double phi, const QuadConfig& cfg = {});

/// Degree -2 homogeneous kernel determined by its circle profile; profile
/// values are cached per angle.
class RadialKernel {
 public:
  RadialKernel(KernelSpec spec, QuadConfig cfg = {});

  Complex profile(double phi) const;
  Complex operator()(Vec2 x) const;

 private:
  KernelSpec spec_;
  QuadConfig cfg_;
  mutable std::map<double, Complex> cache_;
  mutable std::mutex mutex_;
};

}  // namespace haar
