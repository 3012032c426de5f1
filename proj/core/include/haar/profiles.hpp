#pragma once

#include <vector>

namespace haar {

/// Continuous piecewise-linear function: linear interpolation between node
/// values at strictly increasing breakpoints, zero outside [first, last].
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn(std::vector<double> breakpoints, std::vector<double> node_values);

  double operator()(double x) const;
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& node_values() const { return values_; }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// The three 1-D correlation profiles. All are supported on [-1,1] with
/// breakpoints at multiples of 1/2; alpha and beta are even, gamma is odd.
double alpha(double x);
double beta(double x);
double gamma(double x);

const PiecewiseLinearFn& alpha_fn();
const PiecewiseLinearFn& beta_fn();
const PiecewiseLinearFn& gamma_fn();

/// Piecewise-constant function given by disjoint half-open segments
/// [lo, hi) -> value; zero elsewhere.
struct StepFn1D {
  struct Segment {
    double lo, hi;
    double value;
  };
  std::vector<Segment> segments;

  double operator()(double x) const;

  static StepFn1D indicator_unit();  // characteristic function of [-1/2, 1/2)
  static StepFn1D haar_unit();       // Haar function of [-1/2, 1/2)
};

/// Exact convolution (f*g)(x) of two step functions by interval-overlap
/// arithmetic; no quadrature involved.
double convolve_steps(const StepFn1D& f, const StepFn1D& g, double x);

}  // namespace haar
