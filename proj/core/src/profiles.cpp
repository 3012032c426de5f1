#include "haar/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace haar {

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> breakpoints,
                                     std::vector<double> node_values)
    : breaks_(std::move(breakpoints)), values_(std::move(node_values)) {
  if (breaks_.size() < 2 || breaks_.size() != values_.size())
    throw std::invalid_argument("PiecewiseLinearFn: need matching breakpoints/values, >= 2");
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (!(breaks_[i - 1] < breaks_[i]))
      throw std::invalid_argument("PiecewiseLinearFn: breakpoints must be strictly increasing");
  }
}

double PiecewiseLinearFn::operator()(double x) const {
  if (x < breaks_.front() || x > breaks_.back()) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  if (it == breaks_.end()) return values_.back();
  const std::size_t hi = static_cast<std::size_t>(it - breaks_.begin());
  if (hi == 0) return values_.front();
  const std::size_t lo = hi - 1;
  const double t = (x - breaks_[lo]) / (breaks_[hi] - breaks_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

const PiecewiseLinearFn& alpha_fn() {
  static const PiecewiseLinearFn f({-1.0, -0.5, 0.0, 0.5, 1.0}, {0.0, 0.5, -1.0, 0.5, 0.0});
  return f;
}

const PiecewiseLinearFn& beta_fn() {
  static const PiecewiseLinearFn f({-1.0, -0.5, 0.0, 0.5, 1.0}, {0.0, 0.5, 1.0, 0.5, 0.0});
  return f;
}

const PiecewiseLinearFn& gamma_fn() {
  static const PiecewiseLinearFn f({-1.0, -0.5, 0.0, 0.5, 1.0}, {0.0, -0.5, 0.0, 0.5, 0.0});
  return f;
}

double alpha(double x) {
  const double a = std::abs(x);
  if (a >= 1.0) return 0.0;
  return a <= 0.5 ? 3.0 * a - 1.0 : 1.0 - a;
}

double beta(double x) {
  const double a = std::abs(x);
  return a >= 1.0 ? 0.0 : 1.0 - a;
}

double gamma(double x) {
  const double a = std::abs(x);
  if (a >= 1.0) return 0.0;
  const double v = a <= 0.5 ? a : 1.0 - a;
  return x < 0.0 ? -v : v;
}

double StepFn1D::operator()(double x) const {
  for (const Segment& s : segments) {
    if (x >= s.lo && x < s.hi) return s.value;
  }
  return 0.0;
}

StepFn1D StepFn1D::indicator_unit() { return {{{-0.5, 0.5, 1.0}}}; }

StepFn1D StepFn1D::haar_unit() { return {{{-0.5, 0.0, -1.0}, {0.0, 0.5, 1.0}}}; }

double convolve_steps(const StepFn1D& f, const StepFn1D& g, double x) {
  // (f*g)(x) = sum_{i,j} f_i g_j |[lo_i,hi_i] ∩ [x-hi_j, x-lo_j]|
  double sum = 0.0;
  for (const auto& a : f.segments) {
    for (const auto& b : g.segments) {
      const double lo = std::max(a.lo, x - b.hi);
      const double hi = std::min(a.hi, x - b.lo);
      if (hi > lo) sum += a.value * b.value * (hi - lo);
    }
  }
  return sum;
}

}  // namespace haar
