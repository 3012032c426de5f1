#pragma once

#include "haar/kernels.hpp"
#include "haar/quad.hpp"

namespace haar {

/// Result of evaluating the averaging constant: integral_I is the weighted
/// planar integral of the kernel divided by 2 log 2, and C = 1/|integral_I|.
struct ConstantResult {
  Complex integral_I{};
  double C = 0.0;
  double err_est = 0.0;
  long cells_used = 0;
};

/// Evaluates the constant for any kernel family. Parallelogram kernels are
/// integrated in sheared reference coordinates with half-spacing breaklines;
/// diagonal kernels use the simplified three-integral split; triangle kernels
/// the symmetrized (s+t zeta)/(s+t conj zeta) wedge form.
ConstantResult constant_for(const KernelSpec& spec, const QuadConfig& cfg = {});

/// Generic planar route: integrates eval_kernel * (x+iy)^2/(x^2+y^2) without
/// any family-specific reduction (cross-check path for constant_for).
ConstantResult konst_integral_planar(const KernelSpec& spec, const QuadConfig& cfg = {});

/// Exact value of the parallelogram-family integral at b = sqrt(2),
/// phi = pi/2 from the closed form.
double closed_form_I_sqrt2();

/// Closed form of the unit-square constant,
/// 12 log 2 / (16 pi + 32 log 2 - 15 log 5 - 40 arctan 2).
double closed_form_C_unit();

/// Constant for the diagonal family via the simplified real split.
ConstantResult diagonal_constant(double b, double theta, const QuadConfig& cfg = {});

/// The paper-reduced real form of the parallelogram integral
/// -2 (b sin phi)^2 ∬ F y^2/(x^2 + 2 b cos phi xy + b^2 y^2) for the
/// sigma = (1,-1,-1) kernel. Captures the real part of the generic integral;
/// the imaginary part vanishes only at phi = pi/2.
double reduced_I_parallelogram(double b, double phi, const QuadConfig& cfg = {});

/// True when the sign choice averages the identity projections (all sigmas
/// equal); such parameter points are excluded from optimization.
bool degenerate_sign_choice(const KernelSpec& spec);

}  // namespace haar
