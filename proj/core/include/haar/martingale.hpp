#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "haar/basis.hpp"

namespace haar {

/// Unimodular multiplier per atom kind, with optional per-atom overrides.
/// Averaging-compatible choices must keep the override list empty (the
/// coefficient may not depend on the cell, or homogeneity is lost).
struct SignChoice {
  std::vector<Complex> by_kind;  // one entry per kind
  std::vector<std::pair<HaarAtom, Complex>> overrides;

  static SignChoice uniform(int kinds, Complex value = Complex{1.0, 0.0});
  static SignChoice from_angles(std::vector<double> angles);

  Complex factor(const HaarAtom& atom) const;
  bool averaging_compatible() const { return overrides.empty(); }
  void validate(int kinds) const;  // all moduli 1 (1e-12)
};

/// T_sigma f = sum sigma <f,h> h over all atoms down to `depth`.
StepFunction apply_transform(const SystemSpec& spec, const StepFunction& f,
                             const SignChoice& sigma, int depth);

/// One martingale step: the pair (X_m, Y_m) plus the filtration label.
/// Even labels are generated by the full cells of a generation, odd ones by
/// their kind-0 halves.
struct MartingaleStep {
  StepFunction x;
  StepFunction y;
  int generation = 0;
  bool half_step = false;
};

struct MartingaleRun {
  std::vector<MartingaleStep> steps;
};

/// The two-step filtration scheme: even steps add all kinds of a generation,
/// odd steps add only kind 0 of the next one.
MartingaleRun build_run(const SystemSpec& spec, const StepFunction& f, const SignChoice& sigma,
                        int depth);

/// The obstructed variant that adds all three kinds of a generation per step
/// against the square filtration (for demonstrating the failure).
MartingaleRun build_run_three_kinds(const SystemSpec& spec, const StepFunction& f,
                                    const SignChoice& sigma, int depth);

struct SubordinationReport {
  double max_increment_violation = 0.0;  // max over m, cells of |dY| - |dX|
  double max_measurability_dev = 0.0;    // X_m constant on filtration cells
  double max_condexp_dev = 0.0;          // E(X_{m+1}|F_m) = X_m
};

SubordinationReport check_subordination(const SystemSpec& spec, const MartingaleRun& run);

/// Max over random mean-zero trials of ||T_sigma f||_p / ||f||_p. When
/// `sigma_per_trial` is set, a fresh random unimodular kind pattern is drawn
/// per trial (seeded); otherwise `sigma` is used throughout.
struct NormRatioConfig {
  double p = 2.0;
  int trials = 200;
  std::uint64_t seed = 0;
  int level = 3;
  bool sigma_per_trial = true;
};

double empirical_norm_ratio(const SystemSpec& spec, const SignChoice& sigma,
                            const NormRatioConfig& cfg);

inline double p_star(double p) { return p >= 2.0 ? p : p / (p - 1.0); }

}  // namespace haar
