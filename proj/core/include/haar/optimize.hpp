#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "haar/constants.hpp"

namespace haar {

enum class SearchFamily {
  New,       // parameters (b, phi); sigma fixed at (1, -1, -1)
  NewSigma,  // fixed (b, phi); enumerates the sigma0 = 1 sign patterns
  Diagonal,  // parameters (b, theta)
  Triangle,  // parameters (a, b, arg sigma+, arg sigma-)
};

const char* search_family_name(SearchFamily f);

struct SearchSpec {
  SearchFamily family = SearchFamily::New;
  std::vector<std::array<double, 2>> bounds;  // per-parameter [lo, hi]
  int grid = 12;                              // scan points per axis
  int stages = 2;                             // 1 = scan only, then simplex refinements
  std::uint64_t seed = 0;
  QuadConfig quad{};

  void validate() const;
  std::size_t param_count() const;
  std::vector<std::string> param_names() const;
};

struct Evaluation {
  std::vector<double> params;
  Complex integral_I{};
  double C = 0.0;
  double err_est = 0.0;
  bool degenerate = false;
};

struct SearchResult {
  std::vector<double> best_params;
  double best_C = 0.0;
  std::vector<double> stage_best_C;  // best C after each stage
  std::vector<Evaluation> log;
};

/// Coarse grid scan followed by downhill-simplex refinement around the best
/// admissible point. Deterministic for a fixed spec; degenerate sign patterns
/// are logged but never reported as winners.
SearchResult search(const SearchSpec& spec);

/// Single evaluation of the family objective at explicit parameters.
Evaluation evaluate_point(const SearchSpec& spec, const std::vector<double>& params);

/// Evaluation log as CSV (sorted by C ascending), and a JSON summary that
/// echoes the best entry verbatim.
std::string log_csv(const SearchSpec& spec, const SearchResult& result);
std::string summary_json(const SearchSpec& spec, const SearchResult& result);

/// Downhill simplex minimizer (parameter tolerance 1e-5, function tolerance
/// 1e-9, at most 500 iterations). Exposed for reuse and testing.
struct SimplexOptions {
  double param_tol = 1e-5;
  double fn_tol = 1e-9;
  int max_iter = 500;
};

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                                std::vector<double> start, double step,
                                const SimplexOptions& opt = {});

}  // namespace haar
