#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "haar/geometry.hpp"
#include "haar/quad.hpp"

namespace haar {

enum class System {
  Dyadic1D,       // standard Haar system on intervals
  Orig2D,         // three tensor Haar functions per square
  New2D,          // modified square system (disjoint +/- supports)
  Parallelogram,  // New2D transported to parallelograms (1, b, inclination phi)
  Diagonal2D,     // diagonal-cut system on parallelograms
  Triangle,       // triangle system generated by (0,0),(1,0),(a,b)
  Cube3D,         // seven-function system on cubes
};

const char* system_name(System s);

/// A Haar system together with its geometric parameters.
struct SystemSpec {
  System kind = System::New2D;
  double b = 1.0;
  double phi = 1.5707963267948966;  // Parallelogram / Diagonal2D inclination
  double a = 0.0;                   // Triangle shear

  static SystemSpec dyadic_1d() { return {System::Dyadic1D}; }
  static SystemSpec orig_2d() { return {System::Orig2D}; }
  static SystemSpec new_2d() { return {System::New2D}; }
  static SystemSpec parallelogram(double b, double phi);
  static SystemSpec diagonal(double b, double phi = 1.5707963267948966);
  static SystemSpec triangle(double a, double b);
  static SystemSpec cube_3d() { return {System::Cube3D}; }

  int dimension() const;
  int children() const;  // subcells per cell
  int kinds() const;     // Haar functions per cell
  void validate() const;

  /// Reference-to-plane transport (2-D systems; identity for the others).
  Affine2 transport() const;
  /// |det| of the transport (1 for untransported systems).
  double transport_det() const;
};

/// One cell of a dyadic lattice. `scale` n means cell edges of length 2^n in
/// reference coordinates; `index` addresses the lattice position. The `down`
/// flag distinguishes the point-reflected triangles and must be false for
/// every other system.
struct LatticeId {
  System system = System::New2D;
  int scale = 0;
  std::array<std::int64_t, 3> index{0, 0, 0};
  bool down = false;

  friend auto operator<=>(const LatticeId&, const LatticeId&) = default;

  static LatticeId unit(System s) { return {s, 0, {0, 0, 0}, false}; }
};

struct HaarAtom {
  LatticeId cell;
  int kind = 0;
  int generation = 0;  // generations below the enumeration root

  friend auto operator<=>(const HaarAtom&, const HaarAtom&) = default;
};

class ResolutionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sign pattern for the atom values on the children of a cell. Entries are
/// scaled so that sum_c table^2 = children; the atom value on child c is
/// table(kind, c) / sqrt(cell measure).
double atom_table(System sys, int kind, int child);

LatticeId child_cell(const SystemSpec& spec, const LatticeId& cell, int child);
double cell_measure(const SystemSpec& spec, const LatticeId& cell);

/// All atoms supported in root with scales within `depth` generations,
/// ordered by generation, then cell (child-path order), then kind.
std::vector<HaarAtom> atoms_in(const SystemSpec& spec, const LatticeId& root, int depth);

/// Value of the normalized Haar function at a point (true coordinates;
/// unused coordinates of `point` are ignored). Zero outside the cell.
double eval_atom(const SystemSpec& spec, const HaarAtom& atom, std::array<double, 3> point);

/// Piecewise-constant function on the dyadic refinement of a root cell.
/// Values are stored in child-path order (depth-first digits), which makes
/// every lattice cell a contiguous value range.
class StepFunction {
 public:
  enum class Layout { Grid1D, Grid2D, Grid3D, TriMesh };

  static StepFunction on_cell(const SystemSpec& spec, const LatticeId& root, int level);
  /// Dense row-major 2-D grid (x fastest), n x n cells with n = 2^level.
  static StepFunction from_grid2d(Vec2 lo, double h, int n, std::vector<Complex> row_major,
                                  double measure_scale = 1.0);

  Layout layout() const { return layout_; }
  int level() const { return level_; }
  std::size_t leaf_count() const { return values_.size(); }
  double leaf_measure() const { return leaf_measure_; }
  double total_measure() const { return leaf_measure_ * static_cast<double>(values_.size()); }

  std::vector<Complex>& values() { return values_; }
  const std::vector<Complex>& values() const { return values_; }

  Vec2 grid_lo() const { return {lo_[0], lo_[1]}; }
  double grid_h() const { return h_; }
  int grid_n() const;  // cells per axis
  std::vector<Complex> to_grid2d_row_major() const;

  const LatticeId& root() const { return root_; }

  /// Point evaluation (true coordinates); 0 outside the domain.
  Complex eval(const SystemSpec& spec, std::array<double, 3> point) const;

  Complex integral() const;
  Complex mean() const { return integral() / total_measure(); }
  void subtract_mean();
  double lp_norm(double p) const;
  double max_abs() const;

  void add_scaled(const StepFunction& other, Complex factor);
  void scale(Complex factor);
  double max_abs_diff(const StepFunction& other) const;

 private:
  StepFunction() = default;
  Layout layout_ = Layout::Grid2D;
  int level_ = 0;
  std::array<double, 3> lo_{0, 0, 0};
  double h_ = 1.0;             // leaf spacing in reference coordinates (grids)
  LatticeId root_;             // refinement root
  double leaf_measure_ = 1.0;  // true measure per leaf
  std::vector<Complex> values_;

  friend StepFunction make_step_like(const StepFunction&);
};

struct Decomposition {
  std::vector<HaarAtom> atoms;
  std::vector<Complex> coeffs;

  Complex at(const HaarAtom& a) const;
};

/// Exact Haar coefficients <f, h> over all atoms down to `depth` generations.
Decomposition decompose(const SystemSpec& spec, const StepFunction& f, const LatticeId& root,
                        int depth);

/// Sum of coeff * atom sampled on the refinement at `level`.
StepFunction reconstruct(const SystemSpec& spec, const LatticeId& root, int level,
                         const Decomposition& d);

struct GramReport {
  double max_offdiag = 0.0;
  double max_norm_dev = 0.0;
};

/// Pairwise exact inner products of all atoms down to `depth` generations.
GramReport gram_check(const SystemSpec& spec, const LatticeId& root, int depth);

/// Cellwise i.i.d. standard complex Gaussians with the mean removed.
StepFunction random_mean_zero(const SystemSpec& spec, const LatticeId& root, int level, Rng& rng);

}  // namespace haar
