#include "haar/basis.hpp"

#include <algorithm>
#include <cmath>

namespace haar {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt2 = 1.4142135623730950488;

double pow2(int n) { return std::ldexp(1.0, n); }
}  // namespace

const char* system_name(System s) {
  switch (s) {
    case System::Dyadic1D: return "dyadic-1d";
    case System::Orig2D: return "orig-2d";
    case System::New2D: return "new-2d";
    case System::Parallelogram: return "parallelogram";
    case System::Diagonal2D: return "diagonal";
    case System::Triangle: return "triangle";
    case System::Cube3D: return "cube-3d";
  }
  return "?";
}

SystemSpec SystemSpec::parallelogram(double b, double phi) {
  SystemSpec s{System::Parallelogram, b, phi, 0.0};
  s.validate();
  return s;
}

SystemSpec SystemSpec::diagonal(double b, double phi) {
  SystemSpec s{System::Diagonal2D, b, phi, 0.0};
  s.validate();
  return s;
}

SystemSpec SystemSpec::triangle(double a, double b) {
  SystemSpec s{System::Triangle, b, 0.0, a};
  s.validate();
  return s;
}

int SystemSpec::dimension() const {
  switch (kind) {
    case System::Dyadic1D: return 1;
    case System::Cube3D: return 3;
    default: return 2;
  }
}

int SystemSpec::children() const {
  switch (kind) {
    case System::Dyadic1D: return 2;
    case System::Cube3D: return 8;
    default: return 4;
  }
}

int SystemSpec::kinds() const {
  switch (kind) {
    case System::Dyadic1D: return 1;
    case System::Cube3D: return 7;
    default: return 3;
  }
}

void SystemSpec::validate() const {
  if (kind == System::Parallelogram || kind == System::Diagonal2D) {
    if (!(b > 0.0)) throw std::invalid_argument("SystemSpec: b must be > 0");
    if (!(phi > 0.0 && phi < kPi)) throw std::invalid_argument("SystemSpec: phi must be in (0,pi)");
  }
  if (kind == System::Triangle && !(b > 0.0))
    throw std::invalid_argument("SystemSpec: triangle b must be > 0");
}

Affine2 SystemSpec::transport() const {
  switch (kind) {
    case System::Parallelogram:
    case System::Diagonal2D: return Affine2::parallelogram(b, phi);
    case System::Triangle: return Affine2::triangle_shear(a, b);
    default: return Affine2::identity();
  }
}

double SystemSpec::transport_det() const { return std::abs(transport().det()); }

double atom_table(System sys, int kind, int child) {
  switch (sys) {
    case System::Dyadic1D: {
      static const double t[1][2] = {{-1, 1}};
      return t[kind][child];
    }
    case System::Orig2D: {
      // children: c = ix + 2*iy  (ll, lr, ul, ur)
      static const double t[3][4] = {
          {-1, -1, 1, 1},  // type 1: sign of the upper/lower half
          {-1, 1, -1, 1},  // type 2: left/right
          {1, -1, -1, 1},  // type 3: checkerboard
      };
      return t[kind][child];
    }
    case System::New2D:
    case System::Parallelogram: {
      static const double t[3][4] = {
          {-1, -1, 1, 1},              // h_{Q0}
          {0, 0, -kSqrt2, kSqrt2},     // h_{Q+} (upper half)
          {-kSqrt2, kSqrt2, 0, 0},     // h_{Q-} (lower half)
      };
      return t[kind][child];
    }
    case System::Diagonal2D: {
      static const double t[3][4] = {
          {1, -1, -1, 1},              // h^d_{Q0} = checkerboard
          {-kSqrt2, 0, 0, kSqrt2},     // h^d_{Q+} (main diagonal)
          {0, -kSqrt2, kSqrt2, 0},     // h^d_{Q-} (antidiagonal)
      };
      return t[kind][child];
    }
    case System::Triangle: {
      // children: ll, right, top, mid
      static const double t[3][4] = {
          {1, -1, -1, 1},              // h_0: + on the half-square
          {0, -kSqrt2, kSqrt2, 0},     // h_+: corners
          {kSqrt2, 0, 0, -kSqrt2},     // h_-: half-square split
      };
      return t[kind][child];
    }
    case System::Cube3D: {
      // children: c = ix + 2*iy + 4*iz
      static const double s = kSqrt2;
      static const double t[7][8] = {
          {1, 1, 1, 1, -1, -1, -1, -1},  // bottom minus top z-slab
          {s, s, -s, -s, 0, 0, 0, 0},    // y-split of the bottom slab
          {0, 0, 0, 0, s, s, -s, -s},    // y-split of the top slab
          {2, -2, 0, 0, 0, 0, 0, 0},     // x-splits of the four y-rows
          {0, 0, 2, -2, 0, 0, 0, 0},
          {0, 0, 0, 0, 2, -2, 0, 0},
          {0, 0, 0, 0, 0, 0, 2, -2},
      };
      return t[kind][child];
    }
  }
  return 0.0;
}

LatticeId child_cell(const SystemSpec& spec, const LatticeId& cell, int child) {
  LatticeId c = cell;
  c.scale -= 1;
  switch (spec.kind) {
    case System::Dyadic1D:
      c.index[0] = 2 * cell.index[0] + child;
      return c;
    case System::Cube3D:
      c.index[0] = 2 * cell.index[0] + (child & 1);
      c.index[1] = 2 * cell.index[1] + ((child >> 1) & 1);
      c.index[2] = 2 * cell.index[2] + ((child >> 2) & 1);
      return c;
    case System::Triangle: {
      const std::int64_t i = cell.index[0], j = cell.index[1];
      if (!cell.down) {
        switch (child) {
          case 0: c.index = {2 * i, 2 * j, 0}; c.down = false; break;
          case 1: c.index = {2 * i + 1, 2 * j, 0}; c.down = false; break;
          case 2: c.index = {2 * i, 2 * j + 1, 0}; c.down = false; break;
          default: c.index = {2 * i, 2 * j, 0}; c.down = true; break;
        }
      } else {
        switch (child) {
          case 0: c.index = {2 * i + 1, 2 * j + 1, 0}; c.down = true; break;
          case 1: c.index = {2 * i, 2 * j + 1, 0}; c.down = true; break;
          case 2: c.index = {2 * i + 1, 2 * j, 0}; c.down = true; break;
          default: c.index = {2 * i + 1, 2 * j + 1, 0}; c.down = false; break;
        }
      }
      return c;
    }
    default:
      c.index[0] = 2 * cell.index[0] + (child & 1);
      c.index[1] = 2 * cell.index[1] + ((child >> 1) & 1);
      return c;
  }
}

double cell_measure(const SystemSpec& spec, const LatticeId& cell) {
  const double ref = [&] {
    switch (spec.dimension()) {
      case 1: return pow2(cell.scale);
      case 3: return pow2(3 * cell.scale);
      default: {
        const double area = pow2(2 * cell.scale);
        return spec.kind == System::Triangle ? 0.5 * area : area;
      }
    }
  }();
  return ref * spec.transport_det();
}

std::vector<HaarAtom> atoms_in(const SystemSpec& spec, const LatticeId& root, int depth) {
  spec.validate();
  if (depth < 0) throw std::invalid_argument("atoms_in: depth must be >= 0");
  if (root.down && spec.kind != System::Triangle)
    throw std::invalid_argument("atoms_in: orientation is only valid for triangle cells");
  std::vector<HaarAtom> out;
  std::vector<LatticeId> gen{root};
  const int kinds = spec.kinds();
  const int kids = spec.children();
  for (int g = 0; g < depth; ++g) {
    out.reserve(out.size() + gen.size() * static_cast<std::size_t>(kinds));
    for (const LatticeId& cell : gen) {
      for (int k = 0; k < kinds; ++k) out.push_back({cell, k, g});
    }
    if (g + 1 < depth) {
      std::vector<LatticeId> next;
      next.reserve(gen.size() * static_cast<std::size_t>(kids));
      for (const LatticeId& cell : gen) {
        for (int c = 0; c < kids; ++c) next.push_back(child_cell(spec, cell, c));
      }
      gen = std::move(next);
    }
  }
  return out;
}

namespace {

// Locates the child of the half-open reference triangle containing (x,y),
// both already expressed in the cell's own frame.
int triangle_child_of(double x, double y) {
  if (x + y < 0.5) return 0;
  if (x >= 0.5) return 1;
  if (y >= 0.5) return 2;
  return 3;
}

// Maps a point in true coordinates to the local frame of a lattice cell.
// Returns false when the point lies outside the (half-open) cell.
bool cell_local(const SystemSpec& spec, const LatticeId& cell, std::array<double, 3> point,
                std::array<double, 3>& local) {
  const double s = pow2(cell.scale);
  switch (spec.kind) {
    case System::Dyadic1D: {
      const double u = point[0] / s - static_cast<double>(cell.index[0]);
      if (u < 0.0 || u >= 1.0) return false;
      local = {u, 0, 0};
      return true;
    }
    case System::Cube3D: {
      for (int d = 0; d < 3; ++d) {
        const double u = point[static_cast<std::size_t>(d)] / s -
                         static_cast<double>(cell.index[static_cast<std::size_t>(d)]);
        if (u < 0.0 || u >= 1.0) return false;
        local[static_cast<std::size_t>(d)] = u;
      }
      return true;
    }
    case System::Triangle: {
      const Affine2 inv = spec.transport().inverse();
      const Vec2 r = inv({point[0], point[1]});
      double u = r.x / s - static_cast<double>(cell.index[0]);
      double v = r.y / s - static_cast<double>(cell.index[1]);
      if (cell.down) {
        u = 1.0 - u;
        v = 1.0 - v;
      }
      if (u < 0.0 || v < 0.0 || u + v >= 1.0) return false;
      local = {u, v, 0};
      return true;
    }
    default: {
      const Affine2 inv = spec.transport().inverse();
      const Vec2 r = inv({point[0], point[1]});
      const double u = r.x / s - static_cast<double>(cell.index[0]);
      const double v = r.y / s - static_cast<double>(cell.index[1]);
      if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) return false;
      local = {u, v, 0};
      return true;
    }
  }
}

int child_of_local(const SystemSpec& spec, std::array<double, 3> local) {
  switch (spec.kind) {
    case System::Dyadic1D: return local[0] >= 0.5 ? 1 : 0;
    case System::Cube3D:
      return (local[0] >= 0.5 ? 1 : 0) + (local[1] >= 0.5 ? 2 : 0) + (local[2] >= 0.5 ? 4 : 0);
    case System::Triangle: return triangle_child_of(local[0], local[1]);
    default: return (local[0] >= 0.5 ? 1 : 0) + (local[1] >= 0.5 ? 2 : 0);
  }
}

std::array<double, 3> descend_local(const SystemSpec& spec, std::array<double, 3> local,
                                    int child) {
  if (spec.kind == System::Triangle) {
    switch (child) {
      case 0: return {2 * local[0], 2 * local[1], 0};
      case 1: return {2 * (local[0] - 0.5), 2 * local[1], 0};
      case 2: return {2 * local[0], 2 * (local[1] - 0.5), 0};
      default: return {1 - 2 * local[0], 1 - 2 * local[1], 0};
    }
  }
  std::array<double, 3> out{};
  for (int d = 0; d < spec.dimension(); ++d) {
    const bool hi = ((child >> d) & 1) != 0;
    out[static_cast<std::size_t>(d)] =
        2 * local[static_cast<std::size_t>(d)] - (hi ? 1.0 : 0.0);
  }
  return out;
}

}  // namespace

double eval_atom(const SystemSpec& spec, const HaarAtom& atom, std::array<double, 3> point) {
  std::array<double, 3> local;
  if (!cell_local(spec, atom.cell, point, local)) return 0.0;
  const int child = child_of_local(spec, local);
  return atom_table(spec.kind, atom.kind, child) / std::sqrt(cell_measure(spec, atom.cell));
}

// ---- StepFunction ----

StepFunction StepFunction::on_cell(const SystemSpec& spec, const LatticeId& root, int level) {
  spec.validate();
  if (level < 0) throw std::invalid_argument("StepFunction: level must be >= 0");
  StepFunction f;
  f.root_ = root;
  f.level_ = level;
  const int dim = spec.dimension();
  f.layout_ = spec.kind == System::Triangle
                  ? Layout::TriMesh
                  : (dim == 1 ? Layout::Grid1D : (dim == 3 ? Layout::Grid3D : Layout::Grid2D));
  const double s = pow2(root.scale);
  f.h_ = s / pow2(level);
  for (int d = 0; d < dim; ++d)
    f.lo_[static_cast<std::size_t>(d)] =
        s * static_cast<double>(root.index[static_cast<std::size_t>(d)]);
  const std::size_t leaves =
      static_cast<std::size_t>(std::llround(std::pow(spec.children(), level)));
  f.leaf_measure_ = cell_measure(spec, root) / static_cast<double>(leaves);
  f.values_.assign(leaves, Complex{});
  return f;
}

StepFunction StepFunction::from_grid2d(Vec2 lo, double h, int n, std::vector<Complex> row_major,
                                       double measure_scale) {
  if (n <= 0 || (n & (n - 1)) != 0)
    throw ResolutionMismatch("StepFunction: grid side must be a power of two");
  if (row_major.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw ResolutionMismatch("StepFunction: value count does not match nx*ny");
  if (!(h > 0.0)) throw std::invalid_argument("StepFunction: spacing must be > 0");
  StepFunction f;
  f.layout_ = Layout::Grid2D;
  f.level_ = static_cast<int>(std::lround(std::log2(n)));
  f.lo_ = {lo.x, lo.y, 0.0};
  f.h_ = h;
  f.leaf_measure_ = h * h * measure_scale;
  f.root_ = LatticeId::unit(System::New2D);
  f.values_.assign(row_major.size(), Complex{});
  // row-major -> child-path order
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      std::size_t path = 0;
      for (int bit = f.level_ - 1; bit >= 0; --bit) {
        path = path * 4 + static_cast<std::size_t>(((ix >> bit) & 1) + 2 * ((iy >> bit) & 1));
      }
      f.values_[path] = row_major[static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(ix)];
    }
  }
  return f;
}

int StepFunction::grid_n() const { return 1 << level_; }

std::vector<Complex> StepFunction::to_grid2d_row_major() const {
  if (layout_ != Layout::Grid2D)
    throw std::logic_error("StepFunction: not a 2-D grid");
  const int n = grid_n();
  std::vector<Complex> out(values_.size());
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      std::size_t path = 0;
      for (int bit = level_ - 1; bit >= 0; --bit) {
        path = path * 4 + static_cast<std::size_t>(((ix >> bit) & 1) + 2 * ((iy >> bit) & 1));
      }
      out[static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) +
          static_cast<std::size_t>(ix)] = values_[path];
    }
  }
  return out;
}

Complex StepFunction::eval(const SystemSpec& spec, std::array<double, 3> point) const {
  std::array<double, 3> local;
  if (layout_ == Layout::TriMesh) {
    if (!cell_local(spec, root_, point, local)) return Complex{};
  } else {
    const Affine2 inv = spec.transport().inverse();
    Vec2 r{point[0], point[1]};
    if (spec.dimension() == 2) r = inv(r);
    const double len = h_ * pow2(level_);
    const std::array<double, 3> p{r.x, spec.dimension() >= 2 ? r.y : 0.0, point[2]};
    for (int d = 0; d < spec.dimension(); ++d) {
      const double u = (p[static_cast<std::size_t>(d)] - lo_[static_cast<std::size_t>(d)]) / len;
      if (u < 0.0 || u >= 1.0) return Complex{};
      local[static_cast<std::size_t>(d)] = u;
    }
  }
  std::size_t idx = 0;
  const std::size_t kids = static_cast<std::size_t>(spec.children());
  for (int g = 0; g < level_; ++g) {
    const int c = child_of_local(spec, local);
    idx = idx * kids + static_cast<std::size_t>(c);
    local = descend_local(spec, local, c);
  }
  return values_[idx];
}

Complex StepFunction::integral() const {
  Complex s{};
  for (const Complex& v : values_) s += v;
  return s * leaf_measure_;
}

void StepFunction::subtract_mean() {
  const Complex m = mean();
  for (Complex& v : values_) v -= m;
}

double StepFunction::lp_norm(double p) const {
  double s = 0.0;
  for (const Complex& v : values_) s += std::pow(std::abs(v), p);
  return std::pow(s * leaf_measure_, 1.0 / p);
}

double StepFunction::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

void StepFunction::add_scaled(const StepFunction& other, Complex factor) {
  if (other.values_.size() != values_.size())
    throw ResolutionMismatch("StepFunction: mismatched leaf counts");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += factor * other.values_[i];
}

void StepFunction::scale(Complex factor) {
  for (Complex& v : values_) v *= factor;
}

double StepFunction::max_abs_diff(const StepFunction& other) const {
  if (other.values_.size() != values_.size())
    throw ResolutionMismatch("StepFunction: mismatched leaf counts");
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    m = std::max(m, std::abs(values_[i] - other.values_[i]));
  return m;
}

// ---- decomposition ----

namespace {

void check_compatible(const SystemSpec& spec, const StepFunction& f, const LatticeId& root,
                      int depth) {
  spec.validate();
  if (depth < 0) throw std::invalid_argument("decompose: depth must be >= 0");
  if (f.level() < depth)
    throw ResolutionMismatch("decompose: function resolution below lattice depth");
  const bool tri = spec.kind == System::Triangle;
  if (tri != (f.layout() == StepFunction::Layout::TriMesh))
    throw ResolutionMismatch("decompose: function layout does not match system");
  if (tri) {
    if (!(f.root() == root)) throw ResolutionMismatch("decompose: function not on the root cell");
    return;
  }
  if ((spec.dimension() == 1) != (f.layout() == StepFunction::Layout::Grid1D) ||
      (spec.dimension() == 3) != (f.layout() == StepFunction::Layout::Grid3D))
    throw ResolutionMismatch("decompose: function layout does not match system");
  const double s = pow2(root.scale);
  const double len = f.grid_h() * pow2(f.level());
  if (std::abs(len - s) > 1e-9 * s)
    throw ResolutionMismatch("decompose: function domain does not match the root cell");
  for (int d = 0; d < spec.dimension(); ++d) {
    const double lo = d == 0 ? f.grid_lo().x : f.grid_lo().y;
    if (spec.dimension() >= d + 1 && d < 2) {
      const double want = s * static_cast<double>(root.index[static_cast<std::size_t>(d)]);
      if (std::abs(lo - want) > 1e-9 * std::max(1.0, s))
        throw ResolutionMismatch("decompose: function domain does not match the root cell");
    }
  }
}

}  // namespace

Complex Decomposition::at(const HaarAtom& a) const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] == a) return coeffs[i];
  }
  return Complex{};
}

Decomposition decompose(const SystemSpec& spec, const StepFunction& f, const LatticeId& root,
                        int depth) {
  check_compatible(spec, f, root, depth);
  Decomposition d;
  d.atoms = atoms_in(spec, root, depth);
  d.coeffs.resize(d.atoms.size());

  const std::size_t kids = static_cast<std::size_t>(spec.children());
  // cell integrals, level by level (leaf level first)
  std::vector<std::vector<Complex>> sums(static_cast<std::size_t>(f.level()) + 1);
  auto& leaf_sums = sums[static_cast<std::size_t>(f.level())];
  leaf_sums.resize(f.leaf_count());
  const double lm = f.leaf_measure();
  for (std::size_t i = 0; i < f.leaf_count(); ++i) leaf_sums[i] = f.values()[i] * lm;
  for (int g = f.level() - 1; g >= 0; --g) {
    auto& cur = sums[static_cast<std::size_t>(g)];
    const auto& fine = sums[static_cast<std::size_t>(g) + 1];
    cur.resize(fine.size() / kids);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      Complex s{};
      for (std::size_t c = 0; c < kids; ++c) s += fine[i * kids + c];
      cur[i] = s;
    }
  }

  const int kinds = spec.kinds();
  std::size_t pos = 0;
  for (int g = 0; g < depth; ++g) {
    const auto& child_sums = sums[static_cast<std::size_t>(g) + 1];
    const std::size_t cells = sums[static_cast<std::size_t>(g)].size();
    const double inv_sqrt =
        1.0 / std::sqrt(f.leaf_measure() * std::pow(static_cast<double>(kids),
                                                    static_cast<double>(f.level() - g)));
    for (std::size_t cell = 0; cell < cells; ++cell) {
      for (int k = 0; k < kinds; ++k) {
        Complex s{};
        for (std::size_t c = 0; c < kids; ++c)
          s += atom_table(spec.kind, k, static_cast<int>(c)) * child_sums[cell * kids + c];
        d.coeffs[pos++] = s * inv_sqrt;
      }
    }
  }
  return d;
}

StepFunction reconstruct(const SystemSpec& spec, const LatticeId& root, int level,
                         const Decomposition& d) {
  StepFunction f = StepFunction::on_cell(spec, root, level);
  const std::size_t kids = static_cast<std::size_t>(spec.children());
  for (std::size_t i = 0; i < d.atoms.size(); ++i) {
    const HaarAtom& a = d.atoms[i];
    const int g = a.generation;
    if (g + 1 > level) throw ResolutionMismatch("reconstruct: level below atom depth");
    const double scale = 1.0 / std::sqrt(cell_measure(spec, a.cell));
    // locate the cell's leaf range from its enumeration position
    // cells at generation g are contiguous blocks of kids^(level-g) leaves
    std::size_t cell_pos = 0;
    {
      // recover the path-order position of this atom's cell within its generation
      // atoms are ordered generation-major, cell-major, kind-minor
      std::size_t before = 0;
      for (int gg = 0; gg < g; ++gg)
        before += static_cast<std::size_t>(std::pow(static_cast<double>(kids), gg)) *
                  static_cast<std::size_t>(spec.kinds());
      cell_pos = (i - before) / static_cast<std::size_t>(spec.kinds());
    }
    const std::size_t block =
        static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(kids),
                                                       static_cast<double>(level - g - 1))));
    for (std::size_t c = 0; c < kids; ++c) {
      const Complex add =
          d.coeffs[i] * (atom_table(spec.kind, a.kind, static_cast<int>(c)) * scale);
      if (add == Complex{}) continue;
      const std::size_t start = (cell_pos * kids + c) * block;
      for (std::size_t l = 0; l < block; ++l) f.values()[start + l] += add;
    }
  }
  return f;
}

GramReport gram_check(const SystemSpec& spec, const LatticeId& root, int depth) {
  spec.validate();
  const auto atoms = atoms_in(spec, root, depth);
  if (atoms.empty()) return {};
  const std::size_t kids = static_cast<std::size_t>(spec.children());
  const int level = depth;  // atoms at generation depth-1 are constant on level-depth cells

  // leaf ranges and per-child values for every atom
  struct Entry {
    std::size_t start, len;  // leaf range
    std::vector<double> vals;  // one value per leaf in range
  };
  std::vector<Entry> entries;
  entries.reserve(atoms.size());
  std::size_t pos = 0;
  for (int g = 0; g < depth; ++g) {
    const std::size_t cells =
        static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(kids), g)));
    const std::size_t block = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(kids), level - g)));
    for (std::size_t cell = 0; cell < cells; ++cell) {
      for (int k = 0; k < spec.kinds(); ++k) {
        const HaarAtom& a = atoms[pos++];
        Entry e;
        e.start = cell * block;
        e.len = block;
        e.vals.resize(block);
        const double scale = 1.0 / std::sqrt(cell_measure(spec, a.cell));
        const std::size_t child_block = block / kids;
        for (std::size_t c = 0; c < kids; ++c) {
          const double v = atom_table(spec.kind, a.kind, static_cast<int>(c)) * scale;
          for (std::size_t l = 0; l < child_block; ++l) e.vals[c * child_block + l] = v;
        }
        entries.push_back(std::move(e));
      }
    }
  }

  const double leaf_measure =
      cell_measure(spec, root) /
      static_cast<double>(std::llround(std::pow(static_cast<double>(kids), level)));
  GramReport rep;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i; j < entries.size(); ++j) {
      const Entry& a = entries[i];
      const Entry& b = entries[j];
      const std::size_t lo = std::max(a.start, b.start);
      const std::size_t hi = std::min(a.start + a.len, b.start + b.len);
      double ip = 0.0;
      for (std::size_t l = lo; l < hi; ++l)
        ip += a.vals[l - a.start] * b.vals[l - b.start];
      ip *= leaf_measure;
      if (i == j)
        rep.max_norm_dev = std::max(rep.max_norm_dev, std::abs(ip - 1.0));
      else
        rep.max_offdiag = std::max(rep.max_offdiag, std::abs(ip));
    }
  }
  return rep;
}

StepFunction random_mean_zero(const SystemSpec& spec, const LatticeId& root, int level, Rng& rng) {
  StepFunction f = StepFunction::on_cell(spec, root, level);
  for (Complex& v : f.values()) v = rng.standard_normal_complex();
  f.subtract_mean();
  return f;
}

}  // namespace haar
