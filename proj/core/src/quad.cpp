#include "haar/quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace haar {

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadConfig: abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadConfig: rel_tol must be > 0");
  if (gl_order < 2) throw std::invalid_argument("QuadConfig: gl_order must be >= 2");
  if (max_subdiv < 1) throw std::invalid_argument("QuadConfig: max_subdiv must be >= 1");
}

void McConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("McConfig: samples must be >= 1");
}

NonConvergence::NonConvergence(Complex best, double achieved, double requested)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "quadrature did not reach tolerance " << requested << ": best estimate ("
           << best.real() << "," << best.imag() << "), achieved error " << achieved;
        return os.str();
      }()),
      best_(best),
      achieved_(achieved),
      requested_(requested) {}

namespace {

struct GlRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GlRule compute_gl(int n) {
  GlRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

const GlRule& gl_rule(int order) {
  static std::map<int, GlRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
  return it->second;
}

template <class Value>
Value gl_segment(const std::function<Value(double)>& f, double a, double b, const GlRule& rule) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Value sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(c + h * rule.nodes[i]);
  }
  return h * sum;
}

template <class Value>
struct Accum {
  Value value{};
  double achieved = 0.0;
  bool budget_hit = false;
};

template <class Value>
void adapt_1d(const std::function<Value(double)>& f, double a, double b, double tol, int depth,
              const QuadConfig& cfg, const GlRule& rule, Accum<Value>& acc) {
  const Value coarse = gl_segment(f, a, b, rule);
  const double m = 0.5 * (a + b);
  const Value fine = gl_segment(f, a, m, rule) + gl_segment(f, m, b, rule);
  const double err = std::abs(fine - coarse);
  if (err <= tol || b - a < 1e-15 * std::max(1.0, std::abs(a) + std::abs(b))) {
    acc.value += fine;
    acc.achieved += err;
    return;
  }
  if (depth >= cfg.max_subdiv) {
    acc.value += fine;
    acc.achieved += err;
    acc.budget_hit = true;
    return;
  }
  adapt_1d(f, a, m, 0.5 * tol, depth + 1, cfg, rule, acc);
  adapt_1d(f, m, b, 0.5 * tol, depth + 1, cfg, rule, acc);
}

template <class Value>
Value integrate_1d_impl(const std::function<Value(double)>& f, double a, double b,
                        std::span<const double> breakpoints, const QuadConfig& cfg) {
  cfg.validate();
  if (!(a <= b)) throw std::invalid_argument("integrate_1d: requires a <= b");
  if (a == b) return Value{};
  std::vector<double> pts{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const GlRule& rule = gl_rule(cfg.gl_order);
  Value rough{};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) rough += gl_segment(f, pts[i], pts[i + 1], rule);
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(rough));

  Accum<Value> acc;
  const double total_len = b - a;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double share = (pts[i + 1] - pts[i]) / total_len;
    adapt_1d(f, pts[i], pts[i + 1], tol * share, 0, cfg, rule, acc);
  }
  const double final_tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(acc.value));
  if (acc.budget_hit && acc.achieved > final_tol) {
    Complex best;
    if constexpr (std::is_same_v<Value, double>)
      best = Complex(acc.value, 0.0);
    else
      best = acc.value;
    throw NonConvergence(best, acc.achieved, final_tol);
  }
  return acc.value;
}

}  // namespace

const std::vector<double>& gl_nodes(int order) { return gl_rule(order).nodes; }
const std::vector<double>& gl_weights(int order) { return gl_rule(order).weights; }

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    std::span<const double> breakpoints, const QuadConfig& cfg) {
  return integrate_1d_impl<double>(f, a, b, breakpoints, cfg);
}

Complex integrate_1d_complex(const std::function<Complex(double)>& f, double a, double b,
                             std::span<const double> breakpoints, const QuadConfig& cfg) {
  return integrate_1d_impl<Complex>(f, a, b, breakpoints, cfg);
}

namespace {

using F2 = std::function<Complex(double, double)>;

Complex tensor_rect(const F2& f, Vec2 lo, Vec2 hi, const GlRule& rule) {
  const double cx = 0.5 * (lo.x + hi.x), hx = 0.5 * (hi.x - lo.x);
  const double cy = 0.5 * (lo.y + hi.y), hy = 0.5 * (hi.y - lo.y);
  Complex sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = cx + hx * rule.nodes[i];
    Complex row{};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      row += rule.weights[j] * f(x, cy + hy * rule.nodes[j]);
    }
    sum += rule.weights[i] * row;
  }
  return hx * hy * sum;
}

// Collapsed-square (Duffy) rule on a triangle.
Complex tensor_tri(const F2& f, const std::array<Vec2, 3>& t, const GlRule& rule) {
  const double two_area = cross(t[1] - t[0], t[2] - t[0]);
  Complex sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = 0.5 * (rule.nodes[i] + 1.0);
    const double wu = 0.5 * rule.weights[i];
    Complex row{};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double v = 0.5 * (rule.nodes[j] + 1.0);
      const double wv = 0.5 * rule.weights[j];
      const Vec2 p = (1.0 - u) * t[0] + (u * (1.0 - v)) * t[1] + (u * v) * t[2];
      row += wv * f(p.x, p.y);
    }
    sum += wu * u * row;
  }
  return two_area * sum;
}

// One refinable panel of the global adaptive scheme. Panels are refined
// worst-error-first so that line and point irregularities only attract the
// work they actually need.
struct Panel {
  bool rect;
  Vec2 lo, hi;
  std::array<Vec2, 3> tri;
  int depth;
  Complex value;  // fine (four-child) estimate
  double err;     // |fine - coarse|
  std::uint64_t id;
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.err != b.err) return a.err < b.err;
    return a.id > b.id;  // deterministic tie break
  }
};

bool is_axis_rect(const std::vector<Vec2>& v) {
  if (v.size() != 4) return false;
  const double sx = std::abs(v[0].x) + std::abs(v[1].x) + std::abs(v[2].x) + std::abs(v[3].x);
  const double sy = std::abs(v[0].y) + std::abs(v[1].y) + std::abs(v[2].y) + std::abs(v[3].y);
  const double eps = 1e-13 * std::max(1.0, sx + sy);
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 d = v[(i + 1) % 4] - v[i];
    if (std::abs(d.x) > eps && std::abs(d.y) > eps) return false;
  }
  return true;
}

bool is_convex(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]) < -1e-14) return false;
  }
  return true;
}

struct Piece {
  bool rect;
  Vec2 lo, hi;                  // rect case
  std::array<Vec2, 3> tri;      // triangle case
  double area;
};

void push_piece(std::vector<Piece>& pieces, const std::vector<Vec2>& poly) {
  const double a = polygon_area(poly);
  if (a <= 0.0) return;
  if (is_axis_rect(poly)) {
    Vec2 lo{std::min({poly[0].x, poly[1].x, poly[2].x, poly[3].x}),
            std::min({poly[0].y, poly[1].y, poly[2].y, poly[3].y})};
    Vec2 hi{std::max({poly[0].x, poly[1].x, poly[2].x, poly[3].x}),
            std::max({poly[0].y, poly[1].y, poly[2].y, poly[3].y})};
    pieces.push_back({true, lo, hi, {}, a});
    return;
  }
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const std::array<Vec2, 3> t{poly[0], poly[i], poly[i + 1]};
    const double ta = 0.5 * std::abs(cross(t[1] - t[0], t[2] - t[0]));
    if (ta > 0.0) pieces.push_back({false, {}, {}, t, ta});
  }
}

}  // namespace

Complex integrate_polygon(const F2& f, const Polygon& region, double breaklines,
                          const QuadConfig& cfg, PolygonQuadStats* stats) {
  cfg.validate();
  if (region.area() <= 0.0) throw DegenerateRegion("integrate_polygon: region has zero area");
  if (!(breaklines > 0.0)) throw std::invalid_argument("integrate_polygon: breaklines must be > 0");

  // split along the lattice of spacing `breaklines`
  std::vector<std::vector<Vec2>> convex_parts;
  if (is_convex(region.vertices())) {
    convex_parts.push_back(region.vertices());
  } else {
    for (const auto& t : triangulate(region)) convex_parts.push_back({t[0], t[1], t[2]});
  }

  std::vector<Piece> pieces;
  for (const auto& part : convex_parts) {
    const double ax = polygon_area(part);
    if (ax <= 0.0) continue;
    Box2 bb;
    bb.lo = {part[0].x, part[0].y};
    bb.hi = bb.lo;
    for (Vec2 v : part) {
      bb.lo.x = std::min(bb.lo.x, v.x);
      bb.lo.y = std::min(bb.lo.y, v.y);
      bb.hi.x = std::max(bb.hi.x, v.x);
      bb.hi.y = std::max(bb.hi.y, v.y);
    }
    const long i0 = static_cast<long>(std::floor(bb.lo.x / breaklines - 1e-12));
    const long i1 = static_cast<long>(std::ceil(bb.hi.x / breaklines + 1e-12));
    const long j0 = static_cast<long>(std::floor(bb.lo.y / breaklines - 1e-12));
    const long j1 = static_cast<long>(std::ceil(bb.hi.y / breaklines + 1e-12));
    for (long j = j0; j < j1; ++j) {
      for (long i = i0; i < i1; ++i) {
        const Vec2 lo{i * breaklines, j * breaklines};
        const Vec2 hi{(i + 1) * breaklines, (j + 1) * breaklines};
        const auto piece = clip_to_box(part, lo, hi);
        if (piece.size() >= 3) push_piece(pieces, piece);
      }
    }
  }
  if (pieces.empty()) throw DegenerateRegion("integrate_polygon: nothing to integrate");

  const GlRule& rule = gl_rule(cfg.gl_order);
  std::uint64_t next_id = 0;

  auto measure_rect = [&](Vec2 lo, Vec2 hi, int depth) {
    const Vec2 mid{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    const Complex coarse = tensor_rect(f, lo, hi, rule);
    const Complex fine = tensor_rect(f, lo, mid, rule) +
                         tensor_rect(f, {mid.x, lo.y}, {hi.x, mid.y}, rule) +
                         tensor_rect(f, {lo.x, mid.y}, {mid.x, hi.y}, rule) +
                         tensor_rect(f, mid, hi, rule);
    return Panel{true, lo, hi, {}, depth, fine, std::abs(fine - coarse), next_id++};
  };
  auto measure_tri = [&](const std::array<Vec2, 3>& t, int depth) {
    const Vec2 m01 = 0.5 * (t[0] + t[1]);
    const Vec2 m12 = 0.5 * (t[1] + t[2]);
    const Vec2 m20 = 0.5 * (t[2] + t[0]);
    const Complex coarse = tensor_tri(f, t, rule);
    Complex fine = tensor_tri(f, {t[0], m01, m20}, rule) + tensor_tri(f, {m01, t[1], m12}, rule) +
                   tensor_tri(f, {m20, m12, t[2]}, rule) + tensor_tri(f, {m01, m12, m20}, rule);
    return Panel{false, {}, {}, t, depth, fine, std::abs(fine - coarse), next_id++};
  };

  std::vector<Panel> heap;
  heap.reserve(pieces.size() * 4);
  Complex total{};
  double total_err = 0.0;
  for (const Piece& p : pieces) {
    Panel panel = p.rect ? measure_rect(p.lo, p.hi, 0) : measure_tri(p.tri, 0);
    total += panel.value;
    total_err += panel.err;
    heap.push_back(std::move(panel));
  }
  std::make_heap(heap.begin(), heap.end(), PanelOrder{});

  const std::size_t panel_budget = 2'000'000;
  std::vector<Panel> frozen;  // panels at the depth cap
  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) && !heap.empty() &&
         heap.size() + frozen.size() < panel_budget) {
    std::pop_heap(heap.begin(), heap.end(), PanelOrder{});
    Panel worst = std::move(heap.back());
    heap.pop_back();
    if (worst.depth >= cfg.max_subdiv) {
      frozen.push_back(std::move(worst));
      continue;
    }
    total -= worst.value;
    total_err -= worst.err;
    std::array<Panel, 4> kids;
    if (worst.rect) {
      const Vec2 mid{0.5 * (worst.lo.x + worst.hi.x), 0.5 * (worst.lo.y + worst.hi.y)};
      kids[0] = measure_rect(worst.lo, mid, worst.depth + 1);
      kids[1] = measure_rect({mid.x, worst.lo.y}, {worst.hi.x, mid.y}, worst.depth + 1);
      kids[2] = measure_rect({worst.lo.x, mid.y}, {mid.x, worst.hi.y}, worst.depth + 1);
      kids[3] = measure_rect(mid, worst.hi, worst.depth + 1);
    } else {
      const auto& t = worst.tri;
      const Vec2 m01 = 0.5 * (t[0] + t[1]);
      const Vec2 m12 = 0.5 * (t[1] + t[2]);
      const Vec2 m20 = 0.5 * (t[2] + t[0]);
      kids[0] = measure_tri({t[0], m01, m20}, worst.depth + 1);
      kids[1] = measure_tri({m01, t[1], m12}, worst.depth + 1);
      kids[2] = measure_tri({m20, m12, t[2]}, worst.depth + 1);
      kids[3] = measure_tri({m01, m12, m20}, worst.depth + 1);
    }
    for (auto& k : kids) {
      total += k.value;
      total_err += k.err;
      heap.push_back(std::move(k));
      std::push_heap(heap.begin(), heap.end(), PanelOrder{});
    }
  }

  // fixed reduction order for reproducibility
  for (Panel& p : frozen) heap.push_back(std::move(p));
  std::sort(heap.begin(), heap.end(), [](const Panel& a, const Panel& b) { return a.id < b.id; });
  Complex value{};
  double err = 0.0;
  for (const Panel& p : heap) {
    value += p.value;
    err += p.err;
  }
  if (stats) {
    stats->err_est = err;
    stats->cells_used = static_cast<long>(heap.size());
  }
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
  if (err > tol) throw NonConvergence(value, err, tol);
  return value;
}

McEstimate mc_integrate(const F2& f, const Polygon& region, const McConfig& cfg) {
  cfg.validate();
  if (region.area() <= 0.0) throw DegenerateRegion("mc_integrate: region has zero area");
  const Box2 bb = region.bounding_box();
  Rng rng(cfg.seed);
  Complex sum{};
  double sum_sq = 0.0;
  const double area = region.area();
  std::int64_t accepted = 0;
  while (accepted < cfg.samples) {
    const double x = rng.uniform(bb.lo.x, bb.hi.x);
    const double y = rng.uniform(bb.lo.y, bb.hi.y);
    if (!region.contains({x, y})) continue;
    const Complex v = f(x, y);
    sum += v;
    sum_sq += std::norm(v);
    ++accepted;
  }
  const double n = static_cast<double>(cfg.samples);
  const Complex mean = sum / n;
  McEstimate out;
  out.value = area * mean;
  if (cfg.samples > 1) {
    const double var = std::max(0.0, (sum_sq - n * std::norm(mean)) / (n - 1.0));
    out.std_error = area * std::sqrt(var / n);
  }
  return out;
}

// ---- Rng (xoshiro256++, splitmix64 seeding) ----

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

Complex Rng::standard_normal_complex() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double th = 2.0 * std::acos(-1.0) * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

Rng Rng::child(std::uint64_t index) const {
  std::uint64_t x = s_[0] ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL);
  return Rng(splitmix64(x));
}

}  // namespace haar
