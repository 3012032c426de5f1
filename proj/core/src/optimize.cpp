#include "haar/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "haar/parallel.hpp"

namespace haar {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

const char* search_family_name(SearchFamily f) {
  switch (f) {
    case SearchFamily::New: return "new";
    case SearchFamily::NewSigma: return "new-sigma";
    case SearchFamily::Diagonal: return "diagonal";
    case SearchFamily::Triangle: return "triangle";
  }
  return "?";
}

std::size_t SearchSpec::param_count() const {
  switch (family) {
    case SearchFamily::New:
    case SearchFamily::NewSigma:
    case SearchFamily::Diagonal: return 2;
    case SearchFamily::Triangle: return 4;
  }
  return 0;
}

std::vector<std::string> SearchSpec::param_names() const {
  switch (family) {
    case SearchFamily::New: return {"b", "phi"};
    case SearchFamily::NewSigma: return {"b", "phi", "arg_sigma0", "arg_sigma_p", "arg_sigma_m"};
    case SearchFamily::Diagonal: return {"b", "theta"};
    case SearchFamily::Triangle: return {"a", "b", "arg_sigma_p", "arg_sigma_m"};
  }
  return {};
}

void SearchSpec::validate() const {
  quad.validate();
  if (bounds.size() != param_count())
    throw std::invalid_argument("SearchSpec: wrong number of parameter bounds");
  for (const auto& b : bounds) {
    if (!(b[0] <= b[1])) throw std::invalid_argument("SearchSpec: lo must be <= hi");
  }
  if (grid < 1) throw std::invalid_argument("SearchSpec: grid must be >= 1");
  if (stages < 1) throw std::invalid_argument("SearchSpec: stages must be >= 1");
  switch (family) {
    case SearchFamily::New:
    case SearchFamily::NewSigma:
      if (!(bounds[0][0] > 0.0)) throw std::invalid_argument("SearchSpec: b must be > 0");
      if (!(bounds[1][0] > 0.0 && bounds[1][1] < kPi))
        throw std::invalid_argument("SearchSpec: phi must stay inside (0, pi)");
      break;
    case SearchFamily::Diagonal:
      if (!(bounds[0][0] > 0.0)) throw std::invalid_argument("SearchSpec: b must be > 0");
      break;
    case SearchFamily::Triangle:
      if (!(bounds[1][0] > 0.0)) throw std::invalid_argument("SearchSpec: b must be > 0");
      break;
  }
}

Evaluation evaluate_point(const SearchSpec& spec, const std::vector<double>& params) {
  Evaluation e;
  e.params = params;
  KernelSpec k = [&] {
    switch (spec.family) {
      case SearchFamily::New:
        return KernelSpec::new_family(params[0], params[1], 0.0, kPi, kPi);
      case SearchFamily::NewSigma:
        return KernelSpec::new_family(params[0], params[1], params[2], params[3], params[4]);
      case SearchFamily::Diagonal:
        return KernelSpec::diagonal(params[0], params[1]);
      default:
        return KernelSpec::triangle(params[0], params[1], params[2], params[3]);
    }
  }();
  const ConstantResult r = constant_for(k, spec.quad);
  e.integral_I = r.integral_I;
  e.C = r.C;
  e.err_est = r.err_est;
  e.degenerate = degenerate_sign_choice(k);
  return e;
}

namespace {

bool in_bounds(const SearchSpec& spec, const std::vector<double>& p) {
  const std::size_t n =
      spec.family == SearchFamily::NewSigma ? 2 : spec.bounds.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] < spec.bounds[i][0] || p[i] > spec.bounds[i][1]) return false;
  }
  return true;
}

std::vector<std::vector<double>> scan_points(const SearchSpec& spec) {
  std::vector<std::vector<double>> axes;
  for (const auto& b : spec.bounds) {
    std::vector<double> axis;
    if (b[0] == b[1] || spec.grid == 1) {
      axis.push_back(0.5 * (b[0] + b[1]));
    } else {
      for (int i = 0; i < spec.grid; ++i)
        axis.push_back(b[0] + (b[1] - b[0]) * static_cast<double>(i) /
                                  static_cast<double>(spec.grid - 1));
    }
    axes.push_back(std::move(axis));
  }
  std::vector<std::vector<double>> pts{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    next.reserve(pts.size() * axis.size());
    for (const auto& p : pts) {
      for (double v : axis) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                                std::vector<double> start, double step,
                                const SimplexOptions& opt) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = fn(simplex[i]);

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fv[a] < fv[b];
    });
    const std::size_t best = order.front(), worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double spread = 0.0, fspread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      fspread = std::max(fspread, std::abs(fv[i] - fv[best]));
      for (std::size_t d = 0; d < n; ++d)
        spread = std::max(spread, std::abs(simplex[i][d] - simplex[best][d]));
    }
    if (spread < opt.param_tol && fspread < opt.fn_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d)
        p[d] = centroid[d] + coef * (simplex[worst][d] - centroid[d]);
      return p;
    };

    const std::vector<double> refl = blend(-1.0);
    const double f_refl = fn(refl);
    if (f_refl < fv[best]) {
      const std::vector<double> expa = blend(-2.0);
      const double f_expa = fn(expa);
      if (f_expa < f_refl) {
        simplex[worst] = expa;
        fv[worst] = f_expa;
      } else {
        simplex[worst] = refl;
        fv[worst] = f_refl;
      }
      continue;
    }
    if (f_refl < fv[second_worst]) {
      simplex[worst] = refl;
      fv[worst] = f_refl;
      continue;
    }
    const std::vector<double> contr = blend(0.5);
    const double f_contr = fn(contr);
    if (f_contr < fv[worst]) {
      simplex[worst] = contr;
      fv[worst] = f_contr;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d)
        simplex[i][d] = 0.5 * (simplex[i][d] + simplex[best][d]);
      fv[i] = fn(simplex[i]);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (fv[i] < fv[best]) best = i;
  }
  return simplex[best];
}

SearchResult search(const SearchSpec& spec) {
  spec.validate();
  SearchResult result;

  std::vector<std::vector<double>> pts;
  if (spec.family == SearchFamily::NewSigma) {
    const double b = 0.5 * (spec.bounds[0][0] + spec.bounds[0][1]);
    const double phi = 0.5 * (spec.bounds[1][0] + spec.bounds[1][1]);
    // sigma0 = 1 by the global-phase normalization; the +/- signs vary
    for (double sp : {0.0, kPi}) {
      for (double sm : {0.0, kPi}) pts.push_back({b, phi, 0.0, sp, sm});
    }
  } else {
    pts = scan_points(spec);
  }

  result.log.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    result.log[i] = evaluate_point(spec, pts[i]);
  });

  auto better = [](const Evaluation& a, const Evaluation& b) {
    if (a.degenerate != b.degenerate) return !a.degenerate;
    return a.C < b.C;
  };
  const Evaluation* best = &result.log.front();
  for (const Evaluation& e : result.log) {
    if (better(e, *best)) best = &e;
  }
  result.best_params = best->params;
  result.best_C = best->C;
  result.stage_best_C.push_back(result.best_C);

  if (spec.family != SearchFamily::NewSigma) {
    double step = 0.0;
    for (const auto& b : spec.bounds)
      step = std::max(step, (b[1] - b[0]) / std::max(1, spec.grid - 1));
    for (int stage = 2; stage <= spec.stages; ++stage) {
      step = std::max(0.5 * step, 1e-4);
      auto objective = [&](const std::vector<double>& p) {
        if (!in_bounds(spec, p)) return std::numeric_limits<double>::infinity();
        Evaluation e = evaluate_point(spec, p);
        const double value = e.degenerate ? std::numeric_limits<double>::infinity() : e.C;
        result.log.push_back(std::move(e));
        return value;
      };
      const std::vector<double> refined = nelder_mead(objective, result.best_params, step);
      const Evaluation e = evaluate_point(spec, refined);
      if (!e.degenerate && e.C <= result.best_C) {
        result.best_params = e.params;
        result.best_C = e.C;
      }
      result.stage_best_C.push_back(result.best_C);
      step *= 0.25;
    }
  }
  return result;
}

std::string log_csv(const SearchSpec& spec, const SearchResult& result) {
  std::ostringstream os;
  for (const std::string& n : spec.param_names()) os << n << ',';
  os << "I_re,I_im,C,err_est,degenerate\n";
  std::vector<const Evaluation*> rows;
  rows.reserve(result.log.size());
  for (const Evaluation& e : result.log) rows.push_back(&e);
  std::stable_sort(rows.begin(), rows.end(), [](const Evaluation* a, const Evaluation* b) {
    return a->C < b->C;
  });
  for (const Evaluation* e : rows) {
    for (double p : e->params) os << fmt17(p) << ',';
    os << fmt17(e->integral_I.real()) << ',' << fmt17(e->integral_I.imag()) << ','
       << fmt17(e->C) << ',' << fmt17(e->err_est) << ',' << (e->degenerate ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string summary_json(const SearchSpec& spec, const SearchResult& result) {
  std::ostringstream os;
  const auto names = spec.param_names();
  os << "{\"family\":\"" << search_family_name(spec.family) << "\",\"best\":{";
  for (std::size_t i = 0; i < result.best_params.size(); ++i) {
    os << '"' << names[i] << "\":" << fmt17(result.best_params[i]) << ',';
  }
  os << "\"C\":" << fmt17(result.best_C) << "},\"evaluations\":" << result.log.size() << "}";
  return os.str();
}

}  // namespace haar
