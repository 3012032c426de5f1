#include "haar/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace haar {

SignChoice SignChoice::uniform(int kinds, Complex value) {
  SignChoice s;
  s.by_kind.assign(static_cast<std::size_t>(kinds), value);
  return s;
}

SignChoice SignChoice::from_angles(std::vector<double> angles) {
  SignChoice s;
  s.by_kind.reserve(angles.size());
  for (double a : angles) s.by_kind.push_back({std::cos(a), std::sin(a)});
  return s;
}

Complex SignChoice::factor(const HaarAtom& atom) const {
  for (const auto& [a, v] : overrides) {
    if (a == atom) return v;
  }
  return by_kind[static_cast<std::size_t>(atom.kind)];
}

void SignChoice::validate(int kinds) const {
  if (by_kind.size() != static_cast<std::size_t>(kinds))
    throw std::invalid_argument("SignChoice: wrong number of kinds");
  for (const Complex& v : by_kind) {
    if (std::abs(std::abs(v) - 1.0) > 1e-12)
      throw std::invalid_argument("SignChoice: coefficients must be unimodular");
  }
  for (const auto& [a, v] : overrides) {
    (void)a;
    if (std::abs(std::abs(v) - 1.0) > 1e-12)
      throw std::invalid_argument("SignChoice: override coefficients must be unimodular");
  }
}

StepFunction apply_transform(const SystemSpec& spec, const StepFunction& f,
                             const SignChoice& sigma, int depth) {
  sigma.validate(spec.kinds());
  const LatticeId root = spec.kind == System::Triangle ? f.root() : LatticeId::unit(spec.kind);
  Decomposition d = decompose(spec, f, root, depth);
  for (std::size_t i = 0; i < d.atoms.size(); ++i) d.coeffs[i] *= sigma.factor(d.atoms[i]);
  return reconstruct(spec, root, f.level(), d);
}

namespace {

MartingaleRun build_run_impl(const SystemSpec& spec, const StepFunction& f,
                             const SignChoice& sigma, int depth, bool two_step) {
  sigma.validate(spec.kinds());
  if (two_step && spec.kind != System::New2D && spec.kind != System::Parallelogram)
    throw std::invalid_argument(
        "build_run: the two-step filtration needs disjointly supported +/- kinds");
  const LatticeId root = spec.kind == System::Triangle ? f.root() : LatticeId::unit(spec.kind);
  const Decomposition d = decompose(spec, f, root, depth);
  const int level = f.level();

  MartingaleRun run;
  StepFunction x = StepFunction::on_cell(spec, root, level);
  StepFunction y = StepFunction::on_cell(spec, root, level);
  run.steps.push_back({x, y, 0, false});  // X_0 = Y_0 = 0

  auto add_generation = [&](int g, bool kind0_only, bool only_other_kinds) {
    Decomposition part;
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      if (d.atoms[i].generation != g) continue;
      const bool zero_kind = d.atoms[i].kind == 0;
      if (kind0_only && !zero_kind) continue;
      if (only_other_kinds && zero_kind) continue;
      part.atoms.push_back(d.atoms[i]);
      part.coeffs.push_back(d.coeffs[i]);
    }
    StepFunction xa = reconstruct(spec, root, level, part);
    for (std::size_t i = 0; i < part.atoms.size(); ++i)
      part.coeffs[i] *= sigma.factor(part.atoms[i]);
    StepFunction ya = reconstruct(spec, root, level, part);
    x.add_scaled(xa, 1.0);
    y.add_scaled(ya, 1.0);
  };

  for (int g = 0; g < depth; ++g) {
    if (two_step) {
      // odd step: kind 0 of generation g against the halved filtration
      add_generation(g, true, false);
      run.steps.push_back({x, y, g, true});
      // even step: the disjointly supported remaining kinds complete the generation
      add_generation(g, false, true);
      run.steps.push_back({x, y, g + 1, false});
    } else {
      add_generation(g, false, false);
      run.steps.push_back({x, y, g + 1, false});
    }
  }
  return run;
}

}  // namespace

MartingaleRun build_run(const SystemSpec& spec, const StepFunction& f, const SignChoice& sigma,
                        int depth) {
  return build_run_impl(spec, f, sigma, depth, true);
}

MartingaleRun build_run_three_kinds(const SystemSpec& spec, const StepFunction& f,
                                    const SignChoice& sigma, int depth) {
  return build_run_impl(spec, f, sigma, depth, false);
}

SubordinationReport check_subordination(const SystemSpec& spec, const MartingaleRun& run) {
  SubordinationReport rep;
  if (run.steps.empty()) return rep;
  const std::size_t kids = static_cast<std::size_t>(spec.children());
  const std::size_t leaves = run.steps.front().x.leaf_count();
  const int level = run.steps.front().x.level();

  auto block_of = [&](int generation) {
    std::size_t block = 1;
    for (int g = 0; g < level - generation; ++g) block *= kids;
    return block;
  };

  for (std::size_t m = 0; m + 1 < run.steps.size(); ++m) {
    const auto& cur = run.steps[m];
    const auto& nxt = run.steps[m + 1];
    for (std::size_t l = 0; l < leaves; ++l) {
      const double dx = std::abs(nxt.x.values()[l] - cur.x.values()[l]);
      const double dy = std::abs(nxt.y.values()[l] - cur.y.values()[l]);
      rep.max_increment_violation = std::max(rep.max_increment_violation, dy - dx);
    }
  }

  // measurability of X_m w.r.t. its filtration and collapse of E(X_{m+1}|F_m)
  for (std::size_t m = 0; m < run.steps.size(); ++m) {
    const auto& st = run.steps[m];
    const std::size_t block = block_of(st.generation);
    // a half step refines each cell into its kind-0 halves; those are the
    // first and second pair of children, i.e. contiguous half-blocks
    const std::size_t piece = st.half_step ? block / 2 : block;
    for (std::size_t start = 0; start < leaves; start += piece) {
      const Complex ref = st.x.values()[start];
      for (std::size_t l = start; l < start + piece; ++l) {
        rep.max_measurability_dev =
            std::max(rep.max_measurability_dev, std::abs(st.x.values()[l] - ref));
      }
      if (m + 1 < run.steps.size()) {
        Complex avg{};
        for (std::size_t l = start; l < start + piece; ++l) avg += run.steps[m + 1].x.values()[l];
        avg /= static_cast<double>(piece);
        rep.max_condexp_dev = std::max(rep.max_condexp_dev, std::abs(avg - ref));
      }
    }
  }
  return rep;
}

double empirical_norm_ratio(const SystemSpec& spec, const SignChoice& sigma,
                            const NormRatioConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("empirical_norm_ratio: trials must be >= 1");
  const LatticeId root = LatticeId::unit(spec.kind);
  Rng rng(cfg.seed);
  double worst = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng trial = rng.child(static_cast<std::uint64_t>(t));
    StepFunction f = random_mean_zero(spec, root, cfg.level, trial);
    SignChoice s = sigma;
    if (cfg.sigma_per_trial) {
      std::vector<double> angles(static_cast<std::size_t>(spec.kinds()));
      for (double& a : angles) a = trial.uniform(0.0, 2.0 * 3.141592653589793);
      s = SignChoice::from_angles(std::move(angles));
    }
    const StepFunction tf = apply_transform(spec, f, s, cfg.level);
    const double nf = f.lp_norm(cfg.p);
    if (nf < 1e-14) continue;
    worst = std::max(worst, tf.lp_norm(cfg.p) / nf);
  }
  return worst;
}

}  // namespace haar
