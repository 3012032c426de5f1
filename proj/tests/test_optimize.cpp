#include <doctest.h>

#include <cmath>
#include <sstream>

#include "haar/optimize.hpp"

using namespace haar;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

SearchSpec small_new_search() {
  SearchSpec s;
  s.family = SearchFamily::New;
  s.bounds = {{1.2, 1.7}, {1.2, 1.9}};
  s.grid = 5;
  s.stages = 2;
  s.quad.abs_tol = 1e-9;
  return s;
}
}  // namespace

TEST_CASE("local search closes in on the best rectangle") {
  const SearchResult r = search(small_new_search());
  CHECK(std::abs(r.best_params[0] - std::sqrt(2.0)) < 1e-3);
  CHECK(std::abs(r.best_params[1] - kPi / 2) < 1e-3);
  CHECK(r.best_C == doctest::Approx(2.0071384).epsilon(1e-4));
}

TEST_CASE("sign-pattern enumeration finds the admissible optimum") {
  SearchSpec s;
  s.family = SearchFamily::NewSigma;
  s.bounds = {{1.0, 1.0}, {kPi / 2, kPi / 2}};
  s.grid = 1;
  s.stages = 1;
  const SearchResult r = search(s);
  CHECK(r.log.size() == 4);
  // winner is sigma = (1, -1, -1)
  CHECK(r.best_params[2] == 0.0);
  CHECK(r.best_params[3] == doctest::Approx(kPi));
  CHECK(r.best_params[4] == doctest::Approx(kPi));
  CHECK(r.best_C == doctest::Approx(2.0697783).epsilon(1e-5));
  // the identity pattern is logged but flagged and never wins
  bool saw_degenerate = false;
  for (const Evaluation& e : r.log) saw_degenerate |= e.degenerate;
  CHECK(saw_degenerate);
}

TEST_CASE("searches are reproducible") {
  const SearchResult a = search(small_new_search());
  const SearchResult b = search(small_new_search());
  REQUIRE(a.log.size() == b.log.size());
  CHECK(a.best_C == b.best_C);
  CHECK(a.best_params == b.best_params);
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].params == b.log[i].params);
    CHECK(a.log[i].C == b.log[i].C);
  }
}

TEST_CASE("refinement stages never lose ground") {
  SearchSpec s = small_new_search();
  s.stages = 3;
  const SearchResult r = search(s);
  REQUIRE(r.stage_best_C.size() == 3);
  CHECK(r.stage_best_C[1] <= r.stage_best_C[0] + 1e-15);
  CHECK(r.stage_best_C[2] <= r.stage_best_C[1] + 1e-15);
}

TEST_CASE("diagonal landscape respects the b -> 1/b symmetry") {
  SearchSpec s;
  s.family = SearchFamily::Diagonal;
  s.bounds = {{0.4, 1.0}, {-3.0, 3.0}};
  s.grid = 3;
  s.stages = 1;
  for (int i = 0; i < 5; ++i) {
    const double b = 0.4 + 0.12 * i;
    const double theta = -2.0 + 0.9 * i;
    const Evaluation lo = evaluate_point(s, {b, theta});
    const Evaluation hi = evaluate_point(s, {1.0 / b, -theta});
    CHECK(std::abs(std::abs(lo.integral_I) - std::abs(hi.integral_I)) < 1e-8);
  }
}

TEST_CASE("csv log is sorted and headers survive an empty result") {
  const SearchSpec s = small_new_search();
  SearchResult empty;
  const std::string header_only = log_csv(s, empty);
  CHECK(header_only == "b,phi,I_re,I_im,C,err_est,degenerate\n");

  const SearchResult r = search(s);
  const std::string csv = log_csv(s, r);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  double prev = -1.0;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    const std::size_t c_pos = [&] {
      std::size_t pos = 0;
      for (int comma = 0; comma < 4; ++comma) pos = line.find(',', pos) + 1;
      return pos;
    }();
    const double c = std::stod(line.substr(c_pos));
    CHECK(c >= prev);
    prev = c;
    ++rows;
  }
  CHECK(rows == r.log.size());
}

TEST_CASE("summary json echoes the best parameters verbatim") {
  const SearchSpec s = small_new_search();
  const SearchResult r = search(s);
  const std::string json = summary_json(s, r);
  // parse back the two parameter fields
  auto grab = [&](const std::string& key) {
    const std::size_t at = json.find('"' + key + "\":");
    REQUIRE(at != std::string::npos);
    return std::stod(json.substr(at + key.size() + 3));
  };
  CHECK(grab("b") == r.best_params[0]);
  CHECK(grab("phi") == r.best_params[1]);
  CHECK(grab("C") == r.best_C);
}

TEST_CASE("search spec validation") {
  SearchSpec s = small_new_search();
  s.bounds = {{1.2, 1.7}};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_new_search();
  s.bounds[1] = {0.0, kPi};  // phi touches the boundary of (0, pi)
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_new_search();
  s.grid = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("nelder-mead minimizes a quadratic bowl") {
  auto f = [](const std::vector<double>& p) {
    const double dx = p[0] - 1.5, dy = p[1] + 0.25;
    return 3 * dx * dx + dy * dy + 7.0;
  };
  const std::vector<double> best = nelder_mead(f, {0.0, 0.0}, 0.5);
  CHECK(std::abs(best[0] - 1.5) < 1e-4);
  CHECK(std::abs(best[1] + 0.25) < 1e-4);
}
