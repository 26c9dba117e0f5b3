#include <doctest.h>

#include "oracles.hpp"
#include "qiso/error.hpp"
#include "qiso/loops.hpp"
#include "qiso/search.hpp"

using namespace qiso;
using oracle::pi;

TEST_CASE("qii_objective examples") {
  FourierLoopSpec eq = FourierLoopSpec::zeros(2, 1, 256);
  eq.coeff(0, 1) = 1.0;
  CHECK(std::abs(qii_objective(eq)) < 1e-9);
  CHECK(std::abs(qii_objective(FourierLoopSpec::zeros(3, 2, 64))) < 1e-12);
  std::mt19937_64 rng = make_rng(1, 0);
  CHECK(qii_objective(random_fourier_spec(3, 2, 256, rng)) >= -1e-5);
}

TEST_CASE("nelder_mead minimizes a shifted quadratic") {
  SimplexOptions opt;
  opt.max_evals = 4000;
  opt.lower = -5.0;
  opt.upper = 5.0;
  const auto f = [](const RVector& x) { return (x.array() - 1.5).square().sum() + 0.25; };
  const SimplexResult r = nelder_mead(f, RVector::Zero(4), opt);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-8));
  CHECK((r.x.array() - 1.5).abs().maxCoeff() < 1e-4);
  CHECK(r.evals <= opt.max_evals);
}

TEST_CASE("nelder_mead respects the box") {
  SimplexOptions opt;
  opt.max_evals = 2000;
  opt.lower = -1.0;
  opt.upper = 1.0;
  const SimplexResult r = nelder_mead([](const RVector& x) { return x.sum(); }, RVector::Zero(3), opt);
  CHECK(r.value == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(r.x.minCoeff() >= -1.0);
}

TEST_CASE("spec parameter round trip") {
  std::mt19937_64 rng = make_rng(2, 0);
  const FourierLoopSpec s = random_fourier_spec(4, 2, 64, rng);
  const FourierLoopSpec back = params_to_spec(spec_to_params(s), 4, 2, 64);
  CHECK((back.coeffs - s.coeffs).norm() == 0.0);
}

TEST_CASE("minimize_margin for two-level loops finds circles") {
  SearchConfig cfg;
  cfg.M = 2;
  cfg.K = 2;
  cfg.budget = 10000;
  cfg.restarts = 4;
  const SearchResult r = minimize_margin(cfg);
  CHECK(r.best_margin >= -1e-5);
  CHECK(std::abs(r.best_margin) < 1e-3);
  CHECK_FALSE(r.violation);
  CHECK(r.evals <= cfg.budget);
  CHECK(r.restart_best.size() == 4);
}

TEST_CASE("minimize_margin at M=5, K=1") {
  SearchConfig cfg;
  cfg.M = 5;
  cfg.K = 1;
  cfg.budget = 6000;
  cfg.restarts = 3;
  const SearchResult r = minimize_margin(cfg);
  CHECK(r.best_margin >= -1e-5);
  CHECK_FALSE(r.violation);
}

TEST_CASE("minimize_margin is reproducible") {
  SearchConfig cfg;
  cfg.M = 3;
  cfg.K = 1;
  cfg.budget = 1500;
  cfg.restarts = 3;
  cfg.seed = 9;
  const SearchResult a = minimize_margin(cfg), b = minimize_margin(cfg);
  CHECK(a.best_margin == b.best_margin);
  CHECK((a.best_spec.coeffs - b.best_spec.coeffs).norm() == 0.0);
  CHECK(a.history == b.history);
  CHECK(a.evals == b.evals);
}

TEST_CASE("search config validation") {
  SearchConfig cfg;
  cfg.M = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SearchConfig{};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("extremality_scan examples") {
  const std::vector<double> eps{0.0, 2e-2, 1e-2, 5e-3, 2.5e-3};
  const std::vector<ExtremalityFit> fits = extremality_scan(pi / 3, {1, 3}, eps, 4096);
  REQUIRE(fits.size() == 2);
  for (const ExtremalityFit& f : fits) {
    CHECK(f.points == 4);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(f.holds());
  }
}
