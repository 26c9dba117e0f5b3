#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qiso/loops.hpp"

namespace qiso {

struct SearchConfig {
  int M = 3;
  int K = 2;
  int n = 128;
  long budget = 10000;  // objective evaluations across all restarts
  int restarts = 4;
  std::uint64_t seed = 0;
  double coeff_bound = 2.0;     // box [−b, b] on every real/imag coefficient
  double violation_tol = 1e-5;  // a margin below −violation_tol is a counterexample

  /// Throws InvalidArgument unless budget ≥ 100, coeff_bound > 0, M ≥ 2,
  /// K ≥ 0, restarts ≥ 1 and n ≥ 8(K+1).
  void validate() const;
};

struct SearchResult {
  double best_margin = 0.0;
  FourierLoopSpec best_spec;
  long evals = 0;
  std::vector<std::pair<long, double>> history;  // (evaluation index, best-so-far margin)
  std::vector<double> restart_best;
  bool rechecked = false;
  double recheck_margin = 0.0;  // margin of best_spec at 4n
  int recheck_n = 0;
  bool violation = false;  // negative at n and still below −violation_tol at 4n
  std::string status = "BudgetExhausted";
};

/// Strong-QII margin of a Fourier loop, minimized over its simple sub-loops.
/// Throws DegenerateSpec.
double qii_objective(const FourierLoopSpec& spec);

/// Nelder-Mead simplex minimization of a real function with box clamping.
/// Accepted vertex values strictly decrease; when the simplex collapses the
/// search restarts around the incumbent until `max_evals` is spent or a
/// restart brings no improvement.
struct SimplexOptions {
  long max_evals = 1000;
  double initial_step = 0.1;
  double lower = -1.0;
  double upper = 1.0;
  double f_tol = 1e-12;
  double x_tol = 1e-10;
};

struct SimplexResult {
  RVector x;
  double value = 0.0;
  long evals = 0;
  std::vector<std::pair<long, double>> history;
  bool converged = false;
};

SimplexResult nelder_mead(const std::function<double(const RVector&)>& f, RVector x0, const SimplexOptions& opt);

/// Deterministic multi-restart search for the smallest strong-QII margin
/// over Fourier loops in CP^{M−1}. Restarts run in parallel with
/// per-restart seeds; the merge is order-independent.
SearchResult minimize_margin(const SearchConfig& cfg);

RVector spec_to_params(const FourierLoopSpec& spec);
FourierLoopSpec params_to_spec(const RVector& x, int M, int K, int n);

struct ExtremalityFit {
  int mode = 0;
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
  std::vector<std::pair<double, double>> samples;  // (ε, |γ(ε) − γ(0)|)

  bool holds(double min_slope = 1.9) const { return slope >= min_slope; }
};

/// Log-log fit of the Berry-phase change of perturbed Bloch circles against
/// the perturbation amplitude, one fit per mode. ε ≤ 0 rows and exact zeros
/// are skipped. Throws OutOfRange (from perturb_circle) and
/// InvalidArgument when fewer than two usable points remain.
std::vector<ExtremalityFit> extremality_scan(double theta, const std::vector<int>& modes,
                                             const std::vector<double>& eps_grid, int n);

}  // namespace qiso
