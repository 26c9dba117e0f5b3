#include "qiso/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qiso/inequalities.hpp"
#include "qiso/parallel.hpp"

namespace qiso {

namespace {

// Objective value assigned to coefficient vectors that do not define a loop.
constexpr double kPenalty = 1e6;

}  // namespace

void SearchConfig::validate() const {
  if (M < 2) throw Error(ErrorKind::InvalidArgument, "search needs M >= 2");
  if (K < 0) throw Error(ErrorKind::InvalidArgument, "search needs K >= 0");
  if (n < 8 * (K + 1)) throw Error(ErrorKind::BadResolution, "search needs n >= 8(K+1)");
  if (budget < 100) throw Error(ErrorKind::InvalidArgument, "search budget must be >= 100");
  if (restarts < 1) throw Error(ErrorKind::InvalidArgument, "search needs at least one restart");
  if (!(coeff_bound > 0.0)) throw Error(ErrorKind::InvalidArgument, "coeff_bound must be positive");
}

double qii_objective(const FourierLoopSpec& spec) {
  const Loop loop = fourier_loop(spec);
  const SplitResult parts = split_self_intersections_with_events(loop);
  const bool split = parts.loops.size() > 1;
  double worst = std::numeric_limits<double>::infinity();
  for (const Loop& sub : parts.loops) {
    worst = std::min(worst, strong_qii(summarize(sub), split).margin);
  }
  return worst;
}

RVector spec_to_params(const FourierLoopSpec& spec) {
  RVector x(2 * spec.coeffs.size());
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < spec.coeffs.rows(); ++i) {
    for (Eigen::Index m = 0; m < spec.coeffs.cols(); ++m) {
      x[idx++] = spec.coeffs(i, m).real();
      x[idx++] = spec.coeffs(i, m).imag();
    }
  }
  return x;
}

FourierLoopSpec params_to_spec(const RVector& x, int M, int K, int n) {
  FourierLoopSpec spec = FourierLoopSpec::zeros(M, K, n);
  if (x.size() != 2 * spec.coeffs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "parameter vector does not match (M, K)");
  }
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < spec.coeffs.rows(); ++i) {
    for (Eigen::Index m = 0; m < spec.coeffs.cols(); ++m) {
      spec.coeffs(i, m) = cplx(x[idx], x[idx + 1]);
      idx += 2;
    }
  }
  return spec;
}

SimplexResult nelder_mead(const std::function<double(const RVector&)>& f, RVector x0, const SimplexOptions& opt) {
  const Eigen::Index dim = x0.size();
  SimplexResult out;
  if (dim == 0) {
    out.x = x0;
    out.value = f(x0);
    out.evals = 1;
    out.converged = true;
    return out;
  }
  auto clamp = [&](RVector x) {
    for (Eigen::Index i = 0; i < dim; ++i) x[i] = std::clamp(x[i], opt.lower, opt.upper);
    return x;
  };
  double best = std::numeric_limits<double>::infinity();
  RVector best_x = clamp(std::move(x0));
  auto eval = [&](const RVector& x) {
    double v = f(x);
    if (!std::isfinite(v)) v = kPenalty;
    ++out.evals;
    if (v < best) {
      best = v;
      best_x = x;
      out.history.emplace_back(out.evals, v);
    }
    return v;
  };
  auto budget_left = [&] { return out.evals < opt.max_evals; };

  std::vector<RVector> simplex;
  std::vector<double> values;
  auto build = [&](const RVector& center, double step) {
    simplex.assign(1, center);
    values.assign(1, eval(center));
    for (Eigen::Index i = 0; i < dim && budget_left(); ++i) {
      RVector v = center;
      v[i] += (v[i] + step <= opt.upper) ? step : -step;
      v = clamp(std::move(v));
      simplex.push_back(v);
      values.push_back(eval(v));
    }
  };

  build(best_x, opt.initial_step);
  double step = opt.initial_step;
  double best_at_restart = best;
  while (budget_left() && static_cast<Eigen::Index>(simplex.size()) == dim + 1) {
    std::vector<std::size_t> order(simplex.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t lo = order.front(), hi = order.back(), second = order[order.size() - 2];

    double size = 0.0;
    for (const auto& v : simplex) size = std::max(size, (v - simplex[lo]).cwiseAbs().maxCoeff());
    if (values[hi] - values[lo] <= opt.f_tol && size <= std::max(opt.x_tol, 1e-3 * step)) {
      // Collapsed simplex: restart around the incumbent, stop if the last
      // restart brought nothing.
      if (best >= best_at_restart && simplex.size() > 1 && step < opt.initial_step) {
        out.converged = true;
        break;
      }
      best_at_restart = best;
      step *= 0.5;
      build(best_x, step);
      continue;
    }

    RVector centroid = RVector::Zero(dim);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != hi) centroid += simplex[i];
    }
    centroid /= static_cast<double>(dim);

    const RVector xr = clamp(centroid + (centroid - simplex[hi]));
    const double fr = eval(xr);
    if (fr < values[lo]) {
      if (!budget_left()) {
        simplex[hi] = xr;
        values[hi] = fr;
        break;
      }
      const RVector xe = clamp(centroid + 2.0 * (centroid - simplex[hi]));
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[hi] = xe;
        values[hi] = fe;
      } else {
        simplex[hi] = xr;
        values[hi] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[hi] = xr;
      values[hi] = fr;
      continue;
    }
    if (!budget_left()) break;
    const bool outside = fr < values[hi];
    const RVector xc = outside ? clamp(centroid + 0.5 * (xr - centroid)) : clamp(centroid + 0.5 * (simplex[hi] - centroid));
    const double fc = eval(xc);
    if (fc < std::min(fr, values[hi])) {
      simplex[hi] = xc;
      values[hi] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 0; i < simplex.size() && budget_left(); ++i) {
      if (i == lo) continue;
      simplex[i] = clamp(simplex[lo] + 0.5 * (simplex[i] - simplex[lo]));
      values[i] = eval(simplex[i]);
    }
  }
  out.x = best_x;
  out.value = best;
  return out;
}

SearchResult minimize_margin(const SearchConfig& cfg) {
  cfg.validate();
  const long per_restart = cfg.budget / cfg.restarts;
  if (per_restart < 1) throw Error(ErrorKind::InvalidArgument, "budget too small for the restart count");

  auto objective = [&](const RVector& x, int n) {
    try {
      return qii_objective(params_to_spec(x, cfg.M, cfg.K, n));
    } catch (const Error&) {
      return kPenalty;
    }
  };

  std::vector<SimplexResult> runs(static_cast<std::size_t>(cfg.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    std::mt19937_64 rng = make_rng(cfg.seed, r);
    const FourierLoopSpec start = random_fourier_spec(cfg.M, cfg.K, cfg.n, rng);
    RVector x0 = spec_to_params(start);
    SimplexOptions opt;
    opt.max_evals = per_restart;
    opt.lower = -cfg.coeff_bound;
    opt.upper = cfg.coeff_bound;
    opt.initial_step = 0.25 * cfg.coeff_bound;
    runs[r] = nelder_mead([&](const RVector& x) { return objective(x, cfg.n); }, std::move(x0), opt);
  });

  SearchResult result;
  std::size_t best_run = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    result.restart_best.push_back(runs[r].value);
    result.evals += runs[r].evals;
    if (runs[r].value < runs[best_run].value) best_run = r;
  }
  // Merge the per-restart improvement traces onto one global evaluation axis.
  std::vector<std::pair<long, double>> merged;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (const auto& [idx, v] : runs[r].history) merged.emplace_back(static_cast<long>(r) * per_restart + idx, v);
  }
  std::sort(merged.begin(), merged.end());
  double running = std::numeric_limits<double>::infinity();
  for (const auto& [idx, v] : merged) {
    if (v < running) {
      running = v;
      result.history.emplace_back(idx, v);
    }
  }

  result.best_margin = runs[best_run].value;
  result.best_spec = params_to_spec(runs[best_run].x, cfg.M, cfg.K, cfg.n);
  const bool all_converged =
      std::all_of(runs.begin(), runs.end(), [](const SimplexResult& s) { return s.converged; });
  result.status = all_converged ? "Converged" : "BudgetExhausted";

  if (result.best_margin < 0.0) {
    result.rechecked = true;
    result.recheck_n = 4 * cfg.n;
    result.recheck_margin = objective(runs[best_run].x, result.recheck_n);
    result.violation = result.best_margin < -cfg.violation_tol && result.recheck_margin < -cfg.violation_tol;
  }
  return result;
}

std::vector<ExtremalityFit> extremality_scan(double theta, const std::vector<int>& modes,
                                             const std::vector<double>& eps_grid, int n) {
  const double gamma0 = loop_berry_phase(bloch_circle(theta, n));
  std::vector<ExtremalityFit> fits;
  for (int mode : modes) {
    ExtremalityFit fit;
    fit.mode = mode;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double eps : eps_grid) {
      if (!(eps > 0.0)) continue;
      const double delta = std::abs(wrap_phase(loop_berry_phase(perturb_circle(theta, eps, mode, n)) - gamma0));
      fit.samples.emplace_back(eps, delta);
      if (!(delta > 0.0)) continue;
      const double lx = std::log(eps), ly = std::log(delta);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++fit.points;
    }
    if (fit.points < 2) throw Error(ErrorKind::InvalidArgument, "extremality fit needs two positive samples");
    const double np = fit.points;
    const double denom = np * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps grid must contain distinct values");
    fit.slope = (np * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / np;
    fits.push_back(std::move(fit));
  }
  return fits;
}

}  // namespace qiso
