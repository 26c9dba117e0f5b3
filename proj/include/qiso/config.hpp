#pragma once

namespace qiso {

/// Numerical thresholds shared by every module. Tests and the CLI read the
/// defaults from `kTol`; nothing else hard-codes these numbers.
struct Tolerances {
  double unit_norm = 1e-12;         // |‖ψ‖ − 1| for a StateVector
  double hermitian = 1e-12;         // ‖H − H†‖_max
  double zero_norm = 1e-300;        // normalize() refuses below this
  double gauge_nonzero = 1e-10;     // "first nonzero entry" threshold for gauge fixing
  double projective_equal = 1e-12;  // |⟨a|b⟩| = 1 within this
  double eig_residual = 1e-10;      // relative to ‖H‖
  double degeneracy = 1e-9;         // band gap relative to ‖H‖
  double min_overlap = 1e-9;        // consecutive loop states must overlap more than this
  double branch_edge = 1e-9;        // phases this close to −π are reported as +π
  double fd_step = 1e-4;            // default finite-difference step for qgt_at
  double pole_clearance = 1e-8;     // solid-angle reference must stay this far from the loop
  double self_intersection = 1e-7;  // projective coincidence threshold for loop splitting
  double saturation_floor = 1e-6;   // lower bound of tol(n)
  double saturation_scale = 10.0;   // tol(n) = max(floor, scale * convergence_est)
  double norm_drift = 1e-6;         // evolve() aborts above this per-step drift
  double cyclic = 1e-6;             // trajectory closure threshold (Fubini-Study distance)
  double chain = 1e-6;              // BoundChain monotonicity slack
};

inline constexpr Tolerances kTol{};

/// tol(n) used for saturation flags of loop-derived inequality reports.
inline double saturation_tolerance(double convergence_est, const Tolerances& t = kTol) {
  const double scaled = t.saturation_scale * convergence_est;
  return scaled > t.saturation_floor ? scaled : t.saturation_floor;
}

}  // namespace qiso
