#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qiso/core.hpp"

namespace qiso {

/// A closed, discretized path of pure states. States are stored as the
/// columns of an M×n matrix; the closing segment runs from the last column
/// back to the first.
///
/// Invariants (checked on construction): n ≥ 3, every column normalized,
/// and |⟨ψⱼ|ψⱼ₊₁⟩| > 1e-9 for every cyclic neighbour pair.
class Loop {
 public:
  /// Normalizes each column. Throws BadResolution (n < 3) or
  /// IllConditionedSegment.
  static Loop from_columns(CMatrix columns);
  static Loop from_states(const std::vector<StateVector>& states);

  Eigen::Index size() const noexcept { return columns_.cols(); }
  Eigen::Index dim() const noexcept { return columns_.rows(); }

  StateVector state(Eigen::Index j) const;
  auto column(Eigen::Index j) const { return columns_.col(j); }
  const CMatrix& columns() const noexcept { return columns_; }

  /// Same loop traversed backwards (starting state unchanged).
  Loop reversed() const;
  /// Every `stride`-th state, starting at 0. Throws BadResolution when fewer
  /// than three states would remain.
  Loop subsampled(Eigen::Index stride) const;
  /// Multiplies state j by e^{i phases[j]}.
  Loop with_phases(std::span<const double> phases) const;

 private:
  explicit Loop(CMatrix columns) : columns_(std::move(columns)) {}
  CMatrix columns_;
};

/// Real-parameter coordinate chart λ ∈ ℝ^d ↦ |ψ(λ)⟩.
struct Chart {
  std::function<StateVector(std::span<const double>)> map;
  int dim = 1;
  double step = kTol.fd_step;
};

/// χ = g − (i/2) F at one point of a chart.
struct QGTensor {
  CMatrix chi;
  RMatrix g;
  RMatrix F;
  /// max |χ(h) − χ(h/2)| between plain central differences.
  double fd_error = 0.0;
};

struct LoopSummary {
  double d_fs = 0.0;         // Fubini-Study length (radians)
  double gamma_b = 0.0;      // principal Berry phase in (−π, π]
  double gamma_total = 0.0;  // accumulated phase; only differs from gamma_b after sub-loop aggregation
  Eigen::Index n_segments = 0;
  Eigen::Index dim = 0;
  double convergence_est = 0.0;  // max(|Δd|, |Δγ|) against the half-resolution loop
};

/// Quantum geometric tensor from projector derivatives, so the result does
/// not depend on the phase convention of `chart.map`.
///
/// ∂P is taken by central differences at h and h/2 and combined by one
/// Richardson step (O(h⁴)); χ_{μν} = Tr[P ∂_μP ∂_νP] is then a Gram matrix
/// and therefore Hermitian positive semidefinite.
QGTensor qgt_at(const Chart& chart, std::span<const double> point);

/// Projective geodesic distance arccos|⟨a|b⟩| ∈ [0, π/2].
double segment_distance(const StateVector& a, const StateVector& b);

double loop_distance(const Loop& loop);

/// Pancharatnam phase −arg Πⱼ⟨ψⱼ|ψⱼ₊₁⟩ in (−π, π].
double loop_berry_phase(const Loop& loop);

/// Signed solid angle enclosed by the Bloch image of a two-level loop,
/// reduced into (−2π, 2π]. Computed from spherical-triangle excesses and
/// independent of the overlap route used by loop_berry_phase.
double bloch_solid_angle(const Loop& loop);

LoopSummary summarize(const Loop& loop);

/// Maps principal-value phase differences into (−π, π].
double wrap_phase(double x);

}  // namespace qiso
