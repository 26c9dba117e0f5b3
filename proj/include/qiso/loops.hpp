#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qiso/geometry.hpp"

namespace qiso {

/// zᵢ(t) = Σ_{m=−K..K} coeffs(i, m+K) e^{imt}, i = 1..M−1, sampled at
/// tⱼ = 2πj/n; the state is (1, z₁, …, z_{M−1}) normalized.
struct FourierLoopSpec {
  int M = 2;
  int K = 0;
  int n = 8;
  CMatrix coeffs;  // (M−1) × (2K+1); column m+K holds harmonic m

  static FourierLoopSpec zeros(int M, int K, int n);
  cplx& coeff(int i, int m) { return coeffs(i, m + K); }
  cplx coeff(int i, int m) const { return coeffs(i, m + K); }
  /// Throws InvalidArgument on M < 2, K < 0, n < 8(K+1) or a shape mismatch.
  void validate() const;
};

Loop bloch_circle(double theta, int n);

/// Two-level loop whose Bloch image is the great circle normal to `axis`,
/// traversed counter-clockwise about `axis` `turns` times.
Loop great_circle(const Eigen::Vector3d& axis, int n, int turns = 1);

/// Geodesic polygon with N vertices at polar angle θ and equally spaced
/// azimuths; each edge contributes `n_per_edge` samples.
Loop spherical_polygon(int N, double theta, int n_per_edge);

Loop fourier_loop(const FourierLoopSpec& spec);

/// Bloch circle whose polar angle is modulated as θ + ε cos(mode·φ).
Loop perturb_circle(double theta, double eps, int mode, int n);

/// Inserts factor−1 projective-geodesic points per segment.
Loop refine(const Loop& loop, int factor);

struct SplitEvent {
  Eigen::Index first = 0;   // index j of the coincident pair in the loop being split
  Eigen::Index second = 0;  // index k > j+1
  double distance = 0.0;    // segment_distance(ψⱼ, ψₖ)
};

struct SplitResult {
  std::vector<Loop> loops;
  std::vector<SplitEvent> events;
};

/// Greedy recursive splitting at the first projectively coincident pair
/// (j, k), k > j+1, with segment_distance < tol. A coincidence only counts
/// when both resulting sub-loops have at least three states and a
/// Fubini-Study length above 2·tol, so stalled (constant) stretches are not
/// shredded into point loops.
SplitResult split_self_intersections_with_events(const Loop& loop, double tol = kTol.self_intersection);
std::vector<Loop> split_self_intersections(const Loop& loop, double tol = kTol.self_intersection);

/// Random Fourier loop: complex Gaussian coefficients with harmonic decay
/// 1/(1+|m|) and a log-uniform overall scale in [0.1, 3].
FourierLoopSpec random_fourier_spec(int M, int K, int n, std::mt19937_64& rng);

/// Random simple (non-self-intersecting) two-level loop: a star-shaped
/// curve θ(φ) about a random axis, θ kept inside (0.05, π − 0.05).
Loop random_simple_bloch_loop(int n, std::mt19937_64& rng);

/// Deterministic per-item generator for parallel suites.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace qiso
