#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qiso/geometry.hpp"
#include "qiso/models.hpp"

namespace qiso {

/// Ordered (label, value, unit) entries, each claimed ≥ the next.
struct BoundChain {
  struct Entry {
    std::string label;
    double value = 0.0;
    std::string unit;
  };

  std::string name;
  std::vector<Entry> entries;
  std::vector<std::string> notes;

  /// Largest amount by which an entry falls below its successor (≤ 0 when
  /// the chain is monotone).
  double max_violation() const;
  bool monotone(double tol = kTol.chain) const { return max_violation() <= tol; }
  /// max − min over all entries.
  double spread() const;
};

/// Gauge-invariant Wannier spread Ω₁ = (a/2π) ∫_BZ Tr g dk (periodic
/// trapezoid on n_k points). Units: length².
double wannier_omega1(const ModelSpec& m, Band band, int n_k);

/// [Ω₁, (a d_FS/2π)², (a γ_B/2π)²].
BoundChain wannier_bound_chain(const ModelSpec& m, Band band, int n_k);

/// Time evolution record (ħ = 1).
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> energy_std;  // ΔE(t) = √(⟨H²⟩ − ⟨H⟩²)
  std::vector<double> d_accum;     // running Fubini-Study path length
  std::vector<double> energy_std_mid;  // ΔE at each step midpoint (cubic Hermite state)
};

using TimeHamiltonian = std::function<CMatrix(double)>;

/// Fixed-step RK4 for i∂ₜψ = H(t)ψ, renormalizing after every step. Throws
/// NormDrift when a step changes the norm by more than 1e-6.
Trajectory evolve(const TimeHamiltonian& h, const StateVector& psi0, double duration, int steps);

/// max over steps of |Δd/Δt − ΔE| with ΔE averaged over the step ends.
double speed_residual(const Trajectory& traj);

/// Pancharatnam phase of a closed trajectory (last state dropped as the
/// repeat of the first). Throws NotCyclic.
double trajectory_berry_phase(const Trajectory& traj, double tol = kTol.cyclic);

struct SpeedLimitReport {
  double residual = 0.0;     // |d d/dt − ΔE| maximum
  double mean_energy_std = 0.0;
  double path_length = 0.0;  // ∫ΔE dt realized as accumulated distance
  BoundChain chain;          // [τ, |γ_B|/⟨ΔE⟩]
};

/// Throws NotCyclic when first and last states differ projectively by more
/// than `tol`.
SpeedLimitReport speed_limit_report(const Trajectory& traj, double gamma_b, double tol = kTol.cyclic);

/// H(t) = (ω₀/2) n(t)·σ with n(t) precessing on a cone of half-angle θc
/// with period τ.
TimeHamiltonian rotating_field(double larmor, double cone_angle, double period);

/// Initial state whose evolution under rotating_field is exactly cyclic
/// with period τ (eigenstate of the rotating-frame Hamiltonian adiabatically
/// connected to the instantaneous ground state).
StateVector cyclic_initial_state(double larmor, double cone_angle, double period);

/// [∫_FS Tr g dσ, ∫ g_ℓℓ dk_ℓ, d_FS²/ℓ_FS, γ_B²/ℓ_FS] for a Dirac or
/// rhombohedral Fermi circle. d and γ are aggregated over split sub-loops.
BoundChain eph_bound_chain(const ModelSpec& m, double fermi_energy, int n);

enum class MetricConvention {
  Computed,  // metric of the supplied Bloch states
  Minimal,   // fully dimerized SSH taken with d_FS = γ_B = 0
};

/// [D_s, d_FS² bound, γ_B² bound] for a 1D model with ħ = 1.
BoundChain superfluid_weight_1d(const ModelSpec& m, double U, double filling, int n_k,
                                MetricConvention convention = MetricConvention::Computed);

}  // namespace qiso
