#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qiso/config.hpp"
#include "qiso/error.hpp"

namespace qiso {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// A normalized pure state of an M-level system. The only way to build one
/// is through normalization, so ‖ψ‖ = 1 holds for every instance.
class StateVector {
 public:
  /// Normalizes `v`; throws ZeroVector when ‖v‖ ≤ 1e-300 and
  /// InvalidArgument on non-finite entries.
  static StateVector normalized(CVector v);

  const CVector& amplitudes() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return v_.size(); }
  cplx operator[](Eigen::Index i) const { return v_[i]; }

  /// Same ray, amplitudes multiplied by e^{iα}.
  StateVector with_phase(double alpha) const;

 private:
  explicit StateVector(CVector v) : v_(std::move(v)) {}
  CVector v_;
};

StateVector normalize(const CVector& v);

/// ⟨a|b⟩, conjugating the first argument.
cplx overlap(const StateVector& a, const StateVector& b);

struct EigenSystem {
  RVector values;                    // ascending
  std::vector<StateVector> vectors;  // vectors[i] pairs with values[i]
};

/// Dense Hermitian eigendecomposition. Throws NotHermitian.
EigenSystem eigh(const CMatrix& h);

/// Eigenvector of band `index` (0 = lowest). Throws DegenerateAtTolerance
/// when the gap to a neighbouring level is below 1e-9 · max(‖H‖, scale);
/// `scale` lets callers supply a model energy scale so that isolated
/// zeros of H are still caught.
StateVector eigh_band(const CMatrix& h, Eigen::Index index, double scale = 0.0);

/// |ψ⟩⟨ψ|
CMatrix projector(const StateVector& psi);

bool is_hermitian(const CMatrix& h, double tol = kTol.hermitian);

/// Canonical representative of a ray: first entry with modulus above 1e-10
/// is made real positive.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(const StateVector& psi);

  const StateVector& representative() const noexcept { return rep_; }

  /// |⟨a|b⟩| = 1 within 1e-12.
  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b);

 private:
  StateVector rep_;
};

StateVector gauge_fix(const StateVector& psi);

/// Unit Bloch vector ⟨ψ|σ|ψ⟩ of a two-level state. Throws WrongDimension.
Eigen::Vector3d bloch_vector(const StateVector& psi);

/// Two-level state (cos θ/2, e^{iφ} sin θ/2) pointing along `n` (normalized
/// internally).
StateVector state_from_bloch(const Eigen::Vector3d& n);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

}  // namespace qiso
