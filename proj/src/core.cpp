#include "qiso/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace qiso {

StateVector StateVector::normalized(CVector v) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "state has non-finite amplitudes");
  }
  const double norm = v.norm();
  if (!(norm > kTol.zero_norm)) {
    throw Error(ErrorKind::ZeroVector, "cannot normalize a zero vector");
  }
  v /= norm;
  return StateVector(std::move(v));
}

StateVector StateVector::with_phase(double alpha) const {
  return StateVector(v_ * std::polar(1.0, alpha));
}

StateVector normalize(const CVector& v) { return StateVector::normalized(v); }

cplx overlap(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "overlap of states with different dimension");
  }
  return a.amplitudes().dot(b.amplitudes());
}

bool is_hermitian(const CMatrix& h, double tol) {
  if (h.rows() != h.cols()) return false;
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, h.cwiseAbs().maxCoeff());
}

EigenSystem eigh(const CMatrix& h) {
  if (h.rows() == 0 || !is_hermitian(h)) {
    throw Error(ErrorKind::NotHermitian, "eigh requires a square Hermitian matrix");
  }
  // Symmetrize so round-off in the input cannot leak into the solver.
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  EigenSystem out;
  out.values = solver.eigenvalues();
  out.vectors.reserve(static_cast<std::size_t>(sym.cols()));
  for (Eigen::Index i = 0; i < sym.cols(); ++i) {
    out.vectors.push_back(StateVector::normalized(solver.eigenvectors().col(i)));
  }
  return out;
}

StateVector eigh_band(const CMatrix& h, Eigen::Index index, double scale) {
  EigenSystem sys = eigh(h);
  const Eigen::Index n = sys.values.size();
  if (index < 0 || index >= n) {
    throw Error(ErrorKind::InvalidArgument, "band index out of range");
  }
  const double norm = sys.values.cwiseAbs().maxCoeff();
  const double threshold = kTol.degeneracy * std::max(norm, scale);
  double gap = std::numeric_limits<double>::infinity();
  if (index > 0) gap = std::min(gap, sys.values[index] - sys.values[index - 1]);
  if (index + 1 < n) gap = std::min(gap, sys.values[index + 1] - sys.values[index]);
  if (gap <= threshold) {
    throw Error(ErrorKind::DegenerateAtTolerance,
                "band " + std::to_string(index) + " is degenerate with a neighbour (gap " +
                    std::to_string(gap) + ")");
  }
  return gauge_fix(sys.vectors[static_cast<std::size_t>(index)]);
}

CMatrix projector(const StateVector& psi) {
  return psi.amplitudes() * psi.amplitudes().adjoint();
}

StateVector gauge_fix(const StateVector& psi) {
  const CVector& v = psi.amplitudes();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > kTol.gauge_nonzero) {
      return psi.with_phase(-std::arg(v[i]));
    }
  }
  return psi;
}

ProjectivePoint::ProjectivePoint(const StateVector& psi) : rep_(gauge_fix(psi)) {}

bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.rep_.dim() != b.rep_.dim()) return false;
  return std::abs(1.0 - std::abs(overlap(a.rep_, b.rep_))) <= kTol.projective_equal;
}

Eigen::Vector3d bloch_vector(const StateVector& psi) {
  if (psi.dim() != 2) {
    throw Error(ErrorKind::WrongDimension, "Bloch vector needs a two-level state");
  }
  const cplx a = psi[0];
  const cplx b = psi[1];
  const cplx c = std::conj(a) * b;
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(a) - std::norm(b)};
}

StateVector state_from_bloch(const Eigen::Vector3d& n) {
  const double norm = n.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorKind::ZeroVector, "Bloch vector must be nonzero");
  }
  const Eigen::Vector3d u = n / norm;
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double phi = std::atan2(u.y(), u.x());
  CVector v(2);
  v << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
  return StateVector::normalized(std::move(v));
}

namespace pauli {
CMatrix identity() { return CMatrix::Identity(2, 2); }
CMatrix x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
CMatrix y() {
  CMatrix m(2, 2);
  m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
  return m;
}
CMatrix z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

}  // namespace qiso
