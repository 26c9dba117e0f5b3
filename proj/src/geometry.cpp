#include "qiso/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geometry_detail.hpp"

namespace qiso {

namespace {

constexpr double kPi = std::numbers::pi;

void check_segments(const CMatrix& c) {
  const Eigen::Index n = c.cols();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double ov = std::abs(c.col(j).dot(c.col((j + 1) % n)));
    if (!(ov > kTol.min_overlap)) {
      throw Error(ErrorKind::IllConditionedSegment,
                  "states " + std::to_string(j) + " and " + std::to_string((j + 1) % n) +
                      " are (nearly) orthogonal");
    }
  }
}

}  // namespace

Loop Loop::from_columns(CMatrix columns) {
  if (columns.cols() < 3) {
    throw Error(ErrorKind::BadResolution, "a loop needs at least three states");
  }
  if (columns.rows() < 1) {
    throw Error(ErrorKind::InvalidArgument, "states must have at least one component");
  }
  if (!columns.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "loop has non-finite amplitudes");
  }
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    const double norm = columns.col(j).norm();
    if (!(norm > kTol.zero_norm)) {
      throw Error(ErrorKind::ZeroVector, "loop state " + std::to_string(j) + " is zero");
    }
    columns.col(j) /= norm;
  }
  check_segments(columns);
  return Loop(std::move(columns));
}

Loop Loop::from_states(const std::vector<StateVector>& states) {
  if (states.size() < 3) {
    throw Error(ErrorKind::BadResolution, "a loop needs at least three states");
  }
  const Eigen::Index m = states.front().dim();
  CMatrix c(m, static_cast<Eigen::Index>(states.size()));
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (states[j].dim() != m) {
      throw Error(ErrorKind::DimensionMismatch, "loop states differ in dimension");
    }
    c.col(static_cast<Eigen::Index>(j)) = states[j].amplitudes();
  }
  return from_columns(std::move(c));
}

StateVector Loop::state(Eigen::Index j) const {
  return StateVector::normalized(columns_.col(j));
}

Loop Loop::reversed() const {
  const Eigen::Index n = size();
  CMatrix c(dim(), n);
  c.col(0) = columns_.col(0);
  for (Eigen::Index j = 1; j < n; ++j) c.col(j) = columns_.col(n - j);
  return Loop(std::move(c));
}

Loop Loop::subsampled(Eigen::Index stride) const {
  if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be positive");
  const Eigen::Index n = (size() + stride - 1) / stride;
  CMatrix c(dim(), n);
  for (Eigen::Index j = 0; j < n; ++j) c.col(j) = columns_.col(j * stride);
  return from_columns(std::move(c));
}

Loop Loop::with_phases(std::span<const double> phases) const {
  if (static_cast<Eigen::Index>(phases.size()) != size()) {
    throw Error(ErrorKind::DimensionMismatch, "one phase per state required");
  }
  CMatrix c = columns_;
  for (Eigen::Index j = 0; j < size(); ++j) c.col(j) *= std::polar(1.0, phases[static_cast<std::size_t>(j)]);
  return Loop(std::move(c));
}

double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * kPi);  // [−π, π]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double segment_distance(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "segment_distance of states with different dimension");
  }
  return detail::column_distance(a.amplitudes(), b.amplitudes());
}

double loop_distance(const Loop& loop) {
  const CMatrix& c = loop.columns();
  const Eigen::Index n = c.cols();
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    total += detail::column_distance(c.col(j), c.col((j + 1) % n));
  }
  return total;
}

double loop_berry_phase(const Loop& loop) {
  const CMatrix& c = loop.columns();
  const Eigen::Index n = c.cols();
  cplx product(1.0, 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx ov = c.col(j).dot(c.col((j + 1) % n));
    const double mag = std::abs(ov);
    if (!(mag > kTol.min_overlap)) {
      throw Error(ErrorKind::IllConditionedSegment, "Berry phase across a near-orthogonal segment");
    }
    product *= ov / mag;
    product /= std::abs(product);
  }
  double gamma = -std::arg(product);
  if (gamma <= -kPi + kTol.branch_edge) gamma += 2.0 * kPi;
  return gamma;
}

double bloch_solid_angle(const Loop& loop) {
  if (loop.dim() != 2) {
    throw Error(ErrorKind::WrongDimension, "solid angle is defined for two-level loops only");
  }
  const Eigen::Index n = loop.size();
  std::vector<Eigen::Vector3d> pts(static_cast<std::size_t>(n));
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx a = loop.columns()(0, j);
    const cplx b = loop.columns()(1, j);
    const cplx ab = std::conj(a) * b;
    Eigen::Vector3d v(2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b));
    pts[static_cast<std::size_t>(j)] = v.normalized();
    centroid += pts[static_cast<std::size_t>(j)];
  }

  // The fan apex must stay away from the loop and from its antipode, where
  // the triangles (apex, nⱼ, nⱼ₊₁) stop being well defined.
  auto clear = [&](const Eigen::Vector3d& ref) {
    for (const auto& p : pts) {
      if ((p - ref).norm() < kTol.pole_clearance || (p + ref).norm() < kTol.pole_clearance) {
        return false;
      }
    }
    return true;
  };
  std::vector<Eigen::Vector3d> candidates{Eigen::Vector3d::UnitZ()};
  if (centroid.norm() > 1e-6) candidates.push_back(-centroid.normalized());
  candidates.push_back(Eigen::Vector3d::UnitX());
  candidates.push_back(Eigen::Vector3d::UnitY());
  candidates.push_back(Eigen::Vector3d(1.0, 2.0, 3.0).normalized());
  candidates.push_back(Eigen::Vector3d(-3.0, 1.0, 2.0).normalized());
  const Eigen::Vector3d* ref = nullptr;
  for (const auto& cand : candidates) {
    if (clear(cand)) {
      ref = &cand;
      break;
    }
  }
  if (ref == nullptr) {
    throw Error(ErrorKind::PoleDegenerate, "no admissible reference point for the solid angle");
  }

  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Vector3d& b = pts[static_cast<std::size_t>(j)];
    const Eigen::Vector3d& c = pts[static_cast<std::size_t>((j + 1) % n)];
    const double num = ref->dot(b.cross(c));
    const double den = 1.0 + ref->dot(b) + ref->dot(c) + b.dot(c);
    total += 2.0 * std::atan2(num, den);
  }
  // Smaller of the two complementary solid angles: reduce mod 4π into (−2π, 2π].
  double omega = std::remainder(total, 4.0 * kPi);
  if (omega <= -2.0 * kPi) omega += 4.0 * kPi;
  return omega;
}

LoopSummary summarize(const Loop& loop) {
  LoopSummary s;
  s.d_fs = loop_distance(loop);
  s.gamma_b = loop_berry_phase(loop);
  s.gamma_total = s.gamma_b;
  s.n_segments = loop.size();
  s.dim = loop.dim();
  if (loop.size() >= 6) {
    try {
      const Loop half = loop.subsampled(2);
      const double dd = std::abs(s.d_fs - loop_distance(half));
      const double dg = std::abs(wrap_phase(s.gamma_b - loop_berry_phase(half)));
      s.convergence_est = std::max(dd, dg);
    } catch (const Error&) {
      s.convergence_est = std::numeric_limits<double>::infinity();
    }
  } else {
    s.convergence_est = std::numeric_limits<double>::infinity();
  }
  return s;
}

QGTensor qgt_at(const Chart& chart, std::span<const double> point) {
  const int d = chart.dim;
  if (d < 1 || static_cast<int>(point.size()) != d) {
    throw Error(ErrorKind::DimensionMismatch, "chart point has the wrong number of coordinates");
  }
  if (!(chart.step > 0.0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");

  std::vector<double> x(point.begin(), point.end());
  const CMatrix p0 = projector(chart.map(x));

  auto central = [&](int mu, double h) {
    std::vector<double> xp = x, xm = x;
    xp[static_cast<std::size_t>(mu)] += h;
    xm[static_cast<std::size_t>(mu)] -= h;
    return CMatrix((projector(chart.map(xp)) - projector(chart.map(xm))) / (2.0 * h));
  };
  auto chi_from = [&](const std::vector<CMatrix>& dp) {
    CMatrix chi(d, d);
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = 0; nu < d; ++nu) {
        chi(mu, nu) = (p0 * dp[static_cast<std::size_t>(mu)] * dp[static_cast<std::size_t>(nu)]).trace();
      }
    }
    return chi;
  };

  const double h = chart.step;
  std::vector<CMatrix> dp_h, dp_h2, dp_rich;
  for (int mu = 0; mu < d; ++mu) {
    dp_h.push_back(central(mu, h));
    dp_h2.push_back(central(mu, 0.5 * h));
    dp_rich.push_back((4.0 * dp_h2.back() - dp_h.back()) / 3.0);
  }

  QGTensor t;
  t.chi = chi_from(dp_rich);
  if (!t.chi.allFinite()) {
    throw Error(ErrorKind::NonFiniteDerivative, "projector derivatives are not finite");
  }
  t.chi = 0.5 * (t.chi + t.chi.adjoint());  // exact Hermiticity
  t.g = t.chi.real();
  t.F = -2.0 * t.chi.imag();
  t.fd_error = (chi_from(dp_h) - chi_from(dp_h2)).cwiseAbs().maxCoeff();
  return t;
}

}  // namespace qiso
