#include "qiso/applications.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <variant>

#include "qiso/inequalities.hpp"
#include "qiso/loops.hpp"

namespace qiso {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> trace_metric_on_bz(const ModelSpec& m, Band band, int n_k) {
  if (m.dim_k() != 1) throw Error(ErrorKind::WrongDimension, "BZ quadrature needs a 1D model");
  if (n_k < 3) throw Error(ErrorKind::BadResolution, "n_k must be >= 3");
  const Chart chart = band_chart(m, band);
  std::vector<double> tr(static_cast<std::size_t>(n_k));
  for (int j = 0; j < n_k; ++j) {
    const double k = 2.0 * kPi * j / (n_k * m.lattice_const);
    tr[static_cast<std::size_t>(j)] = qgt_at(chart, std::span<const double>(&k, 1)).g.trace();
  }
  return tr;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

bool is_flat_band_model(const ModelSpec& m) {
  if (std::holds_alternative<Creutz>(m.kind)) return true;
  if (const auto* s = std::get_if<SSH>(&m.kind)) return s->v == 0.0 || s->w == 0.0;
  return false;
}

CMatrix step_rhs(const CMatrix& h, const CVector& psi) { return cplx(0.0, -1.0) * (h * psi); }

double energy_spread(const CMatrix& h, const CVector& psi) {
  // ‖(H − ⟨H⟩)ψ‖ avoids the cancellation in √(⟨H²⟩ − ⟨H⟩²).
  const CVector hpsi = h * psi;
  const cplx mean = psi.dot(hpsi);
  return (hpsi - mean * psi).norm();
}

}  // namespace

double BoundChain::max_violation() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    worst = std::max(worst, entries[i + 1].value - entries[i].value);
  }
  return entries.size() < 2 ? 0.0 : worst;
}

double BoundChain::spread() const {
  if (entries.empty()) return 0.0;
  double lo = entries.front().value, hi = lo;
  for (const auto& e : entries) {
    lo = std::min(lo, e.value);
    hi = std::max(hi, e.value);
  }
  return hi - lo;
}

double wannier_omega1(const ModelSpec& m, Band band, int n_k) {
  // (a/2π) ∫₀^{2π/a} Tr g dk with the periodic trapezoid rule.
  return mean(trace_metric_on_bz(m, band, n_k));
}

BoundChain wannier_bound_chain(const ModelSpec& m, Band band, int n_k) {
  const double omega1 = wannier_omega1(m, band, n_k);
  const LoopSummary s = summarize(bz_loop(m, band, n_k));
  const double a = m.lattice_const;
  BoundChain chain;
  chain.name = "wannier";
  chain.entries = {
      {"Omega_1", omega1, "length^2"},
      {"(a d_FS / 2pi)^2", std::pow(a * s.d_fs / (2.0 * kPi), 2), "length^2"},
      {"(a gamma_B / 2pi)^2", std::pow(a * s.gamma_b / (2.0 * kPi), 2), "length^2"},
  };
  return chain;
}

Trajectory evolve(const TimeHamiltonian& h, const StateVector& psi0, double duration, int steps) {
  if (steps < 1) throw Error(ErrorKind::BadResolution, "evolve needs at least one step");
  if (!(duration > 0.0)) throw Error(ErrorKind::InvalidArgument, "duration must be positive");
  const double dt = duration / steps;
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.energy_std.reserve(static_cast<std::size_t>(steps) + 1);
  traj.d_accum.reserve(static_cast<std::size_t>(steps) + 1);
  traj.energy_std_mid.reserve(static_cast<std::size_t>(steps));

  auto checked = [&](double t) {
    CMatrix m = h(t);
    if (m.rows() != psi0.dim() || !is_hermitian(m)) {
      throw Error(ErrorKind::NotHermitian, "H(t) must be Hermitian with the state's dimension");
    }
    return m;
  };

  CVector psi = psi0.amplitudes();
  CMatrix h_now = checked(0.0);
  traj.times.push_back(0.0);
  traj.states.push_back(psi0);
  traj.energy_std.push_back(energy_spread(h_now, psi));
  traj.d_accum.push_back(0.0);

  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    const CMatrix h_mid = checked(t + 0.5 * dt);
    const CMatrix h_next = checked(t + dt);
    const CVector k1 = step_rhs(h_now, psi);
    const CVector k2 = step_rhs(h_mid, psi + 0.5 * dt * k1);
    const CVector k3 = step_rhs(h_mid, psi + 0.5 * dt * k2);
    const CVector k4 = step_rhs(h_next, psi + dt * k3);
    CVector next = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = next.norm();
    if (!(std::abs(norm - 1.0) <= kTol.norm_drift)) {
      throw Error(ErrorKind::NormDrift, "RK4 step changed the norm by " + std::to_string(norm - 1.0));
    }
    next /= norm;
    const CVector mid = 0.5 * (psi + next) + (dt / 8.0) * (k1 - step_rhs(h_next, next));
    traj.energy_std_mid.push_back(energy_spread(h_mid, mid / mid.norm()));
    const StateVector s = StateVector::normalized(next);
    traj.d_accum.push_back(traj.d_accum.back() + segment_distance(traj.states.back(), s));
    traj.times.push_back(t + dt);
    traj.states.push_back(s);
    traj.energy_std.push_back(energy_spread(h_next, next));
    psi = std::move(next);
    h_now = h_next;
  }
  return traj;
}

namespace {

// Mean of ΔE over step j by Simpson's rule.
double step_mean_spread(const Trajectory& traj, std::size_t j) {
  if (traj.energy_std_mid.size() + 1 != traj.times.size()) {
    return 0.5 * (traj.energy_std[j] + traj.energy_std[j + 1]);
  }
  return (traj.energy_std[j] + 4.0 * traj.energy_std_mid[j] + traj.energy_std[j + 1]) / 6.0;
}

}  // namespace

double speed_residual(const Trajectory& traj) {
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < traj.times.size(); ++j) {
    const double dt = traj.times[j + 1] - traj.times[j];
    const double rate = (traj.d_accum[j + 1] - traj.d_accum[j]) / dt;
    const double spread = step_mean_spread(traj, j);
    worst = std::max(worst, std::abs(rate - spread));
  }
  return worst;
}

double trajectory_berry_phase(const Trajectory& traj, double tol) {
  if (traj.states.size() < 4) throw Error(ErrorKind::BadResolution, "trajectory too short for a loop");
  if (segment_distance(traj.states.front(), traj.states.back()) > tol) {
    throw Error(ErrorKind::NotCyclic, "trajectory does not return to its initial ray");
  }
  std::vector<StateVector> states(traj.states.begin(), traj.states.end() - 1);
  return loop_berry_phase(Loop::from_states(states));
}

SpeedLimitReport speed_limit_report(const Trajectory& traj, double gamma_b, double tol) {
  if (traj.times.size() < 2) throw Error(ErrorKind::BadResolution, "trajectory too short");
  const double closure = segment_distance(traj.states.front(), traj.states.back());
  if (closure > tol) {
    throw Error(ErrorKind::NotCyclic, "trajectory closure distance " + std::to_string(closure) + " exceeds tolerance");
  }
  SpeedLimitReport r;
  r.residual = speed_residual(traj);
  const double tau = traj.times.back() - traj.times.front();
  double integral = 0.0;
  for (std::size_t j = 0; j + 1 < traj.times.size(); ++j) {
    integral += step_mean_spread(traj, j) * (traj.times[j + 1] - traj.times[j]);
  }
  r.mean_energy_std = integral / tau;
  r.path_length = traj.d_accum.back();
  const double g = std::abs(gamma_b);
  const double bound = g == 0.0 ? 0.0 : g / r.mean_energy_std;
  r.chain.name = "speed_limit";
  r.chain.entries = {{"tau", tau, "hbar/energy"}, {"|gamma_B| hbar / <Delta E>", bound, "hbar/energy"}};
  return r;
}

TimeHamiltonian rotating_field(double larmor, double cone_angle, double period) {
  const double omega = 2.0 * kPi / period;
  return [=](double t) {
    const Eigen::Vector3d n(std::sin(cone_angle) * std::cos(omega * t), std::sin(cone_angle) * std::sin(omega * t),
                            std::cos(cone_angle));
    return CMatrix(0.5 * larmor * (n.x() * pauli::x() + n.y() * pauli::y() + n.z() * pauli::z()));
  };
}

StateVector cyclic_initial_state(double larmor, double cone_angle, double period) {
  // ψ(t) = e^{−iΩtσz/2} φ solves the drive when φ is an eigenvector of
  // H(0) − (Ω/2)σz; e^{−iπσz} = −1 closes the loop after one period.
  const double omega = 2.0 * kPi / period;
  const CMatrix h_rot = rotating_field(larmor, cone_angle, period)(0.0) - 0.5 * omega * pauli::z();
  return eigh_band(h_rot, 0);
}

BoundChain eph_bound_chain(const ModelSpec& m, double fermi_energy, int n) {
  if (!std::holds_alternative<Dirac2D>(m.kind) && !std::holds_alternative<Rhombohedral>(m.kind)) {
    throw Error(ErrorKind::WrongDimension, "electron-phonon chain needs a Dirac or rhombohedral model");
  }
  const FermiSurface fs = fermi_surface_loop(m, fermi_energy, n, Band::Upper);
  const Chart chart = band_chart(m, Band::Upper, kTol.fd_step * std::min(1.0, fs.radius));
  const double dsigma = fs.perimeter / n;
  double trace_integral = 0.0, tangential_integral = 0.0;
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * j / n;
    const std::array<double, 2> k{fs.radius * std::cos(phi), fs.radius * std::sin(phi)};
    const RMatrix g = qgt_at(chart, k).g;
    const Eigen::Vector2d t(-std::sin(phi), std::cos(phi));
    trace_integral += g.trace() * dsigma;
    tangential_integral += t.dot(g * t) * dsigma;
  }
  double d = 0.0, gamma = 0.0;
  for (const Loop& sub : split_self_intersections(fs.loop)) {
    d += loop_distance(sub);
    gamma += loop_berry_phase(sub);
  }
  BoundChain chain;
  chain.name = "electron_phonon";
  chain.entries = {
      {"int_FS Tr g dsigma", trace_integral, "1/momentum"},
      {"int g_ll dk_l", tangential_integral, "1/momentum"},
      {"d_FS^2 / l_FS", d * d / fs.perimeter, "1/momentum"},
      {"gamma_B^2 / l_FS", gamma * gamma / fs.perimeter, "1/momentum"},
  };
  chain.notes.push_back("lambda_geo itself needs a prefactor not fixed here; only the integral chain is reported");
  return chain;
}

BoundChain superfluid_weight_1d(const ModelSpec& m, double U, double filling, int n_k, MetricConvention convention) {
  if (!(filling > 0.0 && filling < 1.0)) throw Error(ErrorKind::InvalidArgument, "filling must lie in (0, 1)");
  const double a = m.lattice_const;
  const double bands = m.bands();
  const double occupancy = filling * (1.0 - filling);
  BoundChain chain;
  chain.name = "superfluid_weight";

  const auto* ssh = std::get_if<SSH>(&m.kind);
  if (convention == MetricConvention::Minimal && ssh != nullptr && (ssh->v == 0.0 || ssh->w == 0.0)) {
    chain.entries = {{"D_s", 0.0, "U*a (hbar=1)"}, {"d_FS^2 bound", 0.0, "U*a (hbar=1)"},
                     {"gamma_B^2 bound", 0.0, "U*a (hbar=1)"}};
    chain.notes.push_back("fully dimerized SSH with the minimal quantum metric: d_FS = gamma_B = 0");
    return chain;
  }

  const double integral = (2.0 * kPi / a) * mean(trace_metric_on_bz(m, Band::Lower, n_k));
  const LoopSummary s = summarize(bz_loop(m, Band::Lower, n_k));
  const double bound_prefactor = a * U / (2.0 * std::pow(kPi, 3) * bands) * occupancy;
  chain.entries = {
      {"D_s", U / (kPi * kPi * bands) * occupancy * integral, "U*a (hbar=1)"},
      {"d_FS^2 bound", bound_prefactor * s.d_fs * s.d_fs, "U*a (hbar=1)"},
      {"gamma_B^2 bound", bound_prefactor * s.gamma_b * s.gamma_b, "U*a (hbar=1)"},
  };
  if (!is_flat_band_model(m)) {
    chain.notes.push_back("dispersive bands: the flat-band D_s formula is applied as a diagnostic extrapolation");
  }
  return chain;
}

}  // namespace qiso
