#include "qiso/loops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "geometry_detail.hpp"

namespace qiso {

namespace {

constexpr double kPi = std::numbers::pi;

void require_resolution(int n, int minimum = 3) {
  if (n < minimum) {
    throw Error(ErrorKind::BadResolution, "resolution " + std::to_string(n) + " is below " + std::to_string(minimum));
  }
}

CVector two_level(double theta, double phi) {
  CVector v(2);
  v << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
  return v;
}

CVector bloch_column(const Eigen::Vector3d& n) { return state_from_bloch(n).amplitudes(); }

Eigen::Vector3d any_perpendicular(const Eigen::Vector3d& a) {
  const Eigen::Vector3d trial = std::abs(a.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  return (trial - a * a.dot(trial)).normalized();
}

}  // namespace

FourierLoopSpec FourierLoopSpec::zeros(int M, int K, int n) {
  FourierLoopSpec s;
  s.M = M;
  s.K = K;
  s.n = n;
  s.coeffs = CMatrix::Zero(std::max(M - 1, 0), 2 * std::max(K, 0) + 1);
  return s;
}

void FourierLoopSpec::validate() const {
  if (M < 2) throw Error(ErrorKind::InvalidArgument, "Fourier loops need M >= 2");
  if (K < 0) throw Error(ErrorKind::InvalidArgument, "harmonic cutoff K must be >= 0");
  if (n < 8 * (K + 1)) throw Error(ErrorKind::BadResolution, "Fourier loops need n >= 8(K+1)");
  if (coeffs.rows() != M - 1 || coeffs.cols() != 2 * K + 1) {
    throw Error(ErrorKind::InvalidArgument, "coefficient table must be (M-1) x (2K+1)");
  }
  if (!coeffs.allFinite()) throw Error(ErrorKind::InvalidArgument, "coefficients must be finite");
}

Loop bloch_circle(double theta, int n) {
  require_resolution(n);
  if (!(theta > 0.0 && theta < kPi)) throw Error(ErrorKind::OutOfRange, "polar angle must lie in (0, pi)");
  CMatrix c(2, n);
  for (int j = 0; j < n; ++j) c.col(j) = two_level(theta, 2.0 * kPi * j / n);
  return Loop::from_columns(std::move(c));
}

Loop great_circle(const Eigen::Vector3d& axis, int n, int turns) {
  require_resolution(n);
  if (turns < 1) throw Error(ErrorKind::InvalidArgument, "turns must be >= 1");
  if (!(axis.norm() > 0.0)) throw Error(ErrorKind::ZeroVector, "axis must be nonzero");
  const Eigen::Vector3d a = axis.normalized();
  const Eigen::Vector3d u = any_perpendicular(a);
  const Eigen::Vector3d v = a.cross(u);
  CMatrix c(2, n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * turns * j / n;
    c.col(j) = bloch_column(std::cos(phi) * u + std::sin(phi) * v);
  }
  return Loop::from_columns(std::move(c));
}

Loop spherical_polygon(int N, double theta, int n_per_edge) {
  if (N < 3) throw Error(ErrorKind::InvalidArgument, "a polygon needs N >= 3 vertices");
  if (n_per_edge < 1) throw Error(ErrorKind::BadResolution, "n_per_edge must be >= 1");
  if (!(theta > 0.0 && theta < kPi)) throw Error(ErrorKind::OutOfRange, "polar angle must lie in (0, pi)");
  std::vector<Eigen::Vector3d> vertices;
  for (int k = 0; k < N; ++k) {
    const double alpha = 2.0 * kPi * k / N;
    vertices.emplace_back(std::sin(theta) * std::cos(alpha), std::sin(theta) * std::sin(alpha), std::cos(theta));
  }
  CMatrix c(2, N * n_per_edge);
  for (int k = 0; k < N; ++k) {
    const Eigen::Vector3d& p = vertices[static_cast<std::size_t>(k)];
    const Eigen::Vector3d& q = vertices[static_cast<std::size_t>((k + 1) % N)];
    const double angle = std::acos(std::clamp(p.dot(q), -1.0, 1.0));
    for (int i = 0; i < n_per_edge; ++i) {
      const double s = static_cast<double>(i) / n_per_edge;
      const Eigen::Vector3d x = (std::sin((1.0 - s) * angle) * p + std::sin(s * angle) * q) / std::sin(angle);
      c.col(k * n_per_edge + i) = bloch_column(x);
    }
  }
  return Loop::from_columns(std::move(c));
}

Loop fourier_loop(const FourierLoopSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const int K = spec.K;
  CMatrix c(spec.M, n);
  std::vector<cplx> phases(static_cast<std::size_t>(2 * K + 1));
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * kPi * j / n;
    for (int m = -K; m <= K; ++m) phases[static_cast<std::size_t>(m + K)] = std::polar(1.0, m * t);
    c(0, j) = 1.0;
    for (int i = 0; i < spec.M - 1; ++i) {
      cplx z = 0.0;
      for (int m = 0; m < 2 * K + 1; ++m) z += spec.coeffs(i, m) * phases[static_cast<std::size_t>(m)];
      c(i + 1, j) = z;
    }
  }
  if (!c.allFinite()) throw Error(ErrorKind::DegenerateSpec, "Fourier loop produced non-finite amplitudes");
  for (int j = 0; j < n; ++j) c.col(j).normalize();
  for (int j = 0; j < n; ++j) {
    if (!(std::abs(c.col(j).dot(c.col((j + 1) % n))) > kTol.min_overlap)) {
      throw Error(ErrorKind::DegenerateSpec, "consecutive Fourier-loop states are orthogonal");
    }
  }
  return Loop::from_columns(std::move(c));
}

Loop perturb_circle(double theta, double eps, int mode, int n) {
  require_resolution(n);
  if (!(eps >= 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be >= 0");
  if (mode < 1) throw Error(ErrorKind::InvalidArgument, "mode must be >= 1");
  if (!(theta - eps > 0.0 && theta + eps < kPi)) {
    throw Error(ErrorKind::OutOfRange, "theta +- eps leaves (0, pi)");
  }
  CMatrix c(2, n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * j / n;
    c.col(j) = two_level(theta + eps * std::cos(mode * phi), phi);
  }
  return Loop::from_columns(std::move(c));
}

Loop refine(const Loop& loop, int factor) {
  if (factor < 2) throw Error(ErrorKind::InvalidArgument, "refinement factor must be >= 2");
  const Eigen::Index n = loop.size();
  CMatrix out(loop.dim(), n * factor);
  for (Eigen::Index j = 0; j < n; ++j) {
    const CVector a = loop.column(j);
    const CVector b = loop.column((j + 1) % n);
    const cplx ov = a.dot(b);
    const double mag = std::abs(ov);
    if (!(mag > kTol.min_overlap)) {
      throw Error(ErrorKind::IllConditionedSegment, "cannot interpolate across a near-orthogonal segment");
    }
    // Align b so that ⟨a|b'⟩ > 0; the great circle through a and b' is then
    // the horizontal lift of the projective geodesic.
    const CVector b_aligned = b * (std::conj(ov) / mag);
    const double angle = detail::column_distance(a, b_aligned);
    for (int i = 0; i < factor; ++i) {
      const double s = static_cast<double>(i) / factor;
      if (angle < 1e-14) {
        out.col(j * factor + i) = a;
      } else {
        out.col(j * factor + i) = (std::sin((1.0 - s) * angle) * a + std::sin(s * angle) * b_aligned) / std::sin(angle);
      }
    }
  }
  return Loop::from_columns(std::move(out));
}

namespace {

struct Pair {
  Eigen::Index j = -1;
  Eigen::Index k = -1;
  double distance = 0.0;
};

Pair first_coincidence(const CMatrix& c, double tol) {
  const Eigen::Index n = c.cols();
  std::vector<double> arc(static_cast<std::size_t>(n));
  arc[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    arc[static_cast<std::size_t>(i)] = arc[static_cast<std::size_t>(i - 1)] + detail::column_distance(c.col(i - 1), c.col(i));
  }
  const double total = arc.back() + detail::column_distance(c.col(n - 1), c.col(0));
  // Triangle-inequality pruning: if ψₖ sits at distance D from ψⱼ, no ψₖ'
  // closer along the path than D − tol can coincide with ψⱼ.
  constexpr double kSlack = 1e-9;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index k_max = std::min(n - 1, n - 3 + j);
    Eigen::Index k = j + 3;
    while (k <= k_max) {
      const double dist = detail::column_distance(c.col(j), c.col(k));
      if (dist < tol) {
        const double inner = arc[static_cast<std::size_t>(k)] - arc[static_cast<std::size_t>(j)];
        if (inner > 2.0 * tol && total - inner > 2.0 * tol) return {j, k, dist};
        ++k;
        continue;
      }
      const double need = dist - tol - kSlack;
      const auto begin = arc.begin() + k + 1;
      const auto end = arc.begin() + k_max + 1;
      const auto it = std::lower_bound(begin, end, arc[static_cast<std::size_t>(k)] + need);
      k = std::max<Eigen::Index>(k + 1, it - arc.begin());
    }
  }
  return {};
}

}  // namespace

SplitResult split_self_intersections_with_events(const Loop& loop, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "split tolerance must be positive");
  SplitResult result;
  std::vector<CMatrix> pending{loop.columns()};
  std::vector<CMatrix> done;
  while (!pending.empty()) {
    CMatrix c = std::move(pending.back());
    pending.pop_back();
    const Pair p = first_coincidence(c, tol);
    if (p.j < 0) {
      done.push_back(std::move(c));
      continue;
    }
    result.events.push_back({p.j, p.k, p.distance});
    const Eigen::Index n = c.cols();
    const Eigen::Index len_a = p.k - p.j;
    CMatrix a = c.middleCols(p.j, len_a);
    CMatrix b(c.rows(), n - len_a);
    b.leftCols(n - p.k) = c.rightCols(n - p.k);
    b.rightCols(p.j) = c.leftCols(p.j);
    // Push b first so a (which starts earlier in the original) is processed first.
    pending.push_back(std::move(b));
    pending.push_back(std::move(a));
  }
  result.loops.reserve(done.size());
  for (auto& c : done) result.loops.push_back(Loop::from_columns(std::move(c)));
  return result;
}

std::vector<Loop> split_self_intersections(const Loop& loop, double tol) {
  return split_self_intersections_with_events(loop, tol).loops;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

FourierLoopSpec random_fourier_spec(int M, int K, int n, std::mt19937_64& rng) {
  FourierLoopSpec spec = FourierLoopSpec::zeros(M, K, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(std::log(0.1), std::log(3.0));
  const double scale = std::exp(uniform(rng));
  for (int i = 0; i < M - 1; ++i) {
    for (int m = -K; m <= K; ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      spec.coeff(i, m) = scale * cplx(re, im) / (std::sqrt(2.0) * (1.0 + std::abs(m)));
    }
  }
  spec.validate();
  return spec;
}

Loop random_simple_bloch_loop(int n, std::mt19937_64& rng) {
  require_resolution(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d axis(normal(rng), normal(rng), normal(rng));
  axis.normalize();
  const Eigen::Vector3d u = any_perpendicular(axis);
  const Eigen::Vector3d v = axis.cross(u);

  constexpr double kMargin = 0.05;
  const double theta0 = 0.2 + (kPi - 0.4) * unit(rng);
  const double room = std::min(theta0, kPi - theta0) - kMargin;
  const double budget = room * unit(rng);
  std::array<double, 3> amp{};
  std::array<double, 3> phase{};
  double sum = 0.0;
  for (std::size_t m = 0; m < amp.size(); ++m) {
    amp[m] = unit(rng);
    phase[m] = 2.0 * kPi * unit(rng);
    sum += amp[m];
  }
  for (auto& a : amp) a *= budget / std::max(sum, 1e-12);
  const double orientation = unit(rng) < 0.5 ? 1.0 : -1.0;

  CMatrix c(2, n);
  for (int j = 0; j < n; ++j) {
    const double phi = orientation * 2.0 * kPi * j / n;
    double theta = theta0;
    for (std::size_t m = 0; m < amp.size(); ++m) {
      theta += amp[m] * std::cos(static_cast<double>(m + 1) * phi + phase[m]);
    }
    const Eigen::Vector3d p = std::sin(theta) * (std::cos(phi) * u + std::sin(phi) * v) + std::cos(theta) * axis;
    c.col(j) = bloch_column(p);
  }
  return Loop::from_columns(std::move(c));
}

}  // namespace qiso
