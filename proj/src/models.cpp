#include "qiso/models.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qiso {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm2(std::span<const double> k) {
  double s = 0.0;
  for (double x : k) s += x * x;
  return std::sqrt(s);
}

void require_k(const ModelSpec& m, std::span<const double> k) {
  if (static_cast<int>(k.size()) != m.dim_k()) {
    throw Error(ErrorKind::DimensionMismatch, m.name() + " expects a " + std::to_string(m.dim_k()) + "D momentum");
  }
  for (double x : k) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "momentum must be finite");
  }
}

Eigen::Vector3d fourier_h(const BlochFourier1D& f, double ka) {
  Eigen::Vector3d h = f.constant;
  for (std::size_t m = 0; m < f.cos_terms.size(); ++m) h += f.cos_terms[m] * std::cos((m + 1.0) * ka);
  for (std::size_t m = 0; m < f.sin_terms.size(); ++m) h += f.sin_terms[m] * std::sin((m + 1.0) * ka);
  return h;
}

Eigen::Vector3d tabulated_h(const Tabulated1D& t, double ka) {
  const std::size_t n = t.ka.size();
  double x = std::fmod(ka, 2.0 * kPi);
  if (x < 0.0) x += 2.0 * kPi;
  // First grid point strictly greater than x; the segment wraps through 2π.
  const auto it = std::upper_bound(t.ka.begin(), t.ka.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - t.ka.begin());
  const std::size_t i1 = hi % n;
  const std::size_t i0 = (hi + n - 1) % n;
  double k0 = t.ka[i0];
  double k1 = t.ka[i1];
  if (hi == 0) k0 -= 2.0 * kPi;
  if (hi == n) k1 += 2.0 * kPi;
  const double s = (k1 > k0) ? (x - k0) / (k1 - k0) : 0.0;
  return (1.0 - s) * t.h[i0] + s * t.h[i1];
}

}  // namespace

int ModelSpec::dim_k() const {
  return std::visit(overloaded{[](const Rhombohedral&) { return 2; }, [](const Dirac2D&) { return 2; },
                               [](const auto&) { return 1; }},
                    kind);
}

std::string ModelSpec::name() const {
  return std::visit(overloaded{[](const SSH&) { return std::string("ssh"); },
                               [](const Creutz&) { return std::string("creutz"); },
                               [](const Rhombohedral&) { return std::string("rhombohedral"); },
                               [](const Dirac2D&) { return std::string("dirac"); },
                               [](const BlochFourier1D&) { return std::string("fourier"); },
                               [](const Tabulated1D&) { return std::string("tabulated"); }},
                    kind);
}

Band parse_band(std::string_view s) {
  if (s == "lower") return Band::Lower;
  if (s == "upper") return Band::Upper;
  throw Error(ErrorKind::InvalidArgument, "band must be 'lower' or 'upper'");
}

std::string_view to_string(Band b) noexcept { return b == Band::Lower ? "lower" : "upper"; }

Eigen::Vector3d bloch_coefficients(const ModelSpec& m, std::span<const double> k) {
  require_k(m, k);
  const double a = m.lattice_const;
  return std::visit(
      overloaded{
          [&](const SSH& s) {
            const double ka = k[0] * a;
            return Eigen::Vector3d(s.v + s.w * std::cos(ka), s.w * std::sin(ka), 0.0);
          },
          [&](const Creutz& c) {
            const double ka = k[0] * a;
            return Eigen::Vector3d(2.0 * c.t * std::cos(ka), 0.0, 2.0 * c.t * std::sin(ka));
          },
          [&](const Rhombohedral& r) {
            const cplx off = r.scale * std::pow(cplx(k[0], -k[1]), r.N);
            return Eigen::Vector3d(off.real(), -off.imag(), 0.0);
          },
          [&](const Dirac2D& d) { return Eigen::Vector3d(d.v_f * k[0], d.v_f * k[1], 0.0); },
          [&](const BlochFourier1D& f) { return fourier_h(f, k[0] * a); },
          [&](const Tabulated1D& t) { return tabulated_h(t, k[0] * a); },
      },
      m.kind);
}

CMatrix hamiltonian(const ModelSpec& m, std::span<const double> k) {
  const Eigen::Vector3d h = bloch_coefficients(m, k);
  return h.x() * pauli::x() + h.y() * pauli::y() + h.z() * pauli::z();
}

double energy_scale(const ModelSpec& m, std::span<const double> k) {
  return std::visit(
      overloaded{
          [&](const SSH& s) { return std::abs(s.v) + std::abs(s.w); },
          [&](const Creutz& c) { return 2.0 * std::abs(c.t); },
          [&](const Rhombohedral& r) { return std::abs(r.scale) * std::pow(norm2(k), r.N); },
          [&](const Dirac2D& d) { return std::abs(d.v_f) * norm2(k); },
          [&](const BlochFourier1D& f) {
            double s = f.constant.norm();
            for (const auto& v : f.cos_terms) s += v.norm();
            for (const auto& v : f.sin_terms) s += v.norm();
            return s;
          },
          [&](const Tabulated1D& t) {
            double s = 0.0;
            for (const auto& v : t.h) s = std::max(s, v.norm());
            return s;
          },
      },
      m.kind);
}

StateVector band_state(const ModelSpec& m, std::span<const double> k, Band band) {
  const CMatrix h = hamiltonian(m, k);
  return eigh_band(h, band == Band::Lower ? 0 : 1, energy_scale(m, k));
}

CMatrix chiral_operator(const ModelSpec& m) {
  return std::visit(overloaded{[](const Creutz&) { return pauli::y(); },
                               [](const SSH&) { return pauli::z(); },
                               [](const Rhombohedral&) { return pauli::z(); },
                               [](const Dirac2D&) { return pauli::z(); },
                               [](const auto&) -> CMatrix {
                                 throw Error(ErrorKind::InvalidArgument, "model has no built-in chiral operator");
                               }},
                    m.kind);
}

Loop bz_loop(const ModelSpec& m, Band band, int n) {
  if (m.dim_k() != 1) throw Error(ErrorKind::WrongDimension, "bz_loop needs a 1D model");
  if (n < 3) throw Error(ErrorKind::BadResolution, "bz_loop needs n >= 3");
  CMatrix c(2, n);
  for (int j = 0; j < n; ++j) {
    const double k = 2.0 * kPi * j / (n * m.lattice_const);
    c.col(j) = band_state(m, std::span<const double>(&k, 1), band).amplitudes();
  }
  return Loop::from_columns(std::move(c));
}

FermiSurface fermi_surface_loop(const ModelSpec& m, double fermi_energy, int n, Band band) {
  if (!(fermi_energy > 0.0)) throw Error(ErrorKind::InvalidArgument, "Fermi energy must be positive");
  if (n < 3) throw Error(ErrorKind::BadResolution, "Fermi-surface loop needs n >= 3");
  const double radius = std::visit(
      overloaded{[&](const Dirac2D& d) { return fermi_energy / std::abs(d.v_f); },
                 [&](const Rhombohedral& r) { return std::pow(fermi_energy / std::abs(r.scale), 1.0 / r.N); },
                 [](const auto&) -> double {
                   throw Error(ErrorKind::WrongDimension, "Fermi-surface loops need a Dirac or rhombohedral model");
                 }},
      m.kind);
  CMatrix c(2, n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * j / n;
    const std::array<double, 2> k{radius * std::cos(phi), radius * std::sin(phi)};
    c.col(j) = band_state(m, k, band).amplitudes();
  }
  return {Loop::from_columns(std::move(c)), radius, 2.0 * kPi * radius};
}

RMatrix dirac_metric(std::span<const double> k) {
  if (k.size() != 2) throw Error(ErrorKind::DimensionMismatch, "Dirac metric takes a 2D momentum");
  const double kx = k[0], ky = k[1];
  const double k2 = kx * kx + ky * ky;
  if (!(k2 > 0.0)) throw Error(ErrorKind::SingularAtDiracPoint, "quantum metric diverges at k = 0");
  RMatrix g(2, 2);
  g << ky * ky, -kx * ky, -kx * ky, kx * kx;
  return g / (4.0 * k2 * k2);
}

Chart band_chart(const ModelSpec& m, Band band, double step) {
  Chart c;
  c.dim = m.dim_k();
  c.step = step > 0.0 ? step : kTol.fd_step / (c.dim == 1 ? m.lattice_const : 1.0);
  c.map = [m, band](std::span<const double> k) { return band_state(m, k, band); };
  return c;
}

ModelSpec random_gapped_model(std::mt19937_64& rng, int harmonics) {
  std::normal_distribution<double> normal(0.0, 1.0);
  auto vec = [&] { return Eigen::Vector3d(normal(rng), normal(rng), normal(rng)); };
  for (;;) {
    BlochFourier1D f;
    f.constant = vec();
    for (int m = 0; m < harmonics; ++m) {
      f.cos_terms.push_back(vec() / (1.0 + m));
      f.sin_terms.push_back(vec() / (1.0 + m));
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    constexpr int kGrid = 512;
    for (int j = 0; j < kGrid; ++j) {
      const double norm = fourier_h(f, 2.0 * kPi * j / kGrid).norm();
      lo = std::min(lo, norm);
      hi = std::max(hi, norm);
    }
    if (lo >= 0.2 * hi) return ModelSpec{f, 1.0};
  }
}

namespace {

Eigen::Vector3d vec3_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::InvalidArgument, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json vec3_to_json(const Eigen::Vector3d& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

}  // namespace

ModelSpec model_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const nlohmann::json p = j.value("parameters", nlohmann::json::object());
    const double a = j.value("lattice_const", 1.0);
    if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "lattice_const must be positive");
    if (kind == "ssh") return {SSH{p.value("v", 0.0), p.value("w", 1.0)}, a};
    if (kind == "creutz") return {Creutz{p.value("t", 1.0)}, a};
    if (kind == "rhombohedral") {
      const int N = p.value("N", 1);
      if (N < 1) throw Error(ErrorKind::InvalidArgument, "rhombohedral N must be >= 1");
      return {Rhombohedral{N, p.value("scale", 1.0)}, a};
    }
    if (kind == "dirac") return {Dirac2D{p.value("v_f", 1.0)}, a};
    if (kind == "fourier") {
      BlochFourier1D f;
      f.constant = vec3_from_json(p.at("constant"));
      for (const auto& v : p.value("cos", nlohmann::json::array())) f.cos_terms.push_back(vec3_from_json(v));
      for (const auto& v : p.value("sin", nlohmann::json::array())) f.sin_terms.push_back(vec3_from_json(v));
      return {f, a};
    }
    if (kind == "tabulated") return tabulated_model_from_csv(p.at("file").get<std::string>(), a);
    throw Error(ErrorKind::InvalidArgument, "unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("bad model definition: ") + e.what());
  }
}

nlohmann::json model_to_json(const ModelSpec& m) {
  nlohmann::json p = std::visit(
      overloaded{
          [](const SSH& s) { return nlohmann::json{{"v", s.v}, {"w", s.w}}; },
          [](const Creutz& c) { return nlohmann::json{{"t", c.t}}; },
          [](const Rhombohedral& r) { return nlohmann::json{{"N", r.N}, {"scale", r.scale}}; },
          [](const Dirac2D& d) { return nlohmann::json{{"v_f", d.v_f}}; },
          [](const BlochFourier1D& f) {
            nlohmann::json c = nlohmann::json::array(), s = nlohmann::json::array();
            for (const auto& v : f.cos_terms) c.push_back(vec3_to_json(v));
            for (const auto& v : f.sin_terms) s.push_back(vec3_to_json(v));
            return nlohmann::json{{"constant", vec3_to_json(f.constant)}, {"cos", c}, {"sin", s}};
          },
          [](const Tabulated1D& t) { return nlohmann::json{{"points", t.ka.size()}}; },
      },
      m.kind);
  return {{"kind", m.name()}, {"parameters", p}, {"lattice_const", m.lattice_const}};
}

ModelSpec tabulated_model_from_csv(const std::string& path, double lattice_const) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  Tabulated1D t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double ka, hx, hy, hz;
    if (!(row >> ka >> hx >> hy >> hz)) {
      if (t.ka.empty()) continue;  // header
      throw Error(ErrorKind::InvalidArgument, "malformed row in " + path);
    }
    t.ka.push_back(ka);
    t.h.emplace_back(hx, hy, hz);
  }
  if (t.ka.size() < 2) throw Error(ErrorKind::InvalidArgument, "tabulated model needs at least two rows");
  for (std::size_t i = 1; i < t.ka.size(); ++i) {
    if (!(t.ka[i] > t.ka[i - 1])) throw Error(ErrorKind::InvalidArgument, "k grid must be increasing");
  }
  if (t.ka.front() < 0.0 || t.ka.back() >= 2.0 * kPi) {
    throw Error(ErrorKind::InvalidArgument, "k grid must lie in [0, 2pi)");
  }
  return {t, lattice_const};
}

}  // namespace qiso
