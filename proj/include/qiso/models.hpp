#pragma once

#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qiso/geometry.hpp"

namespace qiso {

/// H(k) = (v + w cos ka) σx + (w sin ka) σy; intracell v, intercell w.
struct SSH {
  double v = 0.0;
  double w = 1.0;
};
/// π-flux Creutz ladder, H(k) = 2t (cos ka σx + sin ka σz); bands ±2t.
struct Creutz {
  double t = 1.0;
};
/// Chiral N-layer continuum model, off-diagonal scale·(kx − i ky)^N.
struct Rhombohedral {
  int N = 1;
  double scale = 1.0;
};
/// H = v_F (kx σx + ky σy).
struct Dirac2D {
  double v_f = 1.0;
};
/// Smooth 1D Bloch vector h(k) = c₀ + Σₘ (aₘ cos mka + bₘ sin mka).
struct BlochFourier1D {
  Eigen::Vector3d constant = Eigen::Vector3d::Zero();
  std::vector<Eigen::Vector3d> cos_terms;
  std::vector<Eigen::Vector3d> sin_terms;
};
/// Bloch vector tabulated on a periodic grid of ka ∈ [0, 2π), linearly
/// interpolated.
struct Tabulated1D {
  std::vector<double> ka;
  std::vector<Eigen::Vector3d> h;
};

using ModelKind = std::variant<SSH, Creutz, Rhombohedral, Dirac2D, BlochFourier1D, Tabulated1D>;

struct ModelSpec {
  ModelKind kind;
  double lattice_const = 1.0;

  int bands() const { return 2; }
  int dim_k() const;
  std::string name() const;
};

enum class Band { Lower, Upper };

Band parse_band(std::string_view s);
std::string_view to_string(Band b) noexcept;

/// Bloch vector h(k) with H(k) = h·σ.
Eigen::Vector3d bloch_coefficients(const ModelSpec& m, std::span<const double> k);
CMatrix hamiltonian(const ModelSpec& m, std::span<const double> k);

/// Characteristic energy used as the floor of the band-degeneracy test.
double energy_scale(const ModelSpec& m, std::span<const double> k);

/// Gauge-fixed band eigenvector; throws DegenerateAtTolerance at band
/// touchings (Dirac point, SSH critical point).
StateVector band_state(const ModelSpec& m, std::span<const double> k, Band band);

/// Operator C with {H(k), C} = 0 for the chiral built-ins (σz for SSH,
/// rhombohedral and Dirac; σy for Creutz). Throws InvalidArgument for
/// models without one.
CMatrix chiral_operator(const ModelSpec& m);

/// Band states at kⱼ = 2πj/(n a). Throws WrongDimension for 2D models.
Loop bz_loop(const ModelSpec& m, Band band, int n);

struct FermiSurface {
  Loop loop;
  double radius = 0.0;     // |k_F|
  double perimeter = 0.0;  // ℓ_FS = 2π|k_F|
};

/// Band states on the circular Fermi contour of a Dirac or rhombohedral
/// model at energy E_F > 0; kⱼ = k_F (cos φⱼ, sin φⱼ), φⱼ = 2πj/n.
FermiSurface fermi_surface_loop(const ModelSpec& m, double fermi_energy, int n, Band band = Band::Upper);

/// Closed-form Dirac quantum metric (1/4k⁴)[[ky², −kx ky], [−kx ky, kx²]].
RMatrix dirac_metric(std::span<const double> k);

/// Chart k ↦ band state, dimension dim_k(); step defaults to 1e-4/a.
Chart band_chart(const ModelSpec& m, Band band, double step = 0.0);

/// Random 1D two-band model with a smooth Bloch vector (harmonics ≤ `harmonics`)
/// whose |h(k)| stays above 0.2 max|h| on a dense grid.
ModelSpec random_gapped_model(std::mt19937_64& rng, int harmonics = 2);

/// {"kind": "ssh", "parameters": {"v": 0, "w": 1}, "lattice_const": 1}
ModelSpec model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ModelSpec& m);

/// CSV with columns ka,hx,hy,hz (header optional).
ModelSpec tabulated_model_from_csv(const std::string& path, double lattice_const = 1.0);

}  // namespace qiso
