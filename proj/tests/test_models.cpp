#include <doctest.h>

#include <fstream>
#include <random>

#include "oracles.hpp"
#include "qiso/error.hpp"
#include "qiso/inequalities.hpp"
#include "qiso/loops.hpp"
#include "qiso/models.hpp"

using namespace qiso;
using oracle::pi;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

IneqReport aggregate(const Loop& loop) {
  std::vector<LoopSummary> parts;
  for (const Loop& p : split_self_intersections(loop)) parts.push_back(summarize(p));
  return aggregate_subloops(parts);
}

std::vector<ModelSpec> builtins() {
  return {{SSH{0.0, 1.0}, 1.0}, {SSH{0.5, 1.0}, 1.0}, {SSH{2.0, 1.0}, 1.0}, {Creutz{1.0}, 1.0}, {Creutz{0.7}, 2.0},
          {Rhombohedral{1, 1.0}, 1.0}, {Rhombohedral{3, 0.5}, 1.0}, {Dirac2D{1.0}, 1.0}, {Dirac2D{2.0}, 1.0}};
}

}  // namespace

TEST_CASE("hamiltonian examples") {
  const std::array<double, 1> k1{pi / 2};
  CHECK(max_abs(hamiltonian({SSH{0.0, 1.0}, 1.0}, k1) - pauli::y()) < 1e-15);
  const std::array<double, 2> k2{1.0, 0.0};
  CHECK(max_abs(hamiltonian({Dirac2D{1.0}, 1.0}, k2) - pauli::x()) < 1e-15);
  double worst = 0.0;
  for (int j = 0; j < 1000; ++j) {
    const std::array<double, 1> k{2 * pi * j / 1000.0};
    const EigenSystem es = eigh(hamiltonian({Creutz{1.0}, 1.0}, k));
    worst = std::max({worst, std::abs(es.values[0] + 2.0), std::abs(es.values[1] - 2.0)});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("SSH energies follow the closed form") {
  for (double v : {0.0, 0.5, 2.0}) {
    for (int j = 0; j < 64; ++j) {
      const std::array<double, 1> k{2 * pi * j / 64.0};
      const EigenSystem es = eigh(hamiltonian({SSH{v, 1.0}, 1.0}, k));
      CHECK(es.values[1] == doctest::Approx(oracle::ssh_energy(v, 1.0, k[0])).epsilon(1e-12));
      CHECK(es.values[0] == doctest::Approx(-oracle::ssh_energy(v, 1.0, k[0])).epsilon(1e-12));
    }
  }
}

TEST_CASE("band_state examples") {
  const ModelSpec ssh{SSH{0.0, 1.0}, 1.0};
  for (int j = 0; j < 16; ++j) {
    const std::array<double, 1> k{2 * pi * j / 16.0};
    const Eigen::Vector3d n = bloch_vector(band_state(ssh, k, Band::Lower));
    CHECK(std::abs(n.z()) < 1e-12);
  }
  for (double alpha : {0.0, 1.0, 2.5, -2.0}) {
    const std::array<double, 2> k{std::cos(alpha), std::sin(alpha)};
    const Eigen::Vector3d n = bloch_vector(band_state({Dirac2D{1.0}, 1.0}, k, Band::Lower));
    CHECK((n - Eigen::Vector3d(-std::cos(alpha), -std::sin(alpha), 0.0)).norm() < 1e-12);
  }
  for (int j = 0; j < 16; ++j) {
    const std::array<double, 1> k{2 * pi * j / 16.0};
    CHECK(std::abs(bloch_vector(band_state({Creutz{1.0}, 1.0}, k, Band::Lower)).y()) < 1e-12);
  }
  const std::array<double, 1> crit{pi};
  CHECK_THROWS_AS(band_state({SSH{1.0, 1.0}, 1.0}, crit, Band::Lower), Error);
}

TEST_CASE("bz_loop examples") {
  const LoopSummary trivial = summarize(bz_loop({SSH{2.0, 1.0}, 1.0}, Band::Lower, 4096));
  CHECK(std::abs(trivial.gamma_b) < 1e-5);
  const LoopSummary topo = summarize(bz_loop({SSH{0.0, 1.0}, 1.0}, Band::Lower, 4096));
  CHECK(topo.d_fs == doctest::Approx(pi));
  CHECK(std::abs(topo.gamma_b) == doctest::Approx(pi));
  const LoopSummary creutz = summarize(bz_loop({Creutz{1.0}, 1.0}, Band::Lower, 4096));
  CHECK(creutz.d_fs == doctest::Approx(pi));
  CHECK(std::abs(creutz.gamma_b) == doctest::Approx(pi));
  CHECK_THROWS_AS(bz_loop({Dirac2D{1.0}, 1.0}, Band::Lower, 64), Error);
}

TEST_CASE("fermi_surface_loop examples") {
  for (double ef : {0.3, 1.0, 5.0}) {
    const LoopSummary s = summarize(fermi_surface_loop({Dirac2D{1.0}, 1.0}, ef, 2048).loop);
    CHECK(s.d_fs == doctest::Approx(pi));
    CHECK(std::abs(s.gamma_b) == doctest::Approx(pi));
  }
  CHECK(fermi_surface_loop({Dirac2D{1.0}, 1.0}, 2.0, 64).perimeter == doctest::Approx(4 * pi));
  const IneqReport r3 = aggregate(fermi_surface_loop({Rhombohedral{3, 1.0}, 1.0}, 1.0, 3000).loop);
  CHECK(std::abs(r3.lhs - 3 * pi) < 1e-5);
  CHECK(std::abs(std::abs(r3.rhs) - 3 * pi) < 1e-5);
  CHECK_THROWS_AS(fermi_surface_loop({SSH{}, 1.0}, 1.0, 64), Error);
}

TEST_CASE("dirac_metric examples") {
  const std::array<double, 2> a{1.0, 0.0}, b{0.0, 2.0}, zero{0.0, 0.0};
  const RMatrix ga = dirac_metric(a), gb = dirac_metric(b);
  CHECK(ga(0, 0) == 0.0);
  CHECK(ga(1, 1) == doctest::Approx(0.25));
  CHECK(gb(0, 0) == doctest::Approx(1.0 / 16));
  CHECK(gb(1, 1) == 0.0);
  CHECK_THROWS_AS(dirac_metric(zero), Error);

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::array<double, 2> k{u(rng), u(rng)};
    const RMatrix g = dirac_metric(k);
    const auto ref = oracle::dirac_metric(k[0], k[1]);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(g(i / 2, i % 2) - ref[static_cast<std::size_t>(i)]) < 1e-14);
    const Eigen::Vector2d r(k[0], k[1]);
    CHECK(std::abs(r.normalized().dot(g * r.normalized())) < 1e-14);
    CHECK(g.trace() == doctest::Approx(1.0 / (4 * r.squaredNorm())));
  }
}

TEST_CASE("property: chiral symmetry of the built-ins") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const ModelSpec& m : builtins()) {
    const CMatrix c = chiral_operator(m);
    for (int trial = 0; trial < 50; ++trial) {
      const std::array<double, 2> k{u(rng), u(rng)};
      const CMatrix h = hamiltonian(m, std::span<const double>(k.data(), static_cast<std::size_t>(m.dim_k())));
      CHECK(max_abs(h * c + c * h) < 1e-12);
    }
  }
}

TEST_CASE("property: rhombohedral winding") {
  for (int N = 1; N <= 5; ++N) {
    const IneqReport r = aggregate(fermi_surface_loop({Rhombohedral{N, 1.0}, 1.0}, 0.7, 1000 * N).loop);
    CHECK(std::abs(std::abs(r.rhs) - N * pi) < 1e-5);
    CHECK(std::abs(r.lhs - N * pi) < 1e-5);
  }
}

TEST_CASE("model JSON round trip and tabulated CSV") {
  for (const ModelSpec& m : builtins()) {
    const ModelSpec back = model_from_json(model_to_json(m));
    const std::array<double, 2> k{0.37, -0.81};
    const auto ks = std::span<const double>(k.data(), static_cast<std::size_t>(m.dim_k()));
    CHECK(max_abs(hamiltonian(back, ks) - hamiltonian(m, ks)) < 1e-15);
    CHECK(back.lattice_const == m.lattice_const);
  }
  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"kind", "graphene"}}), Error);

  const std::string path = "qiso_test_tabulated.csv";
  {
    std::ofstream out(path);
    out << "ka,hx,hy,hz\n";
    for (int j = 0; j < 512; ++j) {
      const double k = 2 * pi * j / 512;
      out << k << "," << std::cos(k) << "," << std::sin(k) << ",0\n";
    }
  }
  const ModelSpec tab = tabulated_model_from_csv(path);
  const LoopSummary s = summarize(bz_loop(tab, Band::Lower, 512));
  CHECK(s.d_fs == doctest::Approx(pi).epsilon(1e-9));
  CHECK(std::abs(s.gamma_b) == doctest::Approx(pi));
  std::remove(path.c_str());
}

TEST_CASE("random gapped models stay gapped") {
  for (int trial = 0; trial < 50; ++trial) {
    std::mt19937_64 rng = make_rng(53, static_cast<std::uint64_t>(trial));
    const ModelSpec m = random_gapped_model(rng);
    CHECK(m.dim_k() == 1);
    CHECK_NOTHROW(bz_loop(m, Band::Lower, 512));
  }
}
