#include <doctest.h>

#include "oracles.hpp"
#include "qiso/error.hpp"
#include "qiso/inequalities.hpp"
#include "qiso/loops.hpp"
#include "qiso/models.hpp"

using namespace qiso;
using oracle::pi;

TEST_CASE("plane_check examples") {
  const IneqReport circle = plane_check(2 * pi, pi);
  CHECK(std::abs(circle.margin) < 1e-12);
  CHECK(circle.saturated);
  CHECK(regular_polygon_quotient(3) == doctest::Approx(1.653).epsilon(1e-3 / 1.653));
  CHECK(regular_polygon_quotient(4) == doctest::Approx(1.273).epsilon(1e-3 / 1.273));
  CHECK(regular_polygon_quotient(6) == doctest::Approx(1.103).epsilon(1e-3 / 1.103));
  // Side s regular hexagon: P = 6s, A = (3√3/2)s².
  const IneqReport hex = plane_check(6.0, 1.5 * std::sqrt(3.0));
  CHECK(hex.extras.at("quotient") == doctest::Approx(regular_polygon_quotient(6)));
  CHECK(hex.margin > 0.0);
}

TEST_CASE("sphere_check examples") {
  for (double theta : {0.2, pi / 4, 2.0}) {
    const double R = 0.5;
    const IneqReport cap = sphere_check(2 * pi * R * std::sin(theta), 2 * pi * R * R * (1 - std::cos(theta)), R);
    CHECK(std::abs(cap.margin) < 1e-12);
    CHECK(cap.saturated);
  }
  const IneqReport hemi = sphere_check(2 * pi, 2 * pi, 1.0);
  CHECK(std::abs(hemi.margin) < 1e-12);

  const oracle::SphericalPolygon tri = oracle::regular_spherical_polygon(3, pi / 4, 0.5);
  CHECK(sphere_check(tri.perimeter, tri.area, 0.5).margin > 0.0);
  CHECK_THROWS_AS(sphere_check(1.0, 5.0, 0.5), Error);
}

TEST_CASE("strong_qii examples") {
  for (double theta = 0.1; theta < 3.05; theta += 0.1) {
    CHECK(std::abs(strong_qii(summarize(bloch_circle(theta, 4096))).margin) < 1e-5);
  }
  LoopSummary point;
  point.n_segments = 8;
  point.dim = 2;
  const IneqReport p = strong_qii(point);
  CHECK(p.margin == 0.0);
  CHECK(p.saturated);

  std::mt19937_64 rng = make_rng(7, 0);
  const Loop loop = fourier_loop(random_fourier_spec(2, 2, 2048, rng));
  for (const Loop& part : split_self_intersections(loop)) {
    CHECK(strong_qii(summarize(part)).margin >= -1e-6);
  }
  CHECK(strong_qii(summarize(fourier_loop(random_fourier_spec(3, 2, 256, rng)))).conjecture);
  CHECK_FALSE(strong_qii(summarize(bloch_circle(1.0, 256))).conjecture);
}

TEST_CASE("weak_qii examples") {
  const IneqReport eq = weak_qii(summarize(great_circle({0, 0, 1}, 1024)));
  CHECK(std::abs(eq.margin) < 1e-9);
  CHECK(eq.saturated);
  LoopSummary point;
  CHECK(weak_qii(point).saturated);
  const IneqReport q = weak_qii(summarize(bloch_circle(pi / 4, 8192)));
  const double expected = oracle::cap_distance(pi / 4) + oracle::cap_solid_angle(pi / 4) / 2;  // γ < 0 here
  CHECK(q.margin == doctest::Approx(expected).epsilon(1e-6));
  const double expected_abs = oracle::cap_distance(pi / 4) - oracle::cap_abs_phase(pi / 4);
  CHECK(q.margin_abs == doctest::Approx(expected_abs).epsilon(1e-6));
  CHECK(q.margin_abs == doctest::Approx(1.3012).epsilon(1e-4));
}

TEST_CASE("aggregate_subloops examples") {
  std::vector<LoopSummary> parts;
  for (const Loop& p : split_self_intersections(great_circle({0, 0, 1}, 512, 2))) parts.push_back(summarize(p));
  const IneqReport two = aggregate_subloops(parts);
  CHECK(two.lhs == doctest::Approx(2 * pi));
  CHECK(two.rhs == doctest::Approx(2 * pi));
  CHECK(two.saturated);

  const FermiSurface fs = fermi_surface_loop(ModelSpec{Rhombohedral{3, 1.0}, 1.0}, 1.0, 3000);
  parts.clear();
  for (const Loop& p : split_self_intersections(fs.loop)) parts.push_back(summarize(p));
  const IneqReport three = aggregate_subloops(parts);
  CHECK(std::abs(three.lhs - 3 * pi) < 1e-5);
  CHECK(std::abs(std::abs(three.rhs) - 3 * pi) < 1e-5);

  CHECK_THROWS_AS(aggregate_subloops({}), Error);
}

TEST_CASE("Bloch-sphere quotient of circles is one") {
  for (double theta : {0.3, 1.0, 1.4}) {
    CHECK(bloch_sphere_quotient(summarize(bloch_circle(theta, 8192))) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(bloch_sphere_quotient(summarize(spherical_polygon(3, pi / 4, 16))) > 1.0);
}

TEST_CASE("property: strong QII on simple two-band loops and the quarter circle") {
  for (int trial = 0; trial < 500; ++trial) {
    std::mt19937_64 rng = make_rng(41, static_cast<std::uint64_t>(trial));
    const LoopSummary s = summarize(random_simple_bloch_loop(1024, rng));
    const IneqReport r = strong_qii(s);
    CHECK(r.margin >= -1e-6);
    if (s.d_fs <= pi) CHECK(s.d_fs * s.d_fs + (std::abs(s.gamma_b) - pi) * (std::abs(s.gamma_b) - pi) >= pi * pi - 1e-6);
  }
}

TEST_CASE("property: weak QII on random Fourier loops") {
  double worst = 1e9;
  for (int trial = 0; trial < 400; ++trial) {
    std::mt19937_64 rng = make_rng(43, static_cast<std::uint64_t>(trial));
    worst = std::min(worst, weak_qii(summarize(fourier_loop(random_fourier_spec(2 + trial % 4, 2, 1024, rng)))).margin);
  }
  CHECK(worst >= -1e-6);
}
