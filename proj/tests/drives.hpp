// Random smooth two-level drives shared by the unit and acceptance tests.
#pragma once

#include <random>

#include "qiso/applications.hpp"

namespace testing_drives {

inline qiso::TimeHamiltonian random_drive(std::mt19937_64& rng, double duration) {
  std::normal_distribution<double> g;
  std::array<std::array<double, 7>, 3> c{};
  for (auto& row : c)
    for (double& x : row) x = g(rng);
  const double w = 2.0 * 3.141592653589793 / duration;
  return [c, w](double t) {
    std::array<double, 3> h{};
    for (int i = 0; i < 3; ++i) {
      h[i] = c[i][0];
      for (int m = 1; m <= 3; ++m) h[i] += c[i][2 * m - 1] * std::cos(m * w * t) + c[i][2 * m] * std::sin(m * w * t);
    }
    return qiso::CMatrix(h[0] * qiso::pauli::x() + h[1] * qiso::pauli::y() + h[2] * qiso::pauli::z());
  };
}

inline qiso::StateVector random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  qiso::CVector v(2);
  v << qiso::cplx(g(rng), g(rng)), qiso::cplx(g(rng), g(rng));
  return qiso::normalize(v);
}

}  // namespace testing_drives
