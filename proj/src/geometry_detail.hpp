#pragma once

#include <cmath>

#include "qiso/core.hpp"

namespace qiso::detail {

/// arccos|⟨a|b⟩| evaluated as atan2(‖b − a⟨a|b⟩‖, |⟨a|b⟩|), which keeps full
/// relative precision for nearly coincident states.
template <typename A, typename B>
double column_distance(const A& a, const B& b) {
  const cplx ov = a.dot(b);
  const double sine = (b - a * ov).norm();
  return std::atan2(sine, std::abs(ov));
}

}  // namespace qiso::detail
