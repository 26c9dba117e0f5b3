#include "qiso/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qiso {

namespace {

constexpr double kPi = std::numbers::pi;

double geometric_tol(double scale) { return 1e-12 * std::max(1.0, scale); }

void finish(IneqReport& r) {
  r.margin = r.lhs - r.rhs;
  r.saturated = std::abs(r.margin) <= r.tol;
}

}  // namespace

std::string_view to_string(IneqKind kind) noexcept {
  switch (kind) {
    case IneqKind::Plane: return "plane";
    case IneqKind::Sphere: return "sphere";
    case IneqKind::StrongQII: return "strong_qii";
    case IneqKind::WeakQII: return "weak_qii";
    case IneqKind::Aggregate: return "aggregate";
  }
  return "unknown";
}

IneqReport plane_check(double perimeter, double area) {
  if (!(perimeter >= 0.0) || !(area >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "perimeter and area must be nonnegative");
  }
  IneqReport r;
  r.name = IneqKind::Plane;
  r.lhs = perimeter * perimeter;
  r.rhs = 4.0 * kPi * area;
  r.tol = geometric_tol(r.lhs + r.rhs);
  r.inputs = {{"P", perimeter}, {"A", area}};
  if (area > 0.0) r.extras["quotient"] = r.lhs / r.rhs;
  finish(r);
  return r;
}

IneqReport sphere_check(double perimeter, double area, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
  if (!(perimeter >= 0.0)) throw Error(ErrorKind::InvalidArgument, "perimeter must be nonnegative");
  const double full = 4.0 * kPi * radius * radius;
  if (!(area >= 0.0) || area > full * (1.0 + 1e-12)) {
    throw Error(ErrorKind::AreaExceedsSphere, "area must lie in [0, 4 pi R^2]");
  }
  IneqReport r;
  r.name = IneqKind::Sphere;
  r.lhs = perimeter * perimeter;
  r.rhs = 4.0 * kPi * area - area * area / (radius * radius);
  r.tol = geometric_tol(r.lhs + 4.0 * kPi * area);
  r.inputs = {{"P", perimeter}, {"A", area}, {"R", radius}};
  if (r.rhs > 0.0) r.extras["quotient"] = r.lhs / r.rhs;
  finish(r);
  return r;
}

IneqReport strong_qii(const LoopSummary& s, bool post_split) {
  IneqReport r;
  r.name = IneqKind::StrongQII;
  const double g = std::abs(s.gamma_b);
  r.lhs = (g - kPi) * (g - kPi) + s.d_fs * s.d_fs;
  r.rhs = kPi * kPi;
  r.tol = saturation_tolerance(s.convergence_est);
  r.conjecture = post_split || s.dim > 2;
  r.inputs = {{"d_fs", s.d_fs}, {"gamma_b", s.gamma_b}};
  finish(r);
  return r;
}

IneqReport weak_qii(const LoopSummary& s) {
  IneqReport r;
  r.name = IneqKind::WeakQII;
  r.lhs = s.d_fs;
  r.rhs = s.gamma_b;
  r.tol = saturation_tolerance(s.convergence_est);
  r.inputs = {{"d_fs", s.d_fs}, {"gamma_b", s.gamma_b}};
  r.margin_abs = s.d_fs - std::abs(s.gamma_b);
  finish(r);
  return r;
}

IneqReport aggregate_subloops(std::span<const LoopSummary> parts) {
  if (parts.empty()) throw Error(ErrorKind::EmptyInput, "no sub-loop summaries to aggregate");
  IneqReport r;
  r.name = IneqKind::Aggregate;
  double d = 0.0, gamma = 0.0, gamma_abs = 0.0, conv = 0.0;
  for (const auto& s : parts) {
    d += s.d_fs;
    gamma += s.gamma_b;
    gamma_abs += std::abs(s.gamma_b);
    conv = std::max(conv, s.convergence_est);
  }
  r.lhs = d;
  r.rhs = gamma;
  r.tol = saturation_tolerance(conv) * static_cast<double>(parts.size());
  r.margin_abs = d - gamma_abs;
  r.inputs = {{"d_fs", d}, {"gamma_b", gamma}};
  r.extras = {{"gamma_total", gamma}, {"subloops", static_cast<double>(parts.size())}};
  finish(r);
  return r;
}

double regular_polygon_quotient(int N) {
  if (N < 3) throw Error(ErrorKind::InvalidArgument, "a polygon needs N >= 3 sides");
  return (N / kPi) * std::tan(kPi / N);
}

double bloch_sphere_quotient(const LoopSummary& s) {
  constexpr double R = 0.5;
  const double area = 2.0 * std::abs(s.gamma_b) * R * R;
  const double denom = 4.0 * kPi * area - area * area / (R * R);
  if (!(denom > 0.0)) throw Error(ErrorKind::InvalidArgument, "loop encloses no area");
  return s.d_fs * s.d_fs / denom;
}

}  // namespace qiso
