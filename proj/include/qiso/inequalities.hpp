#pragma once

#include <map>
#include <span>
#include <string>

#include "qiso/geometry.hpp"

namespace qiso {

enum class IneqKind { Plane, Sphere, StrongQII, WeakQII, Aggregate };

std::string_view to_string(IneqKind kind) noexcept;

/// One evaluated inequality lhs ≥ rhs. margin = lhs − rhs, so a feasible
/// instance has margin ≥ 0.
struct IneqReport {
  IneqKind name = IneqKind::Plane;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool saturated = false;  // |margin| ≤ tol
  double tol = 0.0;
  /// Strong QII outside the proven two-band simple-loop domain.
  bool conjecture = false;
  /// Weak QII only: d_fs − |γ_B|.
  double margin_abs = 0.0;
  std::map<std::string, double> inputs;
  std::map<std::string, double> extras;  // e.g. quotient, gamma_total

  bool holds(double slack) const { return margin >= -slack; }
};

/// P² ≥ 4πA.
IneqReport plane_check(double perimeter, double area);

/// P² ≥ 4πA − A²/R². Throws AreaExceedsSphere unless 0 ≤ A ≤ 4πR².
IneqReport sphere_check(double perimeter, double area, double radius);

/// (|γ_B| − π)² + d_FS² ≥ π². `post_split` marks summaries of split
/// sub-loops; those and any M > 2 loop are flagged as conjecture checks.
IneqReport strong_qii(const LoopSummary& s, bool post_split = false);

/// d_FS ≥ γ_B (signed); margin_abs carries d_FS − |γ_B|.
IneqReport weak_qii(const LoopSummary& s);

/// Σ d_FS⁽ⁱ⁾ ≥ Σ γ_B⁽ⁱ⁾ over sub-loops. Throws EmptyInput.
IneqReport aggregate_subloops(std::span<const LoopSummary> parts);

/// Inverse isoperimetric quotient P²/(4πA) of a regular planar N-gon,
/// (N/π) tan(π/N).
double regular_polygon_quotient(int N);

/// Spherical isoperimetric quotient P²/(4πA − A²/R²) of a two-level loop,
/// read off the Bloch sphere (R = 1/2, P = d_FS, A = |Ω|R² = 2|γ_B|R²).
double bloch_sphere_quotient(const LoopSummary& s);

}  // namespace qiso
