#pragma once

#include <array>

namespace epu {

/// Gated similarities of one document to Economy (alpha), Policy (beta) and
/// Uncertainty (gamma). Each component is 0 or lies in [t_min, 1].
struct ConceptTriple {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  bool operator==(const ConceptTriple&) const = default;
};

struct TriangleSides {
  double l_ab = 0.0;
  double l_ac = 0.0;
  double l_bc = 0.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Vertices on the tri-axial system (three axes 120° apart, origin at 0):
///   A = (0, α),  B = (√3/2·β, −β/2),  C = (−√3/2·γ, −γ/2)
std::array<Point, 3> vertices(const ConceptTriple& t);

/// Side lengths of the triangle ABC, e.g. l_ab = √(α² + β² + αβ).
TriangleSides triangle_sides(const ConceptTriple& t);

/// Heron area of the triangle ABC, or 0 when any component is 0. The Heron
/// factors S − L are clamped at 0 before the square root.
double epu_score(const ConceptTriple& t);

}  // namespace epu
