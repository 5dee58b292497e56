#include "epu/triangle.hpp"

#include <algorithm>
#include <cmath>

namespace epu {

namespace {
constexpr double kHalfSqrt3 = 0.86602540378443864676;
}

std::array<Point, 3> vertices(const ConceptTriple& t) {
  return {Point{0.0, t.alpha}, Point{kHalfSqrt3 * t.beta, -t.beta / 2.0},
          Point{-kHalfSqrt3 * t.gamma, -t.gamma / 2.0}};
}

TriangleSides triangle_sides(const ConceptTriple& t) {
  const double a = t.alpha, b = t.beta, c = t.gamma;
  return {std::sqrt(a * a + b * b + a * b), std::sqrt(a * a + c * c + a * c), std::sqrt(b * b + c * c + b * c)};
}

double epu_score(const ConceptTriple& t) {
  if (t.alpha == 0.0 || t.beta == 0.0 || t.gamma == 0.0) return 0.0;
  const auto s = triangle_sides(t);
  const double semi = (s.l_ab + s.l_ac + s.l_bc) / 2.0;
  const double p = semi * std::max(0.0, semi - s.l_ab) * std::max(0.0, semi - s.l_ac) *
                   std::max(0.0, semi - s.l_bc);
  return std::sqrt(p);
}

}  // namespace epu
