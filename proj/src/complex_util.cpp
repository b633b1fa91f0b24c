#include "rsgdim/complex_util.hpp"

#include <algorithm>

namespace rsg {

double chordal_distance(Complex a, Complex b) {
  bool ia = is_infinite(a), ib = is_infinite(b);
  if (ia && ib) return 0.0;
  if (ia || ib) {
    Complex f = ia ? b : a;
    return 2.0 / std::sqrt(1.0 + abs2(f));
  }
  double num = 2.0 * std::abs(a - b);
  double den = std::sqrt((1.0 + abs2(a)) * (1.0 + abs2(b)));
  return num / den;
}

double spherical_distance(Complex a, Complex b) {
  // chord of the unit sphere has length d = 2*sin(theta/2)
  double chord = chordal_distance(a, b);
  double half = std::clamp(chord / 2.0, 0.0, 1.0);
  return 2.0 * std::asin(half);
}

Sphere3 to_sphere(Complex p) {
  if (is_infinite(p)) return {0.0, 0.0, 1.0};
  double d = 1.0 + abs2(p);
  return {2.0 * p.real() / d, 2.0 * p.imag() / d, (abs2(p) - 1.0) / d};
}

Complex from_sphere(const Sphere3& s) {
  if (s.z >= 1.0 - 1e-15) return complex_infinity();
  double d = 1.0 - s.z;
  return {s.x / d, s.y / d};
}

}  // namespace rsg
