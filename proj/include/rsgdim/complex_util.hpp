#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

namespace rsg {

using Complex = std::complex<double>;

// Single point at infinity on the Riemann sphere.
inline Complex complex_infinity() {
  return {std::numeric_limits<double>::infinity(), 0.0};
}

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_infinite(Complex z) { return !is_finite(z); }

// Magnitude above which evaluation switches to the 1/z chart.
inline constexpr double kChartSwitch = 1e6;

inline double abs2(Complex z) { return z.real() * z.real() + z.imag() * z.imag(); }

// Chordal distance on the sphere of radius 1 (diameter 2): 2|a-b| / sqrt((1+|a|^2)(1+|b|^2)).
double chordal_distance(Complex a, Complex b);

// Geodesic distance on the unit sphere (range [0, pi]); the metric 2|dz|/(1+|z|^2).
double spherical_distance(Complex a, Complex b);

// Stereographic projection onto the unit sphere in R^3 (infinity -> north pole).
struct Sphere3 {
  double x, y, z;
};
Sphere3 to_sphere(Complex p);
Complex from_sphere(const Sphere3& s);

// Spherical area element density at z: 4 / (1+|z|^2)^2 (total area 4*pi).
inline double spherical_area_density(Complex z) {
  double d = 1.0 + abs2(z);
  return 4.0 / (d * d);
}

// SplitMix64: cheap splittable generator used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x2545f4914f6cdd1dull * (stream + 1));
  std::uint64_t a = splitmix64(s);
  (void)a;
  return splitmix64(s);
}

}  // namespace rsg
