#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "rsgdim/catalog.hpp"
#include "rsgdim/conditions.hpp"

using namespace rsg;
using rsgtest::thrown_code;

namespace {
MultiMap cantor3() { return catalog_lookup("cantor3").map; }
MultiMap pm2() { return catalog_lookup("pm2").map; }

PointCloud pm2_cloud(long length = 100000) {
  JuliaParams p;
  p.length = length;
  return approximate_julia(pm2(), p);
}
}  // namespace

TEST_CASE("region membership") {
  Region d = Region::disk(Complex(1.0, 0.0), 2.0);
  CHECK(d.contains(Complex(2.9, 0.0)));
  CHECK_FALSE(d.contains(Complex(3.0, 0.0)));  // open: boundary excluded
  CHECK_FALSE(d.contains(complex_infinity()));

  Region a = Region::annulus(Complex(0.0, 0.0), 1.0, 2.0);
  CHECK(a.contains(Complex(1.5, 0.0)));
  CHECK_FALSE(a.contains(Complex(0.5, 0.0)));
  CHECK_FALSE(a.contains(Complex(1.0, 0.0)));

  Region r = Region::rectangle(-1.0, -2.0, 3.0, 4.0);
  CHECK(r.contains(Complex(0.0, 0.0)));
  CHECK_FALSE(r.contains(Complex(3.5, 0.0)));

  CHECK(thrown_code([] { Region::disk(Complex(0, 0), 0.0); }) == ErrorCode::nonpositive_radius);
  CHECK(thrown_code([] { Region::annulus(Complex(0, 0), 2.0, 1.0); }) ==
        ErrorCode::nonpositive_radius);  // degenerate annulus: nonpositive width
  CHECK(thrown_code([] { Region::rectangle(1.0, 0.0, 0.0, 1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("hull-difference region via escape tests") {
  // int K(2e-4 z^2) \ K(z^3): roughly 1 < |z| < 5000
  RationalMap outer(Polynomial({0.0, 0.0, 2e-4}), Polynomial({1.0}));
  RationalMap inner = RationalMap::polynomial({0.0, 0.0, 0.0, 1.0});
  Region u = Region::hull_difference(outer, inner);
  CHECK(u.contains(Complex(100.0, 0.0)));
  CHECK(u.contains(Complex(0.0, 2.0)));
  CHECK_FALSE(u.contains(Complex(0.5, 0.0)));     // inside the inner filled set
  CHECK_FALSE(u.contains(Complex(10000.0, 0.0))); // escapes the outer map
  CHECK_FALSE(u.contains(complex_infinity()));

  BoundingBox bb = u.bounds();
  CHECK(bb.x1 >= 5000.0);
  CHECK(bb.x0 <= -5000.0);

  // escape-test hulls need iteration to do anything: degree-1 inner is rejected
  CHECK(thrown_code([&] {
          Region::hull_difference(outer, RationalMap::polynomial({0.0, 3.0}));
        }) == ErrorCode::invalid_argument);
}

TEST_CASE("open set condition holds for the quadratic pair on B(0, 2)") {
  OSCReport rep = check_osc(pm2(), Region::disk(Complex(0, 0), 2.0), 500, 20000);
  CHECK(rep.pass());
  CHECK(rep.osc1_violations == 0);
  CHECK(rep.osc2_violations == 0);
  CHECK(rep.osc1_witnesses.empty());
  CHECK(rep.osc3_alpha >= 0.1);
  CHECK(rep.boundary_centers > 0);
  CHECK(rep.mc_samples > 0);
}

TEST_CASE("open set condition holds for the linear pair on B(1/2, 1/2)") {
  OSCReport rep = check_osc(cantor3(), Region::disk(Complex(0.5, 0.0), 0.5), 500, 20000);
  CHECK(rep.pass());
  CHECK(rep.osc3_alpha > 0.0);
}

TEST_CASE("duplicated generators violate branch disjointness with verified witnesses") {
  RationalMap g = RationalMap::polynomial({2.0, 0.0, 1.0});
  MultiMap dup({g, g});
  Region u = Region::disk(Complex(0, 0), 2.0);
  OSCReport rep = check_osc(dup, u, 300, 5000);
  CHECK_FALSE(rep.pass());
  CHECK(rep.osc2_violations > 0);
  REQUIRE_FALSE(rep.osc2_witnesses.empty());
  for (const auto& w : rep.osc2_witnesses) {
    CHECK(w.i < w.j);
    CHECK(u.contains(dup.gen(w.i).eval(w.x)));
    CHECK(u.contains(dup.gen(w.j).eval(w.x)));
  }
}

TEST_CASE("osc grid scan is worker-invariant") {
  Region u = Region::disk(Complex(0, 0), 2.0);
  OSCReport a = check_osc(pm2(), u, 200, 4000, 1, 1);
  OSCReport b = check_osc(pm2(), u, 200, 4000, 1, 8);
  CHECK(a.osc1_violations == b.osc1_violations);
  CHECK(a.osc2_violations == b.osc2_violations);
  CHECK(a.osc3_alpha == b.osc3_alpha);
  CHECK(a.mc_samples == b.mc_samples);
}

TEST_CASE("grid size bounds are enforced") {
  Region u = Region::disk(Complex(0, 0), 2.0);
  CHECK(thrown_code([&] { check_osc(pm2(), u, 1, 100); }) == ErrorCode::invalid_argument);
  CHECK(thrown_code([&] { check_osc(pm2(), u, 5000, 100); }) == ErrorCode::invalid_argument);
}

TEST_CASE("separation test classifies the quadratic pair as consistent") {
  // c = 0 sits in the Julia set; its forward orbits land on {2, 6, ...},
  // never returning near 0, so the pair is consistent at a loose tolerance
  SemiHypReport rep = check_semihyperbolicity(pm2(), pm2_cloud(), 5, 0.05);
  CHECK(rep.overall == SemiHypVerdict::consistent);
  bool checked = false;
  for (const auto& pr : rep.pairs)
    if (is_finite(pr.c) && pr.verdict != SemiHypVerdict::not_in_julia) {
      checked = true;
      CHECK(std::abs(pr.c) < 1e-9);
      CHECK(pr.min_orbit_distance == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(pr.orbit_points > 0);
    }
  CHECK(checked);
}

TEST_CASE("verdict thresholds: returns within tol are violations, the 10x band is inconclusive") {
  // the orbit of c = 0 under the quadratic pair has min distance exactly 2,
  // so the verdict is a pure function of dist_tol
  PointCloud cloud = pm2_cloud();
  SemiHypReport loose = check_semihyperbolicity(pm2(), cloud, 5, 2.5);
  CHECK(loose.overall == SemiHypVerdict::violated);
  bool saw = false;
  for (const auto& pr : loose.pairs)
    if (pr.verdict == SemiHypVerdict::violated) {
      saw = true;
      CHECK(pr.min_orbit_distance <= 2.5);
    }
  CHECK(saw);

  SemiHypReport mid = check_semihyperbolicity(pm2(), cloud, 5, 0.25);
  CHECK(mid.overall == SemiHypVerdict::inconclusive);  // 2.0 in (0.25, 2.5]
}

TEST_CASE("critical points away from the cloud are excluded, not judged") {
  SemiHypReport rep = check_semihyperbolicity(pm2(), pm2_cloud(20000), 3, 1e-4);
  for (const auto& pr : rep.pairs) CHECK(pr.verdict == SemiHypVerdict::not_in_julia);
  CHECK(rep.overall == SemiHypVerdict::consistent);  // nothing classified, nothing violated
}

TEST_CASE("infinite critical points are reported but never classified") {
  SemiHypReport rep = check_semihyperbolicity(pm2(), pm2_cloud(20000), 3, 0.05);
  bool saw_inf = false;
  for (const auto& pr : rep.pairs)
    if (is_infinite(pr.c)) {
      saw_inf = true;
      CHECK(pr.verdict == SemiHypVerdict::not_in_julia);
    }
  CHECK(saw_inf);
}
