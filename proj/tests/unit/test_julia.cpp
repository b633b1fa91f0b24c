#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "rsgdim/catalog.hpp"
#include "rsgdim/julia.hpp"

using namespace rsg;
using rsgtest::thrown_code;

namespace {
MultiMap cantor3() { return catalog_lookup("cantor3").map; }
MultiMap pm2() { return catalog_lookup("pm2").map; }
}  // namespace

TEST_CASE("repelling fixed point prefers the largest multiplier") {
  // z^2 - 2 fixes 2 (multiplier 4) and -1 (multiplier -2)
  RationalMap f = RationalMap::polynomial({-2.0, 0.0, 1.0});
  CHECK(std::abs(repelling_fixed_point(f) - Complex(2.0, 0.0)) < 1e-9);
  // z^3 fixes 0 (attracting) and +-1 (multiplier 3 both): lexicographic tie-break
  RationalMap cube = RationalMap::polynomial({0.0, 0.0, 0.0, 1.0});
  CHECK(std::abs(repelling_fixed_point(cube) - Complex(-1.0, 0.0)) < 1e-9);
  // no repelling fixed point in the plane: z/2 only fixes 0 and infinity
  CHECK(thrown_code([] { repelling_fixed_point(RationalMap::polynomial({0.0, 0.5})); }) ==
        ErrorCode::no_repelling_fixed_point);
}

TEST_CASE("chaos-game approximation stays inside the invariant disk") {
  JuliaParams p;
  p.length = 20000;
  p.seed = 11;
  PointCloud cloud = approximate_julia(pm2(), p);
  CHECK(cloud.points.size() == 20000);
  for (Complex z : cloud.points) CHECK(std::abs(z) <= 2.0 + 1e-9);
}

TEST_CASE("full-tree approximation of the Cantor attractor") {
  JuliaParams p;
  p.method = PointCloud::Method::full_tree;
  p.depth = 10;
  PointCloud cloud = approximate_julia(cantor3(), p);
  CHECK(cloud.points.size() == 1024);
  for (Complex z : cloud.points) {
    CHECK(z.real() > -1e-12);
    CHECK(z.real() < 1.0 + 1e-12);
    // middle-third gap: nothing strictly inside (1/3, 2/3)
    CHECK((z.real() < 1.0 / 3 + 1e-9 || z.real() > 2.0 / 3 - 1e-9));
  }
}

TEST_CASE("cloud generation is seed-deterministic and seed-sensitive") {
  JuliaParams p;
  p.length = 5000;
  p.seed = 7;
  PointCloud a = approximate_julia(pm2(), p);
  PointCloud b = approximate_julia(pm2(), p);
  CHECK(a.points == b.points);
  p.seed = 8;
  PointCloud c = approximate_julia(pm2(), p);
  CHECK(a.points != c.points);
  CHECK(a.source_hash == c.source_hash);  // hash identifies the map, not the run
  CHECK(multimap_hash(pm2()) == a.source_hash);
  CHECK(multimap_hash(cantor3()) != a.source_hash);
}

TEST_CASE("worker count does not change the cloud") {
  JuliaParams p1;
  p1.length = 10000;
  p1.workers = 1;
  JuliaParams p8 = p1;
  p8.workers = 8;
  CHECK(approximate_julia(pm2(), p1).points == approximate_julia(pm2(), p8).points);
}

TEST_CASE("rasterization accounting") {
  JuliaParams p;
  p.length = 30000;
  PointCloud cloud = approximate_julia(pm2(), p);

  Viewport vp{{0.0, 0.0}, 2.2, 2.2, 400, 400};
  Image img = rasterize(cloud, vp);
  CHECK(img.width == 400);
  CHECK(img.height == 400);
  CHECK(img.points_outside == 0);
  long nonzero = 0;
  for (auto px : img.pixels)
    if (px) ++nonzero;
  CHECK(nonzero > 1000);

  // a viewport away from the set sees nothing
  Viewport far_vp{{100.0, 100.0}, 1.0, 1.0, 50, 50};
  Image empty = rasterize(cloud, far_vp);
  CHECK(empty.points_outside == long(cloud.points.size()));
  for (auto px : empty.pixels) CHECK(px == 0);

  PointCloud none;
  CHECK(thrown_code([&] { rasterize(none, vp); }) == ErrorCode::empty_cloud);
}

TEST_CASE("viewport validation") {
  CHECK_NOTHROW(validate_viewport(Viewport{{0, 0}, 2.0, 1.0, 800, 400}));
  CHECK(thrown_code([] { validate_viewport(Viewport{{0, 0}, 2.0, 1.0, 800, 800}); }) ==
        ErrorCode::schema);
  CHECK(thrown_code([] { validate_viewport(Viewport{{0, 0}, -1.0, 1.0, 100, 100}); }) ==
        ErrorCode::schema);
}

TEST_CASE("box-counting dimension of the Cantor attractor") {
  JuliaParams p;
  p.method = PointCloud::Method::full_tree;
  p.depth = 13;
  PointCloud cloud = approximate_julia(cantor3(), p);
  DimensionFit fit = box_count_dimension(cloud, epsilon_ladder(0.2, 1.5, 10));
  double h = std::log(2.0) / std::log(3.0);
  CHECK_FALSE(fit.degenerate);
  CHECK(fit.slope == doctest::Approx(h).epsilon(0.08));
  CHECK(fit.r2 >= 0.99);
}

TEST_CASE("degenerate clouds are flagged instead of fit") {
  PointCloud cloud;
  for (int i = 0; i < 100; ++i) cloud.points.push_back(Complex(0.25, -0.5));
  DimensionFit fit = box_count_dimension(cloud, epsilon_ladder(0.1, 1.0, 6));
  CHECK(fit.degenerate);
  CHECK(fit.slope == 0.0);
}

TEST_CASE("epsilon ladder geometry") {
  std::vector<double> eps = epsilon_ladder(1.0, 2.0, 9);
  REQUIRE(eps.size() == 9);
  CHECK(eps.front() == doctest::Approx(1.0));
  CHECK(eps.back() == doctest::Approx(0.01));
  for (std::size_t i = 0; i + 1 < eps.size(); ++i)
    CHECK(eps[i + 1] / eps[i] == doctest::Approx(eps[1] / eps[0]).epsilon(1e-12));
}
