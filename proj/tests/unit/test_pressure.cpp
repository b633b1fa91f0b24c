#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rsgdim/catalog.hpp"
#include "rsgdim/pressure.hpp"

using namespace rsg;
using rsgtest::thrown_code;

namespace {
MultiMap cantor3() { return catalog_lookup("cantor3").map; }
MultiMap pm2() { return catalog_lookup("pm2").map; }
const double kH3 = std::log(2.0) / std::log(3.0);
}  // namespace

TEST_CASE("transfer sums for the linear pair have a closed form") {
  // S_n(t) = 2^n 3^(-tn), so (1/n) log S_n = log 2 - t log 3 for every n
  MultiMap f = cantor3();
  PreimageTree tree = build_preimage_tree(f, Complex(0.5, 0.0), 9);
  for (double t : {0.0, 0.5, 1.0, 1.7}) {
    for (int n : {1, 4, 8}) {
      double expect = std::pow(2.0, n) * std::pow(3.0, -t * n);
      CHECK(transfer_sum(t, n, tree) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("level sums at t = 0 count preimages with multiplicity") {
  MultiMap f = pm2();
  PreimageTree tree = build_preimage_tree(f, Complex(0.0, 2.0), 8);
  for (int n = 1; n <= 8; ++n)
    CHECK(transfer_sum(0.0, n, tree) == doctest::Approx(std::pow(4.0, n)).epsilon(1e-9));
}

TEST_CASE("hand-computed transfer sum at depth one") {
  // preimages of 3: under z^2+2 at +-1 with |f'| = 2, under z^2-2 at +-sqrt(5)
  // with |f'| = 2 sqrt(5); t = 2 gives 2/4 + 2/20 = 0.6
  MultiMap f = pm2();
  PreimageTree tree = build_preimage_tree(f, Complex(3.0, 0.0), 1);
  CHECK(transfer_sum(2.0, 1, tree) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("zero-derivative preimages flag the sum as truncated-infinite") {
  MultiMap f = pm2();
  PreimageTree tree = build_preimage_tree(f, Complex(-2.0, 0.0), 1);
  bool infinite = false;
  double s = transfer_sum(1.0, 1, tree, &infinite);
  CHECK(infinite);
  CHECK(s > 0.0);  // the finite branches still contribute
  infinite = true;
  transfer_sum(0.0, 1, tree, &infinite);  // t = 0: every node counts, nothing dropped
  CHECK_FALSE(infinite);
}

TEST_CASE("pressure estimates reproduce the affine pressure of the linear pair") {
  MultiMap f = cantor3();
  for (double t : {0.0, 0.6309297535714574, 1.5}) {
    PressureEstimate pe = pressure_estimate(f, Complex(0.5, 0.0), t, {3, 6, 9});
    double expect = std::log(2.0) - t * std::log(3.0);
    for (auto [n, v] : pe.values_by_n) CHECK(v == doctest::Approx(expect).epsilon(1e-11));
    for (auto [n, v] : pe.ratio_estimates) CHECK(v == doctest::Approx(expect).epsilon(1e-11));
    CHECK(pe.headline() == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("finite-level pressure bounds for the quadratic pair") {
  MultiMap f = pm2();
  PressureEstimate p0 = pressure_estimate(f, Complex(0.0, 2.0), 0.0, {9});
  CHECK(p0.headline() >= std::log(2.0) - 0.05);
  PressureEstimate p2 = pressure_estimate(f, Complex(0.0, 2.0), 2.0, {9});
  CHECK(p2.headline() <= 0.10);
}

TEST_CASE("the Cesaro pressure estimate is convex in t") {
  MultiMap f = pm2();
  PreimageTree tree = build_preimage_tree(f, Complex(0.0, 2.0), 5);
  for (int n : {2, 4}) {
    std::vector<double> vals;
    for (int k = 0; k <= 8; ++k) {
      double t = 2.0 * k / 8.0;
      vals.push_back(std::log(transfer_sum(t, n, tree)) / n);
    }
    for (std::size_t k = 1; k + 1 < vals.size(); ++k)
      CHECK(vals[k + 1] - 2 * vals[k] + vals[k - 1] >= -1e-9);
  }
}

TEST_CASE("bowen root of the linear pair is the similarity dimension") {
  BowenRootResult r = bowen_root(cantor3(), Complex(0.5, 0.0), 9, 1e-4);
  REQUIRE(r.status == BowenRootResult::Status::ok);
  CHECK(r.h == doctest::Approx(kH3).epsilon(1e-3));
  CHECK(r.bracket.first <= r.h);
  CHECK(r.bracket.second >= r.h);
  CHECK(std::abs(r.residual) < 1e-3);

  BowenRootResult full = bowen_root(catalog_lookup("linear3").map, Complex(0.5, 0.0), 9, 1e-4);
  REQUIRE(full.status == BowenRootResult::Status::ok);
  CHECK(full.h == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("a root outside [0, 2] is reported as no_bracket, not invented") {
  // five overlapping slope-2 maps: pressure log 5 - t log 2 has its zero at
  // log 5 / log 2 > 2
  std::vector<RationalMap> gens;
  for (double b : {-1.0, -0.5, 0.0, 0.5, 1.0})
    gens.push_back(RationalMap::polynomial({b, 2.0}));
  MultiMap f(gens);
  BowenRootResult r = bowen_root(f, Complex(0.1, 0.0), 6, 1e-4);
  CHECK(r.status == BowenRootResult::Status::no_bracket);
  CHECK_FALSE(r.at_root.values_by_n.empty());  // finite-n evidence still reported
}

TEST_CASE("poincare partial sums of the linear pair match the geometric series") {
  // at t = h the level sums are exactly 1, so the series is sum e^{-sn}
  MultiMap f = cantor3();
  double s = 0.2;
  PoincareSums ps = poincare_partial_sums(f, Complex(0.5, 0.0), kH3, s, 8);
  REQUIRE(ps.partial.size() == 8);
  for (std::size_t k = 0; k < ps.partial.size(); ++k) {
    double q = std::exp(-s);
    double expect = q * (1.0 - std::pow(q, double(k + 1))) / (1.0 - q);
    CHECK(ps.partial[k] == doctest::Approx(expect).epsilon(1e-11));
  }
  CHECK_FALSE(ps.divergence_flag);

  PoincareSums flat = poincare_partial_sums(f, Complex(0.5, 0.0), kH3, 0.0, 8);
  CHECK(flat.divergence_flag);  // constant terms never decay
}

TEST_CASE("critical exponent grid search") {
  MultiMap f = cantor3();
  // headline pressure is log 2 - t log 3 < -0.01 iff t > 0.6401...
  double s = critical_exponent_estimate(f, Complex(0.5, 0.0), {0.5, 0.7, 0.9}, 6);
  CHECK(s == doctest::Approx(0.7));
  CHECK(thrown_code([&] {
          critical_exponent_estimate(f, Complex(0.5, 0.0), {0.0, 0.5}, 6);
        }) == ErrorCode::inconclusive);
}

TEST_CASE("base point selection avoids the postcritical set") {
  MultiMap f = pm2();
  BasePointChoice c = base_point_select(f, {Complex(0.0, 2.0), Complex(0.1, 0.0)});
  CHECK(c.point == Complex(0.0, 2.0));
  CHECK(c.score > 1.9);
}

TEST_CASE("pressure workers do not change values") {
  MultiMap f = pm2();
  PressureEstimate a = pressure_estimate(f, Complex(0.0, 2.0), 1.3, {7}, {}, Metric::euclidean,
                                         nullptr, 1);
  PressureEstimate b = pressure_estimate(f, Complex(0.0, 2.0), 1.3, {7}, {}, Metric::euclidean,
                                         nullptr, 8);
  CHECK(a.headline() == b.headline());  // bitwise: fixed-chunk reduction order
}
