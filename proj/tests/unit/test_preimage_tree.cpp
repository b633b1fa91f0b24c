#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rsgdim/catalog.hpp"
#include "rsgdim/preimage_tree.hpp"

using namespace rsg;
using rsgtest::thrown_code;

namespace {
MultiMap cantor3() { return catalog_lookup("cantor3").map; }
MultiMap pm2() { return catalog_lookup("pm2").map; }

std::vector<double> sorted_re(const std::vector<PreimageNode>& nodes) {
  std::vector<double> xs;
  for (const auto& n : nodes) xs.push_back(n.point.real());
  std::sort(xs.begin(), xs.end());
  return xs;
}
}  // namespace

TEST_CASE("two levels of backward iteration for the linear pair") {
  // f1 = 3z, f2 = 3z - 2; branches y -> y/3 and y -> (y+2)/3 from y = 1/2
  PreimageTree tree = build_preimage_tree(cantor3(), Complex(0.5, 0.0), 2);
  CHECK(tree.depth() == 2);
  REQUIRE(tree.level(1).size() == 2);
  REQUIRE(tree.level(2).size() == 4);

  std::vector<double> l1 = sorted_re(tree.level(1));
  CHECK(l1[0] == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(l1[1] == doctest::Approx(5.0 / 6).epsilon(1e-14));

  std::vector<double> l2 = sorted_re(tree.level(2));
  std::vector<double> expect{1.0 / 18, 5.0 / 18, 13.0 / 18, 17.0 / 18};
  for (int i = 0; i < 4; ++i) CHECK(l2[i] == doctest::Approx(expect[i]).epsilon(1e-13));

  // uniform slope: log |f_w'| = n log 3 at every node
  for (const auto& n : tree.level(2))
    CHECK(n.log_deriv_norm == doctest::Approx(2 * std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("weighted node count equals the branching factor power") {
  PreimageTree tree = build_preimage_tree(pm2(), Complex(0.0, 2.0), 6);
  for (int n = 1; n <= 6; ++n)
    CHECK(tree.weighted_count(n) == doctest::Approx(std::pow(4.0, n)).epsilon(1e-12));
}

TEST_CASE("words replay forward to the tree root") {
  MultiMap f = pm2();
  PreimageTree tree = build_preimage_tree(f, Complex(0.0, 2.0), 4);
  for (int n = 1; n <= 4; ++n)
    for (std::size_t i = 0; i < tree.level(n).size(); ++i) {
      Word w = tree.word_of(n, i);
      CHECK(w.size() == std::size_t(n));
      CHECK(std::abs(tree.replay(f, n, i) - tree.root()) < 1e-8);
    }
}

TEST_CASE("exhaustive expansion past the node budget is an error, not a silent prune") {
  PruningPolicy tight;
  tight.node_budget = 100;
  CHECK(thrown_code([&] { build_preimage_tree(pm2(), Complex(0.0, 2.0), 6, tight); }) ==
        ErrorCode::budget_exceeded);
}

TEST_CASE("stochastic beam keeps weighted counts exact for uniform branching") {
  PruningPolicy beam;
  beam.mode = PruningPolicy::Mode::stochastic_beam;
  beam.beam_width = 64;
  beam.seed = 9;
  PreimageTree tree = build_preimage_tree(cantor3(), Complex(0.5, 0.0), 10, beam);
  CHECK(tree.pruned());
  CHECK(tree.level(10).size() <= 64);
  // every node carries the same weight, so subsample scaling is lossless here
  CHECK(tree.weighted_count(10) == doctest::Approx(std::pow(2.0, 10)).epsilon(1e-12));
}

TEST_CASE("beam trees are reproducible per seed") {
  PruningPolicy beam;
  beam.mode = PruningPolicy::Mode::stochastic_beam;
  beam.beam_width = 32;
  beam.seed = 5;
  PreimageTree a = build_preimage_tree(pm2(), Complex(0.0, 2.0), 7, beam);
  PreimageTree b = build_preimage_tree(pm2(), Complex(0.0, 2.0), 7, beam);
  REQUIRE(a.level(7).size() == b.level(7).size());
  for (std::size_t i = 0; i < a.level(7).size(); ++i)
    CHECK(a.level(7)[i].point == b.level(7)[i].point);
}

TEST_CASE("worker count does not change the tree") {
  PreimageTree a = build_preimage_tree(pm2(), Complex(0.0, 2.0), 6, {}, Metric::euclidean, 1);
  PreimageTree b = build_preimage_tree(pm2(), Complex(0.0, 2.0), 6, {}, Metric::euclidean, 4);
  REQUIRE(a.level(6).size() == b.level(6).size());
  for (std::size_t i = 0; i < a.level(6).size(); ++i) {
    CHECK(a.level(6)[i].point == b.level(6)[i].point);
    CHECK(a.level(6)[i].log_deriv_norm == b.level(6)[i].log_deriv_norm);
  }
}

TEST_CASE("critical hits carry multiplicity and a -inf derivative log") {
  // base at the critical value -2 of z^2 - 2: the branch through 0 collides
  MultiMap f = pm2();
  PreimageTree tree = build_preimage_tree(f, Complex(-2.0, 0.0), 1);
  CHECK(tree.weighted_count(1) == doctest::Approx(4.0).epsilon(1e-12));
  bool saw_collision = false;
  for (const auto& n : tree.level(1))
    if (n.multiplicity == 2) {
      saw_collision = true;
      CHECK(std::isinf(n.log_deriv_norm));
      CHECK(n.log_deriv_norm < 0);
    }
  CHECK(saw_collision);
  CHECK(tree.has_zero_derivative_nodes());
}

TEST_CASE("backward orbit sampling is deterministic and stays in the attractor hull") {
  MultiMap f = cantor3();
  std::vector<Complex> a = sample_backward_orbit(f, Complex(0.5, 0.0), 500, 3);
  std::vector<Complex> b = sample_backward_orbit(f, Complex(0.5, 0.0), 500, 3);
  CHECK(a == b);
  for (Complex z : a) {
    CHECK(z.real() > -1e-12);
    CHECK(z.real() < 1.0 + 1e-12);
    CHECK(std::abs(z.imag()) < 1e-12);
  }
}
