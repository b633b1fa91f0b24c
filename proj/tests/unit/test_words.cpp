#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "rsgdim/catalog.hpp"
#include "rsgdim/words.hpp"

using namespace rsg;
using rsgtest::thrown_code;

namespace {
MultiMap cantor3() { return catalog_lookup("cantor3").map; }
MultiMap pm2() { return catalog_lookup("pm2").map; }
}  // namespace

TEST_CASE("composition applies the first symbol first") {
  MultiMap f = cantor3();  // f1 = 3z, f2 = 3z - 2
  Word w{{1, 2}};          // f_w = f2 o f1
  CHECK(std::abs(compose_apply(f, w, Complex(1.0, 0.0)) - Complex(7.0, 0.0)) < 1e-14);
  Word v{{2, 1}};          // f_v = f1 o f2
  CHECK(std::abs(compose_apply(f, v, Complex(1.0, 0.0)) - Complex(3.0, 0.0)) < 1e-14);
}

TEST_CASE("word derivative matches the closed form for linear generators") {
  MultiMap f = cantor3();
  Word w{{1, 2, 2, 1, 2}};
  DerivativeValue d = word_derivative(f, w, Complex(0.3, 0.1));
  CHECK(d.norm == doctest::Approx(std::pow(3.0, 5)).epsilon(1e-12));
}

TEST_CASE("word derivative agrees with a central finite difference") {
  MultiMap f = pm2();
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> box(-1.2, 1.2);
  std::uniform_int_distribution<int> sym(1, 2), len(1, 3);
  int tested = 0;
  for (int trial = 0; trial < 200 && tested < 50; ++trial) {
    Complex z(box(rng), box(rng));
    Word w;
    int n = len(rng);
    for (int i = 0; i < n; ++i) w.symbols.push_back(std::uint8_t(sym(rng)));
    DerivativeValue d = word_derivative(f, w, z);
    if (d.norm < 1e-3) continue;  // finite differences lose accuracy near critical points
    double h = 1e-6;
    Complex fd = (compose_apply(f, w, z + Complex(h, 0.0)) - compose_apply(f, w, z - Complex(h, 0.0))) /
                 Complex(2.0 * h, 0.0);
    CHECK(std::abs(fd - d.value) < 1e-4 * d.norm + 1e-9);
    ++tested;
  }
  CHECK(tested == 50);
}

TEST_CASE("empty words are rejected") {
  MultiMap f = cantor3();
  CHECK(thrown_code([&] { word_derivative(f, Word{}, Complex(0.0, 0.0)); }) == ErrorCode::empty_word);
  CHECK(thrown_code([&] { skew_step(f, SkewState{Word{}, Complex(0.0, 0.0)}); }) ==
        ErrorCode::empty_word);
}

TEST_CASE("skew product steps consume the leading symbol") {
  MultiMap f = cantor3();
  SkewState s{Word{{2, 1}}, Complex(1.0, 0.0)};
  SkewState s1 = skew_step(f, s);
  CHECK(s1.prefix.symbols == std::vector<std::uint8_t>{1});
  CHECK(std::abs(s1.z - Complex(1.0, 0.0)) < 1e-14);  // f2(1) = 1
  SkewState s2 = skew_step(f, s1);
  CHECK(s2.prefix.empty());
  CHECK(std::abs(s2.z - Complex(3.0, 0.0)) < 1e-14);  // f1(1) = 3
}

TEST_CASE("word rendering") {
  CHECK(Word{{1, 2, 1}}.to_string() == "121");
  CHECK(Word{}.to_string().empty());
}

TEST_CASE("multimap bookkeeping") {
  MultiMap f = pm2();
  CHECK(f.u() == 2);
  CHECK(f.branching_factor() == 4);
  CHECK(f.max_degree() == 2);
  CHECK(f.gen(1).degree() == 2);
}
