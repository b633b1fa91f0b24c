#include "rsgdim/catalog.hpp"

#include <cmath>

#include "rsgdim/errors.hpp"

namespace rsg {

double family_c0(int d1, int d, double r) {
  if (d1 < 2 || d < 2) raise(ErrorCode::invalid_argument, "family_c0: degrees must be >= 2");
  if (d1 == 2 && d == 2) raise(ErrorCode::forbidden_pair, "family_c0: the exponent pair (2, 2) is excluded");
  if (!(r > 0.0)) raise(ErrorCode::nonpositive_radius, "family_c0: r must be > 0");
  double coef = double(d) * double(d - 1) * double(d1) / double(d + d1 - d1 * d);
  double inner = std::log(2.0) - std::log(0.5) / double(d1) - std::log(r) / double(d);
  return std::exp(coef * inner);
}

CatalogEntry make_prop92_entry(const Polynomial& f1, Complex b, int d, Complex lambda, double r,
                               const std::string& name) {
  RationalMap g1(f1, Polynomial({1.0}));
  if (!g1.is_polynomial() || g1.degree() < 2)
    raise(ErrorCode::invalid_argument, "make_prop92_entry: f1 must be a polynomial of degree >= 2");
  double c0 = family_c0(g1.degree(), d, r);
  double al = std::abs(lambda);
  if (!(al > 0.0) || !(al < c0))
    raise(ErrorCode::invalid_argument,
          "make_prop92_entry: need 0 < |lambda| < c0 = " + std::to_string(c0));

  // f2 = lambda (z - b)^d + b
  Polynomial p({lambda});
  Polynomial zb({-b, Complex(1.0, 0.0)});
  for (int k = 0; k < d; ++k) p = p * zb;
  p = p + Polynomial({b});
  RationalMap g2(p, Polynomial({1.0}));

  CatalogEntry e{name,
                 "perturbed pair (f1, lambda (z-b)^" + std::to_string(d) + " + b), |lambda| = " +
                     std::to_string(al),
                 MultiMap({g1, g2}),
                 Region::hull_difference(g2, g1),
                 true,
                 repelling_fixed_point(g1),
                 {}};
  double hull = std::pow(1.0 / al, 1.0 / double(d - 1)) * 1.05 + std::abs(b);
  e.default_viewport = Viewport{b, hull, hull, 800, 800};
  return e;
}

const std::vector<CatalogEntry>& builtin_examples() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;

    auto poly = [](std::vector<Complex> c) { return RationalMap(Polynomial(std::move(c)), Polynomial({1.0})); };

    v.push_back({"pm2",
                 "z^2+2 and z^2-2; open set B(0,2)",
                 MultiMap({poly({2.0, 0.0, 1.0}), poly({-2.0, 0.0, 1.0})}),
                 Region::disk({0.0, 0.0}, 2.0),
                 true,
                 Complex(0.0, 2.0),
                 Viewport{{0.0, 0.0}, 2.2, 2.2, 800, 800}});

    v.push_back({"fig2",
                 "(z^2-1)^2-1 and z^4/64 (squared quadratic pair)",
                 MultiMap({poly({0.0, 0.0, -2.0, 0.0, 1.0}), poly({0.0, 0.0, 0.0, 0.0, 1.0 / 64.0})}),
                 Region::disk({0.0, 0.0}, 4.0),
                 false,
                 Complex(0.0, 2.0),
                 Viewport{{0.0, 0.0}, 4.2, 4.2, 800, 800}});

    v.push_back({"cantor3",
                 "3z and 3z-2; middle-third Cantor attractor",
                 MultiMap({poly({0.0, 3.0}), poly({-2.0, 3.0})}),
                 Region::disk({0.5, 0.0}, 0.5),
                 true,
                 Complex(0.5, 0.0),
                 Viewport{{0.5, 0.0}, 0.6, 0.6, 800, 800}});

    v.push_back({"linear3",
                 "3z, 3z-1 and 3z-2; full-interval linear triple",
                 MultiMap({poly({0.0, 3.0}), poly({-1.0, 3.0}), poly({-2.0, 3.0})}),
                 Region::disk({0.5, 0.0}, 0.5),
                 true,
                 Complex(0.5, 0.0),
                 Viewport{{0.5, 0.0}, 0.6, 0.6, 800, 800}});

    v.push_back(make_prop92_entry(Polynomial({0.0, 0.0, 0.0, 1.0}), Complex(0.0, 0.0), 2,
                                  Complex(2e-4, 0.0), 0.5, "prop92_cubic"));
    v.back().summary = "z^3 and 2e-4 z^2; small-perturbation annular pair";
    return v;
  }();
  return entries;
}

const CatalogEntry& catalog_lookup(const std::string& name) {
  for (const auto& e : builtin_examples())
    if (e.name == name) return e;
  raise(ErrorCode::unknown_name, "unknown example '" + name + "' (see list-examples)");
}

}  // namespace rsg
