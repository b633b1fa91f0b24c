#pragma once

#include <string>
#include <vector>

#include "rsgdim/complex_util.hpp"
#include "rsgdim/polynomial.hpp"

namespace rsg {

enum class Metric { euclidean, spherical };

struct DerivativeValue {
  Complex value;  // euclidean f'(z); non-finite at poles / at infinity
  double norm;    // |f'(z)| in the requested metric
};

// Rational map f = P/Q on the Riemann sphere, deg f = max(deg P, deg Q).
// Arguments beyond |z| > 1e6 and the point at infinity are evaluated through
// the coefficient-reversed pair (the 1/z source chart); values use whichever
// target chart keeps magnitudes tame.  P and Q must not share a root.
class RationalMap {
 public:
  RationalMap(Polynomial num, Polynomial den);
  static RationalMap polynomial(std::vector<Complex> coeffs) {
    return RationalMap(Polynomial(std::move(coeffs)), Polynomial::constant(Complex(1.0, 0.0)));
  }

  int degree() const { return degree_; }
  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_polynomial() const { return den_.degree() == 0; }

  Complex eval(Complex z) const;

  // Euclidean metric at a pole or at infinity raises PoleDerivative; the
  // spherical norm |f'(z)| (1+|z|^2) / (1+|f(z)|^2) is finite everywhere and
  // is computed chart-free via |W(z)| (1+|z|^2) / (|P(z)|^2 + |Q(z)|^2).
  DerivativeValue derivative(Complex z, Metric metric = Metric::euclidean) const;

  // Finite critical points (roots of the Wronskian W = P'Q - PQ', with
  // multiplicity = local order - 1) plus an infinity entry when the chart
  // Wronskian vanishes at zero.
  const RootSet& critical_points() const { return critical_; }
  const std::vector<Complex>& critical_values() const { return critical_values_; }

  // All sphere preimages of w: finite roots of P - wQ (of Q when w = inf)
  // plus an infinity entry covering any degree drop; multiplicities always
  // sum to deg f.  Each finite root is verified to tol in chordal distance.
  RootSet preimages(Complex w, double tol = 1e-8) const;

 private:
  Complex chart_eval(Complex zeta) const;  // f(1/zeta)

  Polynomial num_, den_;
  Polynomial wronskian_;                 // P'Q - PQ'
  Polynomial num_rev_, den_rev_;         // reversed pair padded to deg f
  Polynomial wronskian_rev_;             // Wronskian of the reversed pair
  int degree_ = 0;
  RootSet critical_;
  std::vector<Complex> critical_values_;
};

}  // namespace rsg
