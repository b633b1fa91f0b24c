#pragma once

#include <vector>

#include "rsgdim/complex_util.hpp"

namespace rsg {

// Dense polynomial over C, coefficients ascending by degree.  Construction
// trims exactly-zero leading coefficients so c.back() != 0 unless the
// polynomial is identically zero (then c == {0}).
class Polynomial {
 public:
  Polynomial() : c_{Complex(0.0, 0.0)} {}
  explicit Polynomial(std::vector<Complex> coeffs);
  static Polynomial constant(Complex v) { return Polynomial({v}); }
  static Polynomial identity() { return Polynomial({Complex(0), Complex(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == Complex(0.0, 0.0); }
  const std::vector<Complex>& coeffs() const { return c_; }
  Complex operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Complex(0.0, 0.0); }

  Complex eval(Complex z) const;
  // sum_i |c_i| |z|^i : magnitude scale used for backward-error residual tests
  double eval_scale(Complex z) const;
  Polynomial derivative() const;

  // coefficient reversal padded to `pad_degree`: p_rev(z) = z^pad * p(1/z)
  Polynomial reversed(int pad_degree) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(Complex s) const;

  double max_coeff_abs() const;

 private:
  std::vector<Complex> c_;
};

struct RootSet {
  struct Entry {
    Complex point;
    int multiplicity;
  };
  std::vector<Entry> roots;        // finite roots, deterministic order
  int infinity_multiplicity = 0;   // used by preimage/critical-point queries
  bool converged = true;

  int total_multiplicity() const {
    int m = infinity_multiplicity;
    for (const auto& r : roots) m += r.multiplicity;
    return m;
  }
};

// Simultaneous root finding (Aberth-Ehrlich), closed forms for degree <= 2.
// Initial iterates sit on a perturbed circle of Fujiwara-bound radius.
// Converged iterates are clustered (radius 1e-7 * max(1, |z|)) and the cluster
// size is the reported multiplicity; near-multiple clusters are tightened by a
// multiplicity-aware Newton polish first so that order >= 3 roots cluster too.
// Residual target: |p(r)| <= tol * sum_i |c_i| |r|^i.  On failure the best
// iterates are returned with converged = false.
RootSet poly_roots(const Polynomial& p, double tol = 1e-10);

}  // namespace rsg
