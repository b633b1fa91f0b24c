#include "rsgdim/rational_map.hpp"

#include <algorithm>
#include <cmath>

#include "rsgdim/errors.hpp"

namespace rsg {

namespace {

// Order of vanishing at zero, with a relative tolerance for coefficients that
// are only zero up to arithmetic noise.
int vanishing_order(const Polynomial& p) {
  double scale = p.max_coeff_abs();
  if (scale == 0.0) return 0;
  const auto& c = p.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) > 1e-12 * scale) return static_cast<int>(i);
  return static_cast<int>(c.size());
}

}  // namespace

RationalMap::RationalMap(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_.is_zero() && den_.is_zero())
    raise(ErrorCode::invalid_argument, "rational map: 0/0 is not a map");
  if (den_.is_zero()) raise(ErrorCode::invalid_argument, "rational map: zero denominator");
  degree_ = std::max(num_.degree(), den_.degree());
  if (degree_ == 0) raise(ErrorCode::invalid_argument, "rational map: constant map");
  if (degree_ > 64) raise(ErrorCode::invalid_argument, "rational map: degree above 64 unsupported");

  // Reject a shared root of P and Q (unreduced fraction).
  if (num_.degree() >= 1 && den_.degree() >= 1) {
    RootSet rn = poly_roots(num_);
    RootSet rd = poly_roots(den_);
    for (const auto& a : rn.roots)
      for (const auto& b : rd.roots) {
        double tol = 1e-7 * std::max({1.0, std::abs(a.point), std::abs(b.point)});
        if (std::abs(a.point - b.point) <= tol)
          raise(ErrorCode::invalid_argument, "rational map: numerator and denominator share a root");
      }
  }

  wronskian_ = num_.derivative() * den_ - num_ * den_.derivative();
  num_rev_ = num_.reversed(degree_);
  den_rev_ = den_.reversed(degree_);
  wronskian_rev_ = num_rev_.derivative() * den_rev_ - num_rev_ * den_rev_.derivative();

  // Critical set: finite roots of W (covers poles: criticality of 1/f there),
  // plus infinity via the chart Wronskian's vanishing order at zero.
  if (wronskian_.is_zero())
    raise(ErrorCode::invalid_argument, "rational map: identically critical (degenerate)");
  if (wronskian_.degree() >= 1) critical_ = poly_roots(wronskian_);
  critical_.infinity_multiplicity = vanishing_order(wronskian_rev_);
  critical_values_.clear();
  for (const auto& e : critical_.roots) critical_values_.push_back(eval(e.point));
  if (critical_.infinity_multiplicity > 0) critical_values_.push_back(eval(complex_infinity()));
}

Complex RationalMap::chart_eval(Complex zeta) const {
  Complex a = num_rev_.eval(zeta);
  Complex b = den_rev_.eval(zeta);
  if (b == Complex(0.0, 0.0)) return complex_infinity();
  Complex v = a / b;
  return is_finite(v) ? v : complex_infinity();
}

Complex RationalMap::eval(Complex z) const {
  if (is_infinite(z)) return chart_eval(Complex(0.0, 0.0));
  if (std::abs(z) > kChartSwitch) return chart_eval(1.0 / z);
  Complex a = num_.eval(z);
  Complex b = den_.eval(z);
  if (b == Complex(0.0, 0.0)) return complex_infinity();
  Complex v = a / b;
  return is_finite(v) ? v : complex_infinity();
}

DerivativeValue RationalMap::derivative(Complex z, Metric metric) const {
  if (metric == Metric::euclidean) {
    if (is_infinite(z) || std::abs(z) > kChartSwitch)
      raise(ErrorCode::pole_derivative, "euclidean derivative at infinity");
    Complex q = den_.eval(z);
    if (q == Complex(0.0, 0.0))
      raise(ErrorCode::pole_derivative, "euclidean derivative at a pole");
    Complex w = wronskian_.eval(z);
    Complex d = w / (q * q);
    if (!is_finite(d)) raise(ErrorCode::pole_derivative, "euclidean derivative overflow near pole");
    return {d, std::abs(d)};
  }

  // Spherical norm, evaluated in the source chart that keeps |argument| <= 1.
  const bool far = is_infinite(z) || std::abs(z) > 1.0;
  const Polynomial& P = far ? num_rev_ : num_;
  const Polynomial& Q = far ? den_rev_ : den_;
  const Polynomial& W = far ? wronskian_rev_ : wronskian_;
  Complex x = far ? (is_infinite(z) ? Complex(0.0, 0.0) : 1.0 / z) : z;

  double a2 = abs2(P.eval(x));
  double b2 = abs2(Q.eval(x));
  double w = std::abs(W.eval(x));
  double norm = w * (1.0 + abs2(x)) / (a2 + b2);

  Complex value = complex_infinity();
  if (!far) {
    Complex q = den_.eval(z);
    if (q != Complex(0.0, 0.0)) {
      Complex d = wronskian_.eval(z) / (q * q);
      if (is_finite(d)) value = d;
    }
  }
  return {value, norm};
}

RootSet RationalMap::preimages(Complex w, double tol) const {
  RootSet out;
  if (is_infinite(w)) {
    if (den_.degree() >= 1) out = poly_roots(den_);
    out.infinity_multiplicity = degree_ - den_.degree();
  } else {
    // For very large |w| solve in the target chart 1/w for conditioning.
    bool inverted = std::abs(w) > kChartSwitch;
    const Polynomial& A = inverted ? den_ : num_;
    const Polynomial& B = inverted ? num_ : den_;
    Complex t = inverted ? 1.0 / w : w;

    std::vector<Complex> r(static_cast<std::size_t>(degree_) + 1, Complex(0.0, 0.0));
    for (int i = 0; i <= degree_; ++i)
      r[static_cast<std::size_t>(i)] = A[static_cast<std::size_t>(i)] - t * B[static_cast<std::size_t>(i)];
    // Drop leading coefficients that only survive as cancellation noise;
    // the lost degree is a preimage at infinity.
    double lead_scale = std::abs(A[static_cast<std::size_t>(degree_)]) +
                        std::abs(t) * std::abs(B[static_cast<std::size_t>(degree_)]);
    while (r.size() > 1 && std::abs(r.back()) <= 1e-12 * std::max(lead_scale, 1e-300)) r.pop_back();
    Polynomial R{std::move(r)};
    if (R.degree() >= 1) out = poly_roots(R);
    out.infinity_multiplicity = degree_ - R.degree();
  }

  for (const auto& e : out.roots)
    if (chordal_distance(eval(e.point), w) > tol) out.converged = false;
  return out;
}

}  // namespace rsg
