#include "rsgdim/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "rsgdim/errors.hpp"

namespace rsg {

namespace {
constexpr double kTrimEps = 1e-300;  // only true zeros / denormals are trimmed
}

Polynomial::Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  while (c_.size() > 1 && std::abs(c_.back()) < kTrimEps) c_.pop_back();
  if (c_.empty()) c_.push_back(Complex(0.0, 0.0));
}

Complex Polynomial::eval(Complex z) const {
  Complex acc(0.0, 0.0);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
  return acc;
}

double Polynomial::eval_scale(Complex z) const {
  double az = std::abs(z);
  double acc = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * az + std::abs(c_[i]);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * double(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::reversed(int pad_degree) const {
  std::vector<Complex> r(static_cast<std::size_t>(pad_degree) + 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < c_.size() && i <= static_cast<std::size_t>(pad_degree); ++i)
    r[static_cast<std::size_t>(pad_degree) - i] = c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Complex> r(std::max(c_.size(), o.c_.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<Complex> r(std::max(c_.size(), o.c_.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial();
  std::vector<Complex> r(c_.size() + o.c_.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(Complex s) const {
  std::vector<Complex> r(c_);
  for (auto& v : r) v *= s;
  return Polynomial(std::move(r));
}

double Polynomial::max_coeff_abs() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Stable quadratic solver: a z^2 + b z + c, a != 0.
std::pair<Complex, Complex> solve_quadratic(Complex a, Complex b, Complex c) {
  Complex disc = b * b - 4.0 * a * c;
  Complex sq = std::sqrt(disc);
  // Choose the sign that avoids cancellation in b + sq.
  if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
  Complex q = -0.5 * (b + sq);
  Complex r1, r2;
  if (std::abs(q) > 0.0) {
    r1 = q / a;
    r2 = c / q;
  } else {
    // b == 0 and c == 0 (double root at origin)
    r1 = Complex(0.0, 0.0);
    r2 = Complex(0.0, 0.0);
  }
  return {r1, r2};
}

double fujiwara_bound(const std::vector<Complex>& c) {
  std::size_t d = c.size() - 1;
  double lead = std::abs(c[d]);
  double bound = 0.0;
  for (std::size_t k = 1; k <= d; ++k) {
    double ratio = std::abs(c[d - k]) / lead;
    if (k == d) ratio *= 0.5;
    if (ratio > 0.0) bound = std::max(bound, std::pow(ratio, 1.0 / double(k)));
  }
  return 2.0 * std::max(bound, 1e-30);
}

// Estimated local multiplicity from p, p', p'' (exact in the limit at an
// m-fold root: p'^2 / (p'^2 - p p'') -> m).
int multiplicity_estimate(Complex p, Complex dp, Complex ddp) {
  Complex denom = dp * dp - p * ddp;
  if (std::abs(denom) < 1e-300) return 1;
  double m = std::real(dp * dp / denom);
  if (!std::isfinite(m) || m < 1.5) return 1;
  return static_cast<int>(std::lround(std::min(m, 64.0)));
}

struct Clusterer {
  // Greedy union within radius 1e-7 * max(1, |z|); returns cluster labels.
  static std::vector<int> run(const std::vector<Complex>& pts, std::vector<Complex>& centers,
                              std::vector<int>& sizes) {
    std::vector<int> label(pts.size(), -1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (label[i] >= 0) continue;
      int id = static_cast<int>(centers.size());
      label[i] = id;
      Complex sum = pts[i];
      int n = 1;
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        if (label[j] >= 0) continue;
        double tol = 1e-7 * std::max({1.0, std::abs(pts[i]), std::abs(pts[j])});
        if (std::abs(pts[i] - pts[j]) <= tol) {
          label[j] = id;
          sum += pts[j];
          ++n;
        }
      }
      centers.push_back(sum / double(n));
      sizes.push_back(n);
    }
    return label;
  }
};

}  // namespace

RootSet poly_roots(const Polynomial& p, double tol) {
  const auto& c0 = p.coeffs();
  if (p.degree() == 0) raise(ErrorCode::degree_zero, "poly_roots: constant polynomial");
  if (p.degree() > 64) raise(ErrorCode::invalid_argument, "poly_roots: degree above 64 unsupported");

  // Factor out exact roots at the origin (exactly-zero low coefficients).
  std::vector<Complex> c(c0);
  int origin_mult = 0;
  while (c.size() > 1 && std::abs(c.front()) < kTrimEps) {
    c.erase(c.begin());
    ++origin_mult;
  }

  RootSet out;
  auto push_origin = [&] {
    if (origin_mult > 0) out.roots.push_back({Complex(0.0, 0.0), origin_mult});
  };

  std::size_t d = c.size() - 1;
  if (d == 0) {
    push_origin();
    return out;
  }
  if (d == 1) {
    push_origin();
    out.roots.push_back({-c[0] / c[1], 1});
    return out;
  }
  if (d == 2) {
    auto [r1, r2] = solve_quadratic(c[2], c[1], c[0]);
    double ctol = 1e-7 * std::max({1.0, std::abs(r1), std::abs(r2)});
    push_origin();
    if (std::abs(r1 - r2) <= ctol) {
      out.roots.push_back({0.5 * (r1 + r2), 2});
    } else {
      out.roots.push_back({r1, 1});
      out.roots.push_back({r2, 1});
    }
    return out;
  }

  Polynomial q{std::vector<Complex>(c)};
  Polynomial dq = q.derivative();
  Polynomial ddq = dq.derivative();

  // Aberth-Ehrlich iteration from a perturbed Fujiwara circle.
  double R = fujiwara_bound(c);
  std::vector<Complex> z(d);
  for (std::size_t k = 0; k < d; ++k) {
    double ang = 2.0 * M_PI * double(k) / double(d) + 0.4;
    double rad = R * (0.6 + 0.15 * std::fmod(double(k) * 0.6180339887498949, 1.0));
    z[k] = Complex(rad * std::cos(ang), rad * std::sin(ang));
  }

  auto converged_at = [&](Complex zi) {
    return std::abs(q.eval(zi)) <= tol * std::max(q.eval_scale(zi), 1e-300);
  };

  const int max_iter = 300;
  bool all_ok = false;
  for (int it = 0; it < max_iter && !all_ok; ++it) {
    all_ok = true;
    for (std::size_t i = 0; i < d; ++i) {
      Complex pi = q.eval(z[i]);
      if (std::abs(pi) <= 0.25 * tol * std::max(q.eval_scale(z[i]), 1e-300)) continue;
      all_ok = false;
      Complex dpi = dq.eval(z[i]);
      if (std::abs(dpi) < 1e-300) {
        z[i] += Complex(1e-8 * (1.0 + std::abs(z[i])), 1e-8);
        continue;
      }
      Complex newton = pi / dpi;
      Complex sum(0.0, 0.0);
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        Complex diff = z[i] - z[j];
        if (std::abs(diff) < 1e-300) diff = Complex(1e-30, 0.0);
        sum += 1.0 / diff;
      }
      Complex denom = 1.0 - newton * sum;
      Complex step = std::abs(denom) < 1e-300 ? newton : newton / denom;
      z[i] -= step;
    }
  }

  // Multiplicity-aware polish so clusters of order >= 3 tighten enough to merge.
  for (std::size_t i = 0; i < d; ++i) {
    Complex pi = q.eval(z[i]);
    Complex dpi = dq.eval(z[i]);
    Complex ddpi = ddq.eval(z[i]);
    int m = multiplicity_estimate(pi, dpi, ddpi);
    if (m <= 1) continue;
    Complex y = z[i];
    for (int step = 0; step < 8; ++step) {
      Complex py = q.eval(y);
      Complex dpy = dq.eval(y);
      if (std::abs(dpy) < 1e-300) break;
      Complex ny = y - double(m) * py / dpy;
      if (!is_finite(ny)) break;
      y = ny;
    }
    if (std::abs(q.eval(y)) <= std::max(std::abs(pi), tol * q.eval_scale(y))) z[i] = y;
  }

  bool conv = true;
  for (std::size_t i = 0; i < d; ++i) conv = conv && converged_at(z[i]);

  std::vector<Complex> centers;
  std::vector<int> sizes;
  Clusterer::run(z, centers, sizes);

  push_origin();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    Complex r = centers[k];
    if (sizes[k] >= 2) {
      // refine the cluster center with the now-known multiplicity
      for (int step = 0; step < 4; ++step) {
        Complex pr = q.eval(r), dpr = dq.eval(r);
        if (std::abs(dpr) < 1e-300) break;
        Complex nr = r - double(sizes[k]) * pr / dpr;
        if (!is_finite(nr)) break;
        r = nr;
      }
    }
    out.roots.push_back({r, sizes[k]});
  }
  out.converged = conv;
  return out;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::degree_zero: return "degree_zero";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::pole_derivative: return "pole_derivative";
    case ErrorCode::empty_word: return "empty_word";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::no_repelling_fixed_point: return "no_repelling_fixed_point";
    case ErrorCode::empty_cloud: return "empty_cloud";
    case ErrorCode::degenerate_fit: return "degenerate_fit";
    case ErrorCode::series_not_decaying: return "series_not_decaying";
    case ErrorCode::forbidden_pair: return "forbidden_pair";
    case ErrorCode::nonpositive_radius: return "nonpositive_radius";
    case ErrorCode::all_candidates_rejected: return "all_candidates_rejected";
    case ErrorCode::inconclusive: return "inconclusive";
    case ErrorCode::unknown_name: return "unknown_name";
    case ErrorCode::schema: return "schema";
    case ErrorCode::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

}  // namespace rsg
