#include "rsgdim/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rsgdim/errors.hpp"
#include "rsgdim/parallel.hpp"
#include "rsgdim/rng.hpp"

namespace rsg {

namespace {

// Radius beyond which a polynomial orbit provably doubles each step:
// |p(z)| >= |c_d||z|^d - sum |c_i| |z|^{d-1} >= 2|z| once |c_d||z| >= 2 + sum.
double polynomial_escape_radius(const Polynomial& p) {
  double tail = 0.0;
  for (int i = 0; i < p.degree(); ++i) tail += std::abs(p[i]);
  double lead = std::abs(p[p.degree()]);
  return std::max(2.0, (2.0 + tail) / lead);
}

}  // namespace

const char* region_kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::disk: return "disk";
    case RegionKind::annulus: return "annulus";
    case RegionKind::rectangle: return "rectangle";
    case RegionKind::hull_difference: return "hull_difference";
  }
  return "?";
}

Region Region::disk(Complex center, double radius) {
  if (!(radius > 0.0)) raise(ErrorCode::nonpositive_radius, "disk region: radius must be > 0");
  Region r;
  r.kind_ = RegionKind::disk;
  r.center_ = center;
  r.r1_ = radius;
  r.box_ = {center.real() - radius, center.imag() - radius, center.real() + radius,
            center.imag() + radius};
  return r;
}

Region Region::annulus(Complex center, double inner, double outer) {
  if (!(inner >= 0.0) || !(outer > inner))
    raise(ErrorCode::nonpositive_radius, "annulus region: need 0 <= inner < outer");
  Region r;
  r.kind_ = RegionKind::annulus;
  r.center_ = center;
  r.r0_ = inner;
  r.r1_ = outer;
  r.box_ = {center.real() - outer, center.imag() - outer, center.real() + outer,
            center.imag() + outer};
  return r;
}

Region Region::rectangle(double x0, double y0, double x1, double y1) {
  if (!(x0 < x1) || !(y0 < y1))
    raise(ErrorCode::invalid_argument, "rectangle region: need x0 < x1 and y0 < y1");
  Region r;
  r.kind_ = RegionKind::rectangle;
  r.box_ = {x0, y0, x1, y1};
  r.center_ = {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  return r;
}

Region Region::hull_difference(const RationalMap& outer, const RationalMap& inner, int max_iter) {
  if (!outer.is_polynomial() || !inner.is_polynomial())
    raise(ErrorCode::invalid_argument, "hull_difference region: both maps must be polynomial");
  if (outer.degree() < 2 || inner.degree() < 2)
    raise(ErrorCode::invalid_argument, "hull_difference region: hulls need degree >= 2");
  if (max_iter < 1) raise(ErrorCode::invalid_argument, "hull_difference region: max_iter >= 1");
  Region r;
  r.kind_ = RegionKind::hull_difference;
  r.hulls_ = {outer, inner};
  r.escape_radius_ = {polynomial_escape_radius(outer.num()), polynomial_escape_radius(inner.num())};
  r.max_iter_ = max_iter;
  double R = r.escape_radius_[0];
  r.box_ = {-R, -R, R, R};
  return r;
}

const RationalMap& Region::hull_outer() const {
  if (kind_ != RegionKind::hull_difference)
    raise(ErrorCode::invalid_argument, "region has no hulls");
  return hulls_[0];
}

const RationalMap& Region::hull_inner() const {
  if (kind_ != RegionKind::hull_difference)
    raise(ErrorCode::invalid_argument, "region has no hulls");
  return hulls_[1];
}

bool Region::in_hull(std::size_t which, Complex z) const {
  double R = escape_radius_[which];
  const RationalMap& p = hulls_[which];
  for (int it = 0; it <= max_iter_; ++it) {
    if (!is_finite(z) || std::abs(z) > R) return false;
    z = p.eval(z);
  }
  return true;
}

bool Region::contains(Complex z) const {
  if (!is_finite(z)) return false;
  switch (kind_) {
    case RegionKind::disk:
      return std::abs(z - center_) < r1_;
    case RegionKind::annulus: {
      double d = std::abs(z - center_);
      return d > r0_ && d < r1_;
    }
    case RegionKind::rectangle:
      return z.real() > box_.x0 && z.real() < box_.x1 && z.imag() > box_.y0 && z.imag() < box_.y1;
    case RegionKind::hull_difference:
      return in_hull(0, z) && !in_hull(1, z);
  }
  return false;
}

BoundingBox Region::bounds() const { return box_; }

namespace {

constexpr std::size_t kWitnessCap = 64;

struct RowResult {
  std::uint64_t v1 = 0, v2 = 0;
  std::vector<WitnessPoint> w1, w2;
};

struct CapSampler {
  Sphere3 p, e1, e2;

  explicit CapSampler(Complex center) {
    p = to_sphere(center);
    // deterministic orthonormal frame perpendicular to p
    double ax = std::abs(p.x) < 0.9 ? 1.0 : 0.0;
    double ay = 1.0 - ax;
    // e1 = normalize(a x p), a = (ax, ay, 0)
    double cx = ay * p.z, cy = -ax * p.z, cz = ax * p.y - ay * p.x;
    double n = std::sqrt(cx * cx + cy * cy + cz * cz);
    e1 = {cx / n, cy / n, cz / n};
    e2 = {p.y * e1.z - p.z * e1.y, p.z * e1.x - p.x * e1.z, p.x * e1.y - p.y * e1.x};
  }

  // uniform in the geodesic cap of radius r around p
  Complex draw(std::mt19937_64& rng, double r) const {
    double c = 1.0 - uniform_double(rng) * (1.0 - std::cos(r));
    double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    double phi = 2.0 * 3.14159265358979323846 * uniform_double(rng);
    double u1 = std::cos(phi) * s, u2 = std::sin(phi) * s;
    Sphere3 q{c * p.x + u1 * e1.x + u2 * e2.x, c * p.y + u1 * e1.y + u2 * e2.y,
              c * p.z + u1 * e1.z + u2 * e2.z};
    return from_sphere(q);
  }
};

}  // namespace

OSCReport check_osc(const MultiMap& f, const Region& U, int grid, std::uint64_t mc,
                    std::uint64_t seed, int workers) {
  if (grid < 2 || grid > 4096)
    raise(ErrorCode::invalid_argument, "check_osc: grid must be in [2, 4096]");
  const int u = f.u();
  const BoundingBox b = U.bounds();
  const double margin = 1.0;
  const double gx0 = b.x0 - margin, gx1 = b.x1 + margin;
  const double gy0 = b.y0 - margin, gy1 = b.y1 + margin;
  const double sx = (gx1 - gx0) / double(grid - 1);
  const double sy = (gy1 - gy0) / double(grid - 1);

  OSCReport rep;
  rep.grid_size = grid;

  std::vector<RowResult> rows(static_cast<std::size_t>(grid));
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));

  parallel_for(static_cast<std::size_t>(grid), workers, [&](std::size_t r0, std::size_t r1) {
    std::vector<char> fin(static_cast<std::size_t>(u));
    for (std::size_t iy = r0; iy < r1; ++iy) {
      RowResult& row = rows[iy];
      double y = gy0 + sy * double(iy);
      for (int ix = 0; ix < grid; ++ix) {
        Complex x{gx0 + sx * double(ix), y};
        bool xin = U.contains(x);
        inside[iy * static_cast<std::size_t>(grid) + static_cast<std::size_t>(ix)] = xin ? 1 : 0;
        for (int j = 0; j < u; ++j) fin[static_cast<std::size_t>(j)] = U.contains(f.gen(j + 1).eval(x)) ? 1 : 0;
        for (int j = 0; j < u; ++j)
          if (fin[static_cast<std::size_t>(j)] && !xin) {
            ++row.v1;
            if (row.w1.size() < kWitnessCap) row.w1.push_back({x, j + 1, j + 1});
          }
        for (int i = 0; i < u; ++i)
          for (int j = i + 1; j < u; ++j)
            if (fin[static_cast<std::size_t>(i)] && fin[static_cast<std::size_t>(j)]) {
              ++row.v2;
              if (row.w2.size() < kWitnessCap) row.w2.push_back({x, i + 1, j + 1});
            }
      }
    }
  });

  for (const RowResult& row : rows) {
    rep.osc1_violations += row.v1;
    rep.osc2_violations += row.v2;
    for (const auto& w : row.w1)
      if (rep.osc1_witnesses.size() < kWitnessCap) rep.osc1_witnesses.push_back(w);
    for (const auto& w : row.w2)
      if (rep.osc2_witnesses.size() < kWitnessCap) rep.osc2_witnesses.push_back(w);
  }

  // Each witness is a pointwise claim; re-evaluate it directly so a reported
  // witness survives any grid refinement.
  std::erase_if(rep.osc1_witnesses, [&](const WitnessPoint& w) {
    return !(U.contains(f.gen(w.j).eval(w.x)) && !U.contains(w.x));
  });
  std::erase_if(rep.osc2_witnesses, [&](const WitnessPoint& w) {
    return !(U.contains(f.gen(w.i).eval(w.x)) && U.contains(f.gen(w.j).eval(w.x)));
  });

  // osc3: boundary-adjacent grid points, row-major
  std::vector<Complex> boundary;
  auto at = [&](int ix, int iy) {
    return inside[static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid) +
                  static_cast<std::size_t>(ix)] != 0;
  };
  for (int iy = 0; iy < grid; ++iy)
    for (int ix = 0; ix < grid; ++ix) {
      if (!at(ix, iy)) continue;
      bool edge = (ix > 0 && !at(ix - 1, iy)) || (ix + 1 < grid && !at(ix + 1, iy)) ||
                  (iy > 0 && !at(ix, iy - 1)) || (iy + 1 < grid && !at(ix, iy + 1));
      if (edge) boundary.push_back({gx0 + sx * double(ix), gy0 + sy * double(iy)});
    }

  rep.osc3_alpha = 1.0;
  if (!boundary.empty() && mc > 0) {
    constexpr std::size_t kCenters = 50;
    constexpr int kRadii = 10;
    std::vector<Complex> centers;
    if (boundary.size() <= kCenters) {
      centers = boundary;
    } else {
      for (std::size_t k = 0; k < kCenters; ++k)
        centers.push_back(boundary[k * (boundary.size() - 1) / (kCenters - 1)]);
    }
    rep.boundary_centers = centers.size();
    std::uint64_t per_shot = std::max<std::uint64_t>(1, mc / (centers.size() * kRadii));
    for (std::size_t k = 0; k < centers.size(); ++k) {
      CapSampler cap(centers[k]);
      for (int m = 0; m < kRadii; ++m) {
        // geodesic radii log-spaced over [1e-3, 1]
        double r = std::pow(10.0, -3.0 + 3.0 * double(m) / double(kRadii - 1));
        std::mt19937_64 rng(derive_seed(seed, k * 16 + static_cast<std::size_t>(m)));
        std::uint64_t hit = 0;
        for (std::uint64_t n = 0; n < per_shot; ++n)
          if (U.contains(cap.draw(rng, r))) ++hit;
        rep.mc_samples += per_shot;
        rep.osc3_alpha = std::min(rep.osc3_alpha, double(hit) / double(per_shot));
      }
    }
  }
  return rep;
}

const char* semihyp_verdict_name(SemiHypVerdict v) {
  switch (v) {
    case SemiHypVerdict::consistent: return "consistent";
    case SemiHypVerdict::inconclusive: return "inconclusive";
    case SemiHypVerdict::violated: return "violated";
    case SemiHypVerdict::not_in_julia: return "not_in_julia";
  }
  return "?";
}

namespace {

void dedup_exact(std::vector<Complex>& pts) {
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

}  // namespace

SemiHypReport check_semihyperbolicity(const MultiMap& f, const PointCloud& julia, int depth,
                                      double dist_tol, int workers) {
  (void)workers;  // orbit sets are tiny; the sweep is serial and deterministic
  if (depth < 0 || depth > 12)
    raise(ErrorCode::invalid_argument, "check_semihyperbolicity: depth must be in [0, 12]");
  if (!(dist_tol > 0.0))
    raise(ErrorCode::invalid_argument, "check_semihyperbolicity: dist_tol must be > 0");
  if (julia.points.empty()) raise(ErrorCode::empty_cloud, "check_semihyperbolicity: empty julia cloud");

  SemiHypReport rep;
  rep.depth = depth;
  rep.dist_tol = dist_tol;

  for (int j = 1; j <= f.u(); ++j) {
    const RootSet& crit = f.gen(j).critical_points();
    std::vector<Complex> cpts;
    for (const auto& e : crit.roots) cpts.push_back(e.point);
    dedup_exact(cpts);
    if (crit.infinity_multiplicity > 0) cpts.push_back(complex_infinity());

    for (Complex c : cpts) {
      CriticalPairReport pr;
      pr.c = c;
      pr.generator = j;
      if (is_finite(c)) {
        double d2 = std::numeric_limits<double>::infinity();
        for (Complex p : julia.points) d2 = std::min(d2, abs2(p - c));
        pr.dist_to_cloud = std::sqrt(d2);
      }
      if (!(pr.dist_to_cloud <= dist_tol)) {
        pr.verdict = SemiHypVerdict::not_in_julia;
        rep.pairs.push_back(pr);
        continue;
      }

      // forward semigroup orbit of f_j(c), identity included
      std::vector<Complex> frontier{f.gen(j).eval(c)};
      std::vector<Complex> all = frontier;
      for (int lv = 0; lv < depth; ++lv) {
        std::vector<Complex> next;
        for (Complex p : frontier)
          for (int jj = 1; jj <= f.u(); ++jj) next.push_back(f.gen(jj).eval(p));
        dedup_exact(next);
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
      }
      dedup_exact(all);

      pr.orbit_points = all.size();
      for (Complex p : all) {
        if (!is_finite(p)) continue;
        double d = std::abs(p - c);
        if (d < pr.min_orbit_distance) {
          pr.min_orbit_distance = d;
          pr.nearest_orbit_point = p;
        }
      }
      if (pr.min_orbit_distance <= dist_tol)
        pr.verdict = SemiHypVerdict::violated;
      else if (pr.min_orbit_distance > 10.0 * dist_tol)
        pr.verdict = SemiHypVerdict::consistent;
      else
        pr.verdict = SemiHypVerdict::inconclusive;
      rep.pairs.push_back(pr);
    }
  }

  rep.overall = SemiHypVerdict::consistent;
  for (const auto& pr : rep.pairs) {
    if (pr.verdict == SemiHypVerdict::violated) {
      rep.overall = SemiHypVerdict::violated;
      break;
    }
    if (pr.verdict == SemiHypVerdict::inconclusive) rep.overall = SemiHypVerdict::inconclusive;
  }
  return rep;
}

}  // namespace rsg
