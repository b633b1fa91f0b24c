#include "rsgdim/julia.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_set>

#include "rsgdim/errors.hpp"
#include "rsgdim/parallel.hpp"
#include "rsgdim/rng.hpp"

namespace rsg {

Complex repelling_fixed_point(const RationalMap& f) {
  // fixed points: P(z) - z Q(z) = 0
  Polynomial shifted = f.num() - Polynomial::identity() * f.den();
  if (shifted.degree() < 1) {
    if (shifted.is_zero()) raise(ErrorCode::invalid_argument, "identity map has no isolated fixed points");
    raise(ErrorCode::no_repelling_fixed_point, "no finite fixed points");
  }
  RootSet fixed = poly_roots(shifted);

  struct Cand {
    Complex z;
    double mult_norm;
  };
  std::vector<Cand> cands;
  for (const auto& e : fixed.roots) {
    DerivativeValue d = f.derivative(e.point, Metric::spherical);
    // spherical norm at a fixed point equals the euclidean multiplier norm
    cands.push_back({e.point, d.norm});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.mult_norm != b.mult_norm) return a.mult_norm > b.mult_norm;
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  for (const auto& c : cands)
    if (c.mult_norm > 1.0 + 1e-9) return c.z;
  raise(ErrorCode::no_repelling_fixed_point, "all finite fixed points are non-repelling");
}

std::uint64_t multimap_hash(const MultiMap& f) {
  // FNV-1a over the generator coefficients' bit patterns
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (const auto& g : f.generators()) {
    for (const auto& c : g.num().coeffs()) {
      mix(c.real());
      mix(c.imag());
    }
    mix(std::numeric_limits<double>::quiet_NaN());  // separator
    for (const auto& c : g.den().coeffs()) {
      mix(c.real());
      mix(c.imag());
    }
  }
  return h;
}

PointCloud approximate_julia(const MultiMap& f, const JuliaParams& params) {
  // seed: first generator that admits a repelling fixed point
  Complex seed{};
  bool found = false;
  std::string last_err;
  for (int j = 1; j <= f.u() && !found; ++j) {
    try {
      seed = repelling_fixed_point(f.gen(j));
      found = true;
    } catch (const Error& e) {
      last_err = e.what();
    }
  }
  if (!found) raise(ErrorCode::no_repelling_fixed_point, "no generator has one: " + last_err);

  PointCloud cloud;
  cloud.method = params.method;
  cloud.burn_in = params.burn_in;
  cloud.source_hash = multimap_hash(f);

  if (params.method == PointCloud::Method::full_tree) {
    PreimageTree tree = build_preimage_tree(f, seed, params.depth, params.policy,
                                            Metric::euclidean, params.workers);
    const auto& lv = tree.level(params.depth);
    cloud.points.reserve(lv.size());
    for (const auto& node : lv) cloud.points.push_back(node.point);
  } else {
    int segments = std::max(1, params.segments);
    long per = (params.length + segments - 1) / segments;
    std::vector<std::vector<Complex>> segs(static_cast<std::size_t>(segments));
    parallel_for(static_cast<std::size_t>(segments), params.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) {
        auto orbit = sample_backward_orbit(f, seed, static_cast<int>(per) + params.burn_in,
                                           derive_seed(params.seed, s));
        segs[s].assign(orbit.begin() + params.burn_in, orbit.end());
      }
    });
    for (auto& s : segs)
      cloud.points.insert(cloud.points.end(), s.begin(), s.end());
    if (cloud.points.size() > static_cast<std::size_t>(params.length))
      cloud.points.resize(static_cast<std::size_t>(params.length));
  }
  return cloud;
}

void validate_viewport(const Viewport& v) {
  if (v.px <= 0 || v.py <= 0 || v.half_width <= 0.0 || v.half_height <= 0.0)
    raise(ErrorCode::schema, "viewport dimensions must be positive");
  double aspect_px = double(v.py) / double(v.px);
  double aspect_geo = v.half_height / v.half_width;
  if (std::abs(aspect_px - aspect_geo) > 0.01 * aspect_geo)
    raise(ErrorCode::schema, "viewport pixel aspect does not match the geometric aspect (1% rule)");
}

Image rasterize(const PointCloud& cloud, const Viewport& v, int workers) {
  if (cloud.points.empty()) raise(ErrorCode::empty_cloud, "rasterize: empty cloud");
  validate_viewport(v);

  Image img;
  img.width = v.px;
  img.height = v.py;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(v.px) * static_cast<std::size_t>(v.py), 0);

  double x0 = v.center.real() - v.half_width;
  double y0 = v.center.imag() - v.half_height;
  double sx = double(v.px) / (2.0 * v.half_width);
  double sy = double(v.py) / (2.0 * v.half_height);

  for (const Complex& p : cloud.points) {
    if (!is_finite(p)) {
      ++img.points_outside;
      continue;
    }
    double fx = (p.real() - x0) * sx;
    double fy = (p.imag() - y0) * sy;
    long ix = long(std::floor(fx));
    long iy = long(std::floor(fy));
    if (ix < 0 || iy < 0 || ix >= v.px || iy >= v.py) {
      ++img.points_outside;
      continue;
    }
    // image rows top-down, plane y upward
    std::size_t row = static_cast<std::size_t>(v.py - 1 - iy);
    counts[row * static_cast<std::size_t>(v.px) + static_cast<std::size_t>(ix)]++;
  }

  std::uint32_t cmax = 0;
  for (auto c : counts) cmax = std::max(cmax, c);
  img.pixels.assign(counts.size(), 0);
  if (cmax > 0) {
    double denom = std::log1p(double(cmax));
    parallel_for(static_cast<std::size_t>(v.py), workers, [&](std::size_t rb, std::size_t re) {
      for (std::size_t r = rb; r < re; ++r)
        for (std::size_t c = 0; c < static_cast<std::size_t>(v.px); ++c) {
          std::size_t i = r * static_cast<std::size_t>(v.px) + c;
          if (counts[i] == 0) continue;
          img.pixels[i] =
              static_cast<std::uint8_t>(std::lround(255.0 * std::log1p(double(counts[i])) / denom));
          if (img.pixels[i] == 0) img.pixels[i] = 1;  // any hit stays visible
        }
    });
  }
  return img;
}

std::vector<double> epsilon_ladder(double eps_hi, double decades, int steps) {
  if (steps < 2 || eps_hi <= 0.0 || decades <= 0.0)
    raise(ErrorCode::invalid_argument, "epsilon_ladder: bad parameters");
  std::vector<double> eps(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    eps[static_cast<std::size_t>(i)] = eps_hi * std::pow(10.0, -decades * double(i) / double(steps - 1));
  return eps;
}

DimensionFit box_count_dimension(const PointCloud& cloud, const std::vector<double>& epsilons,
                                 std::uint64_t seed) {
  if (cloud.points.empty()) raise(ErrorCode::empty_cloud, "box_count_dimension: empty cloud");
  if (epsilons.size() < 4)
    raise(ErrorCode::invalid_argument, "box_count_dimension: need at least 4 epsilon values");
  std::vector<double> eps(epsilons);
  std::sort(eps.begin(), eps.end(), std::greater<>());

  DimensionFit fit;
  fit.epsilons = eps;
  fit.few_points_warning = cloud.points.size() < 1000;

  std::vector<Complex> finite;
  finite.reserve(cloud.points.size());
  for (const auto& p : cloud.points)
    if (is_finite(p)) finite.push_back(p);
  if (finite.empty()) raise(ErrorCode::empty_cloud, "box_count_dimension: no finite points");

  double xmin = finite[0].real(), ymin = finite[0].imag();
  for (const auto& p : finite) {
    xmin = std::min(xmin, p.real());
    ymin = std::min(ymin, p.imag());
  }

  const int kOffsets = 4;
  std::mt19937_64 rng(derive_seed(seed, 0xb0c5));
  std::unordered_set<std::uint64_t> boxes;
  for (double e : eps) {
    double avg = 0.0;
    for (int o = 0; o < kOffsets; ++o) {
      double ox = uniform_double(rng) * e;
      double oy = uniform_double(rng) * e;
      boxes.clear();
      for (const auto& p : finite) {
        auto bx = static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor((p.real() - xmin + ox) / e)));
        auto by = static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor((p.imag() - ymin + oy) / e)));
        boxes.insert((bx << 32) ^ (by & 0xffffffffull));
      }
      avg += double(boxes.size());
    }
    fit.counts.push_back(avg / double(kOffsets));
  }

  bool all_equal = std::adjacent_find(fit.counts.begin(), fit.counts.end(),
                                      [](double a, double b) { return a != b; }) == fit.counts.end();
  if (all_equal) {
    fit.degenerate = true;
    return fit;
  }

  // least squares of y = log N against x = log(1/eps)
  std::size_t n = eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::log(1.0 / eps[i]);
    ys[i] = std::log(fit.counts[i]);
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = double(n) * sxx - sx * sx;
  fit.slope = (double(n) * sxy - sx * sy) / denom;
  double intercept = (sy - fit.slope * sx) / double(n);
  double ss_res = 0, ss_tot = 0, mean_y = sy / double(n);
  for (std::size_t i = 0; i < n; ++i) {
    double pred = fit.slope * xs[i] + intercept;
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (n > 2) {
    double se = std::sqrt(ss_res / double(n - 2) / (sxx - sx * sx / double(n)));
    fit.ci = 1.96 * se;
  }
  return fit;
}

}  // namespace rsg
