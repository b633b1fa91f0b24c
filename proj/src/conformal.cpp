#include "rsgdim/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "rsgdim/errors.hpp"
#include "rsgdim/parallel.hpp"
#include "rsgdim/pressure.hpp"

namespace rsg {

Word unpack_word(std::uint64_t packed, std::uint8_t depth) {
  Word w;
  for (int i = 0; i < int(depth); ++i) w.symbols.push_back(static_cast<std::uint8_t>((packed >> (4 * i)) & 0xf));
  return w;
}

std::uint64_t pack_word(const Word& w) {
  std::uint64_t p = 0;
  for (std::size_t i = 0; i < w.symbols.size(); ++i) p |= std::uint64_t(w.symbols[i] & 0xf) << (4 * i);
  return p;
}

AtomicMeasure build_conformal_atoms(const MultiMap& f, Complex xi, double t, double s, int N,
                                    const PruningPolicy& policy, Metric metric,
                                    const PreimageTree* cached_tree, int workers) {
  if (N < 1 || N > 16) raise(ErrorCode::invalid_argument, "conformal truncation depth must be in [1, 16]");
  if (f.u() > 15) raise(ErrorCode::invalid_argument, "conformal atoms: alphabet above 15 unsupported");

  PreimageTree local;
  const PreimageTree* tree = cached_tree;
  if (!tree || tree->depth() < N) {
    local = build_preimage_tree(f, xi, N, policy, metric, workers);
    tree = &local;
  }

  // unnormalized level masses e^{-sn} Lambda_t^n 1(xi)
  std::vector<double> level_unnorm(static_cast<std::size_t>(N) + 1, 0.0);
  double series = 0.0;
  for (int n = 1; n <= N; ++n) {
    level_unnorm[static_cast<std::size_t>(n)] =
        std::exp(-s * double(n)) * transfer_sum(t, n, *tree, nullptr, workers);
    series += level_unnorm[static_cast<std::size_t>(n)];
  }
  if (!(series > 0.0) || !std::isfinite(series))
    raise(ErrorCode::series_not_decaying, "conformal series vanished or overflowed");
  for (int n = N / 2; n + 1 <= N; ++n)
    if (n >= 1 && level_unnorm[static_cast<std::size_t>(n + 1)] >= level_unnorm[static_cast<std::size_t>(n)])
      raise(ErrorCode::series_not_decaying,
            "level masses are not decaying: s is too close to the pressure at t");

  AtomicMeasure m;
  m.t = t;
  m.s = s;
  m.truncation = N;
  m.xi = xi;
  m.normalizer = series;
  m.planar = false;

  std::size_t natoms = 0;
  for (int n = 1; n <= N; ++n) natoms += tree->level(n).size();
  m.atoms.reserve(natoms);

  for (int n = 1; n <= N; ++n) {
    const auto& lv = tree->level(n);
    double esn = std::exp(-s * double(n));
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const auto& node = lv[i];
      if (std::isinf(node.log_deriv_norm)) continue;  // zero-derivative node carries no t-mass
      double mass = esn * double(node.multiplicity) * node.importance_weight *
                    std::exp(-t * node.log_deriv_norm) / series;
      Word w = tree->word_of(n, i);
      m.atoms.push_back(Atom{node.point, mass, pack_word(w), static_cast<std::uint8_t>(n)});
    }
    m.level_mass.push_back(level_unnorm[static_cast<std::size_t>(n)] / series);
  }

  double total = 0.0;
  for (const auto& a : m.atoms) total += a.mass;
  m.total_mass = total;
  return m;
}

AtomicMeasure project_measure(const AtomicMeasure& m) {
  AtomicMeasure out;
  out.total_mass = 0.0;
  out.t = m.t;
  out.s = m.s;
  out.truncation = m.truncation;
  out.xi = m.xi;
  out.level_mass = m.level_mass;
  out.normalizer = m.normalizer;
  out.planar = true;

  // merging radius: chordal 1e-9 translated to a local euclidean bound
  double max_abs2 = 0.0;
  for (const auto& a : m.atoms) max_abs2 = std::max(max_abs2, abs2(a.point));
  double merge_r = 1e-9 * 0.5 * (1.0 + max_abs2);

  std::vector<std::size_t> order(m.atoms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Complex &pa = m.atoms[a].point, &pb = m.atoms[b].point;
    if (pa.real() != pb.real()) return pa.real() < pb.real();
    if (pa.imag() != pb.imag()) return pa.imag() < pb.imag();
    return a < b;
  });

  // sweep in x; points within merge_r collapse onto the first representative
  std::vector<char> used(m.atoms.size(), 0);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    std::size_t i = order[oi];
    if (used[i]) continue;
    used[i] = 1;
    Complex rep = m.atoms[i].point;
    double mass = m.atoms[i].mass;
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      std::size_t j = order[oj];
      if (m.atoms[j].point.real() - rep.real() > merge_r) break;
      if (used[j]) continue;
      if (chordal_distance(rep, m.atoms[j].point) <= 1e-9) {
        used[j] = 1;
        mass += m.atoms[j].mass;
      }
    }
    out.atoms.push_back(Atom{rep, mass, 0, 0});
    out.total_mass += mass;
  }
  return out;
}

SpatialGrid::SpatialGrid(const std::vector<Atom>& atoms, double cell) : cell_(cell) {
  if (atoms.empty() || cell <= 0.0) {
    nx_ = ny_ = 0;
    return;
  }
  double x1 = atoms[0].point.real(), y1 = atoms[0].point.imag();
  x0_ = x1;
  y0_ = y1;
  for (const auto& a : atoms) {
    x0_ = std::min(x0_, a.point.real());
    y0_ = std::min(y0_, a.point.imag());
    x1 = std::max(x1, a.point.real());
    y1 = std::max(y1, a.point.imag());
  }
  nx_ = static_cast<std::int64_t>((x1 - x0_) / cell_) + 1;
  ny_ = static_cast<std::int64_t>((y1 - y0_) / cell_) + 1;
  // cap the grid so pathological spreads cannot blow memory
  while (nx_ * ny_ > (1 << 22)) {
    cell_ *= 2.0;
    nx_ = static_cast<std::int64_t>((x1 - x0_) / cell_) + 1;
    ny_ = static_cast<std::int64_t>((y1 - y0_) / cell_) + 1;
  }
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
  auto cell_of = [&](Complex p) {
    auto cx = static_cast<std::int64_t>((p.real() - x0_) / cell_);
    auto cy = static_cast<std::int64_t>((p.imag() - y0_) / cell_);
    cx = std::clamp<std::int64_t>(cx, 0, nx_ - 1);
    cy = std::clamp<std::int64_t>(cy, 0, ny_ - 1);
    return static_cast<std::size_t>(cy * nx_ + cx);
  };
  for (const auto& a : atoms) counts[cell_of(a.point) + 1]++;
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  offsets_ = counts;
  items_.resize(atoms.size());
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < atoms.size(); ++i) items_[cursor[cell_of(atoms[i].point)]++] = static_cast<std::uint32_t>(i);
}

void SpatialGrid::query_disk(Complex c, double r, const std::vector<Atom>& atoms,
                             const std::function<void(std::size_t)>& fn) const {
  if (nx_ == 0) return;
  auto cx0 = static_cast<std::int64_t>(std::floor((c.real() - r - x0_) / cell_));
  auto cx1 = static_cast<std::int64_t>(std::floor((c.real() + r - x0_) / cell_));
  auto cy0 = static_cast<std::int64_t>(std::floor((c.imag() - r - y0_) / cell_));
  auto cy1 = static_cast<std::int64_t>(std::floor((c.imag() + r - y0_) / cell_));
  cx0 = std::clamp<std::int64_t>(cx0, 0, nx_ - 1);
  cx1 = std::clamp<std::int64_t>(cx1, 0, nx_ - 1);
  cy0 = std::clamp<std::int64_t>(cy0, 0, ny_ - 1);
  cy1 = std::clamp<std::int64_t>(cy1, 0, ny_ - 1);
  double r2 = r * r;
  for (std::int64_t cy = cy0; cy <= cy1; ++cy)
    for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
      std::size_t cellIdx = static_cast<std::size_t>(cy * nx_ + cx);
      for (std::uint32_t k = offsets_[cellIdx]; k < offsets_[cellIdx + 1]; ++k) {
        std::size_t i = items_[k];
        if (abs2(atoms[i].point - c) <= r2) fn(i);
      }
    }
}

GeometricReport geometric_ratio_report(const AtomicMeasure& planar, double h,
                                       const std::vector<Complex>& centers,
                                       const std::vector<double>& radii) {
  for (double r : radii)
    if (!(r > 0.0)) raise(ErrorCode::nonpositive_radius, "geometric_ratio_report: radius <= 0");
  if (centers.empty() || radii.empty())
    raise(ErrorCode::invalid_argument, "geometric_ratio_report: empty centers or radii");

  double rmin = *std::min_element(radii.begin(), radii.end());
  SpatialGrid grid(planar.atoms, std::max(rmin, 1e-12));

  GeometricReport rep;
  rep.h_used = h;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (Complex c : centers)
    for (double r : radii) {
      double mass = 0.0;
      grid.query_disk(c, r, planar.atoms, [&](std::size_t i) { mass += planar.atoms[i].mass; });
      GeometricSample smp{c, r, 0.0, mass <= 0.0};
      if (smp.empty) {
        ++rep.empty_count;
      } else {
        smp.ratio = mass / std::pow(r, h);
        rep.min_ratio = std::min(rep.min_ratio, smp.ratio);
        rep.max_ratio = std::max(rep.max_ratio, smp.ratio);
      }
      rep.samples.push_back(smp);
    }
  rep.spread = (rep.max_ratio > 0.0 && std::isfinite(rep.min_ratio) && rep.min_ratio > 0.0)
                   ? rep.max_ratio / rep.min_ratio
                   : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

double conformality_residual(const AtomicMeasure& m, const MultiMap& f,
                             const PreimageTree* cached_tree) {
  const int N = m.truncation;
  PreimageTree local;
  const PreimageTree* tree = cached_tree;
  if (!tree || tree->depth() < N + 1) {
    local = build_preimage_tree(f, m.xi, N + 1, PruningPolicy{}, Metric::euclidean);
    tree = &local;
  }

  // Reconstruct the normalizing series from the tree (same float path as the
  // builder when the same tree is used).
  std::vector<double> level_unnorm(static_cast<std::size_t>(N) + 2, 0.0);
  double series = 0.0;
  for (int n = 1; n <= N + 1; ++n)
    level_unnorm[static_cast<std::size_t>(n)] = std::exp(-m.s * double(n)) * transfer_sum(m.t, n, *tree);
  for (int n = 1; n <= N; ++n) series += level_unnorm[static_cast<std::size_t>(n)];

  // Per-node mass of the truncated tower at level n.
  auto tower = [&](int n, const PreimageNode& node) {
    return std::exp(-m.s * double(n)) * double(node.multiplicity) * node.importance_weight *
           std::exp(-m.t * node.log_deriv_norm) / series;
  };

  // Evaluate both sides of  e^{-s} L_t^* nu = nu - S^{-1} e^{-s} L_t^* delta_xi
  // atom by atom over levels 1..N+1.  The left side is computed through the
  // parent atom (how the adjoint actually acts); the right side directly from
  // the measure and the reseed term.  Levels 2..N agree up to rounding, level
  // 1 cancels, and level N+1 survives: the residual is the orphaned tail mass.
  double tv = 0.0;
  for (int n = 1; n <= N + 1; ++n) {
    const auto& lv = tree->level(n);
    const auto& parents = tree->level(n - 1);
    for (const auto& node : lv) {
      if (std::isinf(node.log_deriv_norm)) continue;
      double lhs = 0.0;
      if (n >= 2) {
        const auto& par = parents[static_cast<std::size_t>(node.parent)];
        double step_norm = std::exp(-m.t * (node.log_deriv_norm - par.log_deriv_norm));
        double mult_step = double(node.multiplicity) / double(par.multiplicity);
        double imp_step = node.importance_weight / par.importance_weight;
        lhs = std::exp(-m.s) * step_norm * mult_step * imp_step * tower(n - 1, par);
      }
      double rhs = (n <= N ? tower(n, node) : 0.0) - (n == 1 ? tower(n, node) : 0.0);
      tv += std::abs(lhs - rhs);
    }
  }
  return tv;
}

}  // namespace rsg
