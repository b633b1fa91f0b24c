#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rsgdim/julia.hpp"
#include "rsgdim/words.hpp"

namespace rsg {

enum class RegionKind { disk, annulus, rectangle, hull_difference };

struct BoundingBox {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

// Open planar region with a total, deterministic membership test.
//
// hull_difference is int K(outer) \ K(inner) for two polynomial maps, with
// filled-hull membership decided by escape testing: iterate up to max_iter
// times and declare escape once the orbit leaves a radius derived from the
// coefficients.  This is exact away from hull boundaries and a documented
// approximation on them; interior vs closure is not distinguished.
class Region {
 public:
  static Region disk(Complex center, double radius);
  static Region annulus(Complex center, double inner, double outer);
  static Region rectangle(double x0, double y0, double x1, double y1);
  static Region hull_difference(const RationalMap& outer, const RationalMap& inner,
                                int max_iter = 500);

  bool contains(Complex z) const;
  BoundingBox bounds() const;  // finite box enclosing the region
  RegionKind kind() const { return kind_; }

  // serialization accessors (meaningful per kind)
  Complex center() const { return center_; }
  double inner_radius() const { return r0_; }
  double outer_radius() const { return r1_; }
  const BoundingBox& box() const { return box_; }
  const RationalMap& hull_outer() const;
  const RationalMap& hull_inner() const;
  int max_iter() const { return max_iter_; }

 private:
  Region() = default;
  RegionKind kind_ = RegionKind::disk;
  Complex center_{};
  double r0_ = 0.0, r1_ = 0.0;
  BoundingBox box_{};
  std::vector<RationalMap> hulls_;         // {outer, inner}
  std::vector<double> escape_radius_;      // matching hulls_
  int max_iter_ = 500;

  bool in_hull(std::size_t which, Complex z) const;
};

const char* region_kind_name(RegionKind k);

// A grid or sample point at which one of the open-set conditions failed,
// together with the generator indices involved (osc1: i == j, the offending
// branch; osc2: the overlapping pair i < j).
struct WitnessPoint {
  Complex x{};
  int i = 0, j = 0;
};

struct OSCReport {
  std::uint64_t osc1_violations = 0;  // f_j(x) in U but x outside U
  std::uint64_t osc2_violations = 0;  // f_i(x) and f_j(x) both in U, i != j
  std::vector<WitnessPoint> osc1_witnesses;  // capped, re-verified
  std::vector<WitnessPoint> osc2_witnesses;  // capped, re-verified
  double osc3_alpha = 1.0;            // min sampled spherical density of U
  int grid_size = 0;                  // points per axis
  std::uint64_t mc_samples = 0;       // Monte Carlo draws actually used
  std::uint64_t boundary_centers = 0; // boundary-adjacent centers sampled
  bool pass() const { return osc1_violations == 0 && osc2_violations == 0; }
};

// Grid test of the open set condition for U, plus a Monte Carlo estimate of
// the boundary density constant.
//
// The grid covers bounds(U) widened by a unit margin, `grid` points per axis.
// osc1 tests the implication f_j(x) in U  =>  x in U pointwise; osc2 tests
// disjointness of the inverse branches via joint membership f_i(x), f_j(x) in
// U for i < j.  Violations are counted per (point, branch) pair; a capped
// list of witnesses is re-verified by direct re-evaluation before reporting,
// so refining the grid can only add witnesses, never retract one.
//
// osc3: centers are grid points of U with a 4-neighbour outside U; around
// each, spherical caps of 10 log-spaced geodesic radii in [1e-3, 1] are
// sampled uniformly (Archimedes: uniform in cap height), and alpha is the
// minimum observed fraction of samples landing in U.  `mc` is the total
// sample budget, split evenly across (center, radius) pairs.  With no
// boundary-adjacent grid point, alpha = 1 and mc_samples = 0.
OSCReport check_osc(const MultiMap& f, const Region& U, int grid, std::uint64_t mc,
                    std::uint64_t seed = 1, int workers = 1);

enum class SemiHypVerdict { consistent, inconclusive, violated, not_in_julia };
const char* semihyp_verdict_name(SemiHypVerdict v);

struct CriticalPairReport {
  Complex c{};                 // critical point of generator j (infinity allowed)
  int generator = 0;           // 1-based
  double dist_to_cloud = std::numeric_limits<double>::infinity();
  double min_orbit_distance = std::numeric_limits<double>::infinity();
  Complex nearest_orbit_point{};
  std::uint64_t orbit_points = 0;
  SemiHypVerdict verdict = SemiHypVerdict::not_in_julia;
};

struct SemiHypReport {
  std::vector<CriticalPairReport> pairs;
  int depth = 0;
  double dist_tol = 0.0;
  SemiHypVerdict overall = SemiHypVerdict::consistent;
};

// Heuristic separation test: for every critical point c of every generator
// f_j that lies within dist_tol (euclidean) of the julia cloud, enumerate the
// forward semigroup orbit {f_w(f_j(c)) : |w| <= depth} (identity included)
// and report the minimum euclidean distance back to c.
//
// Verdicts: violated if the orbit returns within dist_tol of c, consistent
// if it stays further than 10 * dist_tol, inconclusive between.  Critical
// points farther than dist_tol from the cloud (infinity always) are reported
// as not_in_julia and excluded from the overall verdict.  This checks only
// the separation condition; the companion non-convergence condition is not
// algorithmically checkable here and is left to the caller's judgement.
SemiHypReport check_semihyperbolicity(const MultiMap& f, const PointCloud& julia, int depth,
                                      double dist_tol, int workers = 1);

}  // namespace rsg
