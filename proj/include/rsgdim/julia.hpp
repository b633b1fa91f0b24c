#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsgdim/preimage_tree.hpp"

namespace rsg {

// Fixed point of f with |multiplier| > 1: roots of P(z) - z Q(z), candidates
// ordered by descending multiplier norm (ties by lexicographic (re, im)), the
// first repelling one wins.  The fixed point at infinity is never returned
// (the working set is planar).  Raises NoRepellingFixedPoint otherwise.
Complex repelling_fixed_point(const RationalMap& f);

struct PointCloud {
  std::vector<Complex> points;
  enum class Method { full_tree, chaos_game } method = Method::chaos_game;
  int burn_in = 0;
  std::uint64_t source_hash = 0;  // hash of the generating multimap
};

struct JuliaParams {
  PointCloud::Method method = PointCloud::Method::chaos_game;
  int depth = 8;            // full_tree: expansion depth
  long length = 100000;     // chaos_game: kept points (after burn-in, all segments)
  int burn_in = 64;
  int segments = 8;         // chaos_game: independent orbit segments
  std::uint64_t seed = 1;
  PruningPolicy policy;     // full_tree budget
  int workers = 1;
};

// Backward-iteration approximation of the Julia set seeded at a repelling
// fixed point of the first generator that has one.
PointCloud approximate_julia(const MultiMap& f, const JuliaParams& params);

std::uint64_t multimap_hash(const MultiMap& f);

struct Viewport {
  Complex center{0.0, 0.0};
  double half_width = 2.0, half_height = 2.0;
  int px = 800, py = 800;
};

// Aspect consistency: py/px must match half_height/half_width within 1%.
void validate_viewport(const Viewport& v);

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 8-bit grayscale
  long points_outside = 0;
};

// Hit-count raster, log-scaled to 8 bits.  Raises EmptyCloud on no points;
// a cloud entirely outside the viewport yields an all-zero image with the
// outside count reported.
Image rasterize(const PointCloud& cloud, const Viewport& v, int workers = 1);

struct DimensionFit {
  std::vector<double> epsilons;  // decreasing
  std::vector<double> counts;    // offset-averaged box counts, nondecreasing
  double slope = 0.0;
  double r2 = 0.0;
  double ci = 0.0;  // 95% half-width on the slope
  bool degenerate = false;
  bool few_points_warning = false;
};

// Least-squares fit of log N(eps) against log(1/eps); each count is the
// average over 4 seeded random grid offsets.
DimensionFit box_count_dimension(const PointCloud& cloud, const std::vector<double>& epsilons,
                                 std::uint64_t seed = 7);

// Geometric epsilon ladder: `steps` values from eps_hi down, spanning
// `decades` powers of ten.
std::vector<double> epsilon_ladder(double eps_hi, double decades, int steps);

}  // namespace rsg
