#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rsgdim/preimage_tree.hpp"

namespace rsg {

// One weighted atom of the truncated conformal-measure approximation.
// The word is nibble-packed (symbol k at nibble k), which caps the usable
// alphabet at 15 and the truncation depth at 16; plenty for the catalog and
// enforced at build time.
struct Atom {
  Complex point;
  double mass;
  std::uint64_t packed_word = 0;
  std::uint8_t depth = 0;
};

Word unpack_word(std::uint64_t packed, std::uint8_t depth);
std::uint64_t pack_word(const Word& w);

struct AtomicMeasure {
  std::vector<Atom> atoms;
  double total_mass = 0.0;
  double t = 0.0, s = 0.0;
  int truncation = 0;
  Complex xi{};
  std::vector<double> level_mass;  // normalized mass per level 1..N
  double normalizer = 0.0;         // truncated-series value the masses were divided by
  bool planar = false;             // true after project_measure
};

// Truncated Patterson-Sullivan style tower: atoms at every (word, preimage)
// pair with |word| <= N, mass proportional to e^{-s n} |f_w'(x)|^{-t},
// normalized by the truncated series value at xi.  Requires the level masses
// to decay (s safely above the finite-n pressure), else SeriesNotDecaying.
AtomicMeasure build_conformal_atoms(const MultiMap& f, Complex xi, double t, double s, int N,
                                    const PruningPolicy& policy = {},
                                    Metric metric = Metric::euclidean,
                                    const PreimageTree* cached_tree = nullptr, int workers = 1);

// Forgets the symbolic coordinate: atoms within 1e-9 (chordal) merge, masses
// add.  Total mass is preserved.
AtomicMeasure project_measure(const AtomicMeasure& m);

struct GeometricSample {
  Complex center;
  double radius;
  double ratio;  // mass(B(center, radius)) / radius^h ; 0 for empty balls
  bool empty;
};

struct GeometricReport {
  double h_used = 0.0;
  std::vector<GeometricSample> samples;
  double min_ratio = 0.0, max_ratio = 0.0;
  double spread = 0.0;  // max/min over non-empty samples
  long empty_count = 0;
};

// Ball-mass-to-r^h ratios over given centers and radii (euclidean balls on
// the planar projection).  Empty balls are flagged per sample, not fatal.
GeometricReport geometric_ratio_report(const AtomicMeasure& planar, double h,
                                       const std::vector<Complex>& centers,
                                       const std::vector<double>& radii);

// Total-variation discrepancy between the two sides of the finite-level
// conformality identity e^{-s} L_t^* nu = nu - S^{-1} e^{-s} L_t^* delta_xi,
// evaluated on the truncated atom tower.  Exactly the orphaned level-(N+1)
// mass in exact arithmetic, so it is bounded by the truncation tail.
double conformality_residual(const AtomicMeasure& m, const MultiMap& f,
                             const PreimageTree* cached_tree = nullptr);

// Uniform bucket index over the plane for disk queries on many atoms.
class SpatialGrid {
 public:
  SpatialGrid(const std::vector<Atom>& atoms, double cell);
  // calls fn(atom_index) for every atom within `r` of `c`
  void query_disk(Complex c, double r, const std::vector<Atom>& atoms,
                  const std::function<void(std::size_t)>& fn) const;

 private:
  double cell_;
  double x0_ = 0.0, y0_ = 0.0;
  std::int64_t nx_ = 0, ny_ = 0;
  std::vector<std::uint32_t> offsets_;  // CSR layout
  std::vector<std::uint32_t> items_;
};

}  // namespace rsg
