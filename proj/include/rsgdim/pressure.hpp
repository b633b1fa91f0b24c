#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rsgdim/preimage_tree.hpp"

namespace rsg {

// Level-n transfer-operator sum: sum over level-n nodes of
// weight * |f_w'(x)|^(-t).  Zero-derivative nodes are excluded and flagged
// (the exact term would be infinite for t > 0); at t = 0 every node counts.
// The reduction order is fixed (chunked left-to-right) for reproducibility.
double transfer_sum(double t, int n, const PreimageTree& tree, bool* infinite_flag = nullptr,
                    int workers = 1);

struct PressureEstimate {
  double t = 0.0;
  std::vector<std::pair<int, double>> values_by_n;     // (n, (1/n) log S_n)
  std::vector<std::pair<int, double>> ratio_estimates; // (n, log(S_{n+1}/S_n))
  Complex base_point;
  Metric metric = Metric::euclidean;
  bool pruning_used = false;
  bool infinite_sum_flag = false;

  // The headline estimate: successive-ratio value at the deepest n (Cesaro
  // values converge like O(1/n); the ratio forgets the prefactor).
  double headline() const;
};

PressureEstimate pressure_estimate(const MultiMap& f, Complex z, double t,
                                   const std::vector<int>& n_range, const PruningPolicy& policy = {},
                                   Metric metric = Metric::euclidean,
                                   const PreimageTree* cached_tree = nullptr, int workers = 1);

struct BowenRootResult {
  enum class Status { ok, no_bracket };
  Status status = Status::ok;
  double h = 0.0;
  std::pair<double, double> bracket{0.0, 2.0};  // final bisection bracket, h strictly inside
  int n_used = 0;
  double residual = 0.0;  // |estimated pressure at h|
  PressureEstimate at_root;
};

// Bisection for the zero of t -> headline pressure estimate on [0, 2].
// The bracket must change sign at the endpoints; otherwise the result is
// returned with status no_bracket (finite-n estimates are reported, never
// patched).  The preimage tree is built once and reused across t.
BowenRootResult bowen_root(const MultiMap& f, Complex z, int n, double tol_t,
                           const PruningPolicy& policy = {}, Metric metric = Metric::euclidean,
                           int workers = 1);

struct PoincareSums {
  double t = 0.0, s = 0.0;
  std::vector<double> partial;  // partial[k] = sum_{n=1}^{k+1} e^{-s n} S_n(t)
  bool divergence_flag = false; // terms not decaying geometrically
};

// Truncated s-weighted Poincare series sum_{n>=1} e^{-sn} Lambda_t^n 1(z).
PoincareSums poincare_partial_sums(const MultiMap& f, Complex z, double t, double s, int N,
                                   const PruningPolicy& policy = {},
                                   Metric metric = Metric::euclidean,
                                   const PreimageTree* cached_tree = nullptr);

// Smallest grid t whose transfer terms decay geometrically (headline pressure
// below -decay_margin); raises Inconclusive when no grid point decays.
double critical_exponent_estimate(const MultiMap& f, Complex z, const std::vector<double>& t_grid,
                                  int n, const PruningPolicy& policy = {},
                                  Metric metric = Metric::euclidean, double decay_margin = 0.01,
                                  const PreimageTree* cached_tree = nullptr, int workers = 1);

struct BasePointChoice {
  Complex point;
  double score;  // min euclidean distance to the sampled forward critical orbit
};

// Scores candidates by distance to the depth-limited forward semigroup orbit
// of all (finite) critical values; rejects everything within 1e-4.
BasePointChoice base_point_select(const MultiMap& f, const std::vector<Complex>& candidates,
                                  int depth = 6);

// Forward semigroup orbit of the critical values, depth-limited, deduplicated.
std::vector<Complex> postcritical_sample(const MultiMap& f, int depth,
                                         std::size_t budget = 20000);

}  // namespace rsg
