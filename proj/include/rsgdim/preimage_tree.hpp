#pragma once

#include <cstdint>
#include <vector>

#include "rsgdim/words.hpp"

namespace rsg {

struct PruningPolicy {
  enum class Mode { exhaustive, stochastic_beam };
  Mode mode = Mode::exhaustive;
  std::uint64_t node_budget = 1ull << 24;  // exhaustive: error beyond this
  std::uint32_t beam_width = 4096;         // stochastic_beam: kept nodes per level
  std::uint64_t seed = 1;
};

// One backward-iteration node.  A node at level n solves f_w(x) = z0 for the
// word w read off the parent chain: `symbol` is the node's first-applied
// generator, the remaining symbols are the parent's word (descent prepends).
struct PreimageNode {
  Complex point;
  double log_deriv_norm;     // log |f_w'(point)| in the tree metric; -inf at critical hits
  double importance_weight;  // 1 under exhaustive expansion; >1 after beam subsampling
  std::int32_t parent;       // index into the previous level; -1 at the root
  std::uint32_t multiplicity;
  std::uint8_t symbol;
};

class PreimageTree {
 public:
  Complex root() const { return root_; }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  Metric metric() const { return metric_; }
  bool pruned() const { return pruned_; }
  bool has_zero_derivative_nodes() const { return zero_deriv_nodes_ > 0; }
  std::uint64_t zero_derivative_nodes() const { return zero_deriv_nodes_; }

  const std::vector<PreimageNode>& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }

  // weight = multiplicity * importance; sums to (sum_j deg f_j)^n exactly in
  // expectation (exactly, not just in expectation, under exhaustive mode).
  double weighted_count(int n) const;

  Word word_of(int n, std::size_t index) const;

  // forward replay of the node's word; used by verification tests
  Complex replay(const MultiMap& f, int n, std::size_t index) const;

  void export_csv(const std::string& path) const;

  friend PreimageTree build_preimage_tree(const MultiMap& f, Complex z0, int depth,
                                          const PruningPolicy& policy, Metric metric, int workers);

 private:
  Complex root_;
  Metric metric_ = Metric::euclidean;
  bool pruned_ = false;
  std::uint64_t zero_deriv_nodes_ = 0;
  std::vector<std::vector<PreimageNode>> levels_;
};

// Exhaustive or stochastic-beam backward expansion of z0 to `depth` levels.
// Nodes are never merged across words; preimage multiplicity lands in the
// node's multiplicity field.  Beam subsampling keeps a uniform sample per
// level and scales importance_weight so weighted transfer sums stay unbiased.
PreimageTree build_preimage_tree(const MultiMap& f, Complex z0, int depth,
                                 const PruningPolicy& policy = {}, Metric metric = Metric::euclidean,
                                 int workers = 1);

// Random backward orbit (chaos game): each step picks a generator uniformly,
// then one of its preimages weighted by multiplicity.  Deterministic per seed.
std::vector<Complex> sample_backward_orbit(const MultiMap& f, Complex z0, int length,
                                           std::uint64_t seed);

}  // namespace rsg
