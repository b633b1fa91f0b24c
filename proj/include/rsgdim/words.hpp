#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsgdim/rational_map.hpp"

namespace rsg {

// Word over the alphabet {1..u}; symbols are stored first-applied-first, so
// f_w = f_{w_n} o ... o f_{w_1} and compose_apply applies f_{w_1} first.
struct Word {
  std::vector<std::uint8_t> symbols;

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  std::string to_string() const;  // "121" for alphabets up to 9, dot-joined beyond
};

// Finite generator tuple (f_1, ..., f_u), u >= 2.
class MultiMap {
 public:
  explicit MultiMap(std::vector<RationalMap> generators, std::vector<std::string> labels = {});

  int u() const { return static_cast<int>(gens_.size()); }
  const RationalMap& gen(int j) const { return gens_.at(static_cast<std::size_t>(j - 1)); }  // 1-based
  const std::vector<RationalMap>& generators() const { return gens_; }
  const std::string& label(int j) const { return labels_.at(static_cast<std::size_t>(j - 1)); }

  // sum_j deg f_j : the exact level-n preimage count (with multiplicity) is
  // this to the n-th power.
  int branching_factor() const;
  int max_degree() const;

 private:
  std::vector<RationalMap> gens_;
  std::vector<std::string> labels_;
};

Complex compose_apply(const MultiMap& f, const Word& w, Complex z);

// Chain-rule derivative of f_w at z.  The norm is accumulated in log space;
// `value` is the euclidean complex product (may over/underflow for very long
// words -- the norm stays reliable).  Euclidean metric raises PoleDerivative
// if the forward orbit passes through a pole.
DerivativeValue word_derivative(const MultiMap& f, const Word& w, Complex z,
                                Metric metric = Metric::euclidean);

struct SkewState {
  Word prefix;  // remaining symbols to apply, first-applied-first
  Complex z;
};

// One step of the skew product: consume the leading symbol, apply that map.
SkewState skew_step(const MultiMap& f, const SkewState& state);

}  // namespace rsg
