#include "rsgdim/preimage_tree.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "rsgdim/errors.hpp"
#include "rsgdim/parallel.hpp"
#include "rsgdim/rng.hpp"

namespace rsg {

double PreimageTree::weighted_count(int n) const {
  double s = 0.0;
  for (const auto& node : level(n)) s += double(node.multiplicity) * node.importance_weight;
  return s;
}

Word PreimageTree::word_of(int n, std::size_t index) const {
  Word w;
  int lvl = n;
  std::int64_t idx = static_cast<std::int64_t>(index);
  while (lvl >= 1) {
    const PreimageNode& node = levels_[static_cast<std::size_t>(lvl)][static_cast<std::size_t>(idx)];
    w.symbols.push_back(node.symbol);
    idx = node.parent;
    --lvl;
  }
  return w;
}

Complex PreimageTree::replay(const MultiMap& f, int n, std::size_t index) const {
  return compose_apply(f, word_of(n, index), levels_[static_cast<std::size_t>(n)][index].point);
}

void PreimageTree::export_csv(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) raise(ErrorCode::invalid_argument, "export_csv: cannot open " + path);
  std::fprintf(fp, "level,word,re,im,deriv_norm,weight\r\n");
  for (int n = 0; n <= depth(); ++n) {
    const auto& lv = level(n);
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const auto& node = lv[i];
      double w = double(node.multiplicity) * node.importance_weight;
      std::fprintf(fp, "%d,%s,%.17g,%.17g,%.17g,%.17g\r\n", n, word_of(n, i).to_string().c_str(),
                   node.point.real(), node.point.imag(), std::exp(node.log_deriv_norm), w);
    }
  }
  std::fclose(fp);
}

PreimageTree build_preimage_tree(const MultiMap& f, Complex z0, int depth,
                                 const PruningPolicy& policy, Metric metric, int workers) {
  if (depth < 0) raise(ErrorCode::invalid_argument, "tree depth must be >= 0");
  PreimageTree tree;
  tree.root_ = z0;
  tree.metric_ = metric;
  tree.levels_.resize(1);
  tree.levels_[0].push_back(PreimageNode{z0, 0.0, 1.0, -1, 1, 0});

  const int u = f.u();
  const int branching = f.branching_factor();

  for (int lvl = 1; lvl <= depth; ++lvl) {
    const auto& prev = tree.levels_.back();
    if (policy.mode == PruningPolicy::Mode::exhaustive) {
      std::uint64_t projected = static_cast<std::uint64_t>(prev.size()) * static_cast<std::uint64_t>(branching);
      if (projected > policy.node_budget)
        raise(ErrorCode::budget_exceeded,
              "tree level " + std::to_string(lvl) + " would need " + std::to_string(projected) +
                  " nodes (budget " + std::to_string(policy.node_budget) + ")");
    }

    // Expand every parent into per-parent buckets (deterministic layout
    // independent of the worker count), then concatenate in parent order.
    std::vector<std::vector<PreimageNode>> buckets(prev.size());
    std::atomic<std::uint64_t> zero_count{0};
    parallel_for(prev.size(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t pi = b; pi < e; ++pi) {
        const PreimageNode& par = prev[pi];
        auto& bucket = buckets[pi];
        for (int j = 1; j <= u; ++j) {
          const RationalMap& g = f.gen(j);
          RootSet pre = g.preimages(par.point);
          if (!pre.converged)
            raise(ErrorCode::non_convergence, "preimage solve failed at level " + std::to_string(lvl));
          for (const auto& root : pre.roots) {
            DerivativeValue d = g.derivative(root.point, metric);
            double step = d.norm > 0.0 ? std::log(d.norm) : -std::numeric_limits<double>::infinity();
            if (!(d.norm > 0.0)) zero_count.fetch_add(1, std::memory_order_relaxed);
            bucket.push_back(PreimageNode{root.point, par.log_deriv_norm + step, par.importance_weight,
                                          static_cast<std::int32_t>(pi),
                                          par.multiplicity * static_cast<std::uint32_t>(root.multiplicity),
                                          static_cast<std::uint8_t>(j)});
          }
          // Preimage branches through infinity are kept as nodes only when
          // finite (the working set is planar); they are tallied so callers
          // can see that weight left the finite picture.
          if (pre.infinity_multiplicity > 0)
            zero_count.fetch_add(static_cast<std::uint64_t>(pre.infinity_multiplicity),
                                 std::memory_order_relaxed);
        }
      }
    });
    tree.zero_deriv_nodes_ += zero_count.load();

    std::vector<PreimageNode> next;
    std::size_t total = 0;
    for (const auto& bkt : buckets) total += bkt.size();
    next.reserve(total);
    for (auto& bkt : buckets) next.insert(next.end(), bkt.begin(), bkt.end());

    if (policy.mode == PruningPolicy::Mode::stochastic_beam && next.size() > policy.beam_width) {
      // Uniform subsample without replacement; surviving nodes absorb the
      // inverse keep probability so weighted sums stay unbiased.
      std::mt19937_64 rng(derive_seed(policy.seed, static_cast<std::uint64_t>(lvl)));
      std::vector<std::uint32_t> idx(next.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
      for (std::size_t i = 0; i < policy.beam_width; ++i)
        std::swap(idx[i], idx[i + bounded_rand(rng, idx.size() - i)]);
      idx.resize(policy.beam_width);
      std::sort(idx.begin(), idx.end());
      double scale = double(next.size()) / double(policy.beam_width);
      std::vector<PreimageNode> kept;
      kept.reserve(policy.beam_width);
      for (auto i : idx) {
        PreimageNode node = next[i];
        node.importance_weight *= scale;
        kept.push_back(node);
      }
      next = std::move(kept);
      tree.pruned_ = true;
    }

    tree.levels_.push_back(std::move(next));
  }
  return tree;
}

std::vector<Complex> sample_backward_orbit(const MultiMap& f, Complex z0, int length,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::vector<Complex> orbit;
  orbit.reserve(static_cast<std::size_t>(length));
  Complex z = z0;
  for (int i = 0; i < length; ++i) {
    int j = 1 + static_cast<int>(bounded_rand(rng, static_cast<std::uint64_t>(f.u())));
    const RationalMap& g = f.gen(j);
    RootSet pre = g.preimages(z);
    if (!pre.converged) raise(ErrorCode::non_convergence, "backward orbit preimage solve failed");
    int total = 0;
    for (const auto& r : pre.roots) total += r.multiplicity;
    if (total == 0) raise(ErrorCode::invalid_argument, "backward orbit hit a point with no finite preimages");
    int k = static_cast<int>(bounded_rand(rng, static_cast<std::uint64_t>(total)));
    for (const auto& r : pre.roots) {
      k -= r.multiplicity;
      if (k < 0) {
        z = r.point;
        break;
      }
    }
    orbit.push_back(z);
  }
  return orbit;
}

}  // namespace rsg
