#include "rsgdim/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsgdim/errors.hpp"
#include "rsgdim/parallel.hpp"

namespace rsg {

double transfer_sum(double t, int n, const PreimageTree& tree, bool* infinite_flag, int workers) {
  const auto& lv = tree.level(n);
  bool hit_infinite = false;
  double s;
  if (t == 0.0) {
    s = deterministic_sum(lv.size(), workers, [&](std::size_t i) {
      return double(lv[i].multiplicity) * lv[i].importance_weight;
    });
  } else {
    for (const auto& node : lv)
      if (std::isinf(node.log_deriv_norm) && node.log_deriv_norm < 0.0) {
        hit_infinite = t > 0.0;
        break;
      }
    s = deterministic_sum(lv.size(), workers, [&](std::size_t i) {
      const auto& node = lv[i];
      if (std::isinf(node.log_deriv_norm)) return 0.0;  // excluded, flagged above
      return double(node.multiplicity) * node.importance_weight * std::exp(-t * node.log_deriv_norm);
    });
  }
  if (infinite_flag) *infinite_flag = hit_infinite;
  return s;
}

double PressureEstimate::headline() const {
  if (!ratio_estimates.empty()) return ratio_estimates.back().second;
  if (!values_by_n.empty()) return values_by_n.back().second;
  return std::numeric_limits<double>::quiet_NaN();
}

PressureEstimate pressure_estimate(const MultiMap& f, Complex z, double t,
                                   const std::vector<int>& n_range, const PruningPolicy& policy,
                                   Metric metric, const PreimageTree* cached_tree, int workers) {
  if (n_range.empty()) raise(ErrorCode::invalid_argument, "pressure_estimate: empty n_range");
  int max_n = *std::max_element(n_range.begin(), n_range.end());
  if (max_n < 1) raise(ErrorCode::invalid_argument, "pressure_estimate: n must be >= 1");

  PreimageTree local;
  const PreimageTree* tree = cached_tree;
  if (!tree || tree->depth() < max_n + 1) {
    local = build_preimage_tree(f, z, max_n + 1, policy, metric, workers);
    tree = &local;
  }

  PressureEstimate est;
  est.t = t;
  est.base_point = z;
  est.metric = metric;
  est.pruning_used = tree->pruned();

  std::vector<int> ns(n_range);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  for (int n : ns) {
    bool flag = false;
    double sn = transfer_sum(t, n, *tree, &flag, workers);
    double sn1 = transfer_sum(t, n + 1, *tree, &flag, workers);
    est.infinite_sum_flag = est.infinite_sum_flag || flag;
    est.values_by_n.emplace_back(n, std::log(sn) / double(n));
    est.ratio_estimates.emplace_back(n, std::log(sn1) - std::log(sn));
  }
  return est;
}

BowenRootResult bowen_root(const MultiMap& f, Complex z, int n, double tol_t,
                           const PruningPolicy& policy, Metric metric, int workers) {
  if (n < 1) raise(ErrorCode::invalid_argument, "bowen_root: n must be >= 1");
  if (tol_t <= 0.0) raise(ErrorCode::invalid_argument, "bowen_root: tol_t must be positive");

  PreimageTree tree = build_preimage_tree(f, z, n + 1, policy, metric, workers);
  auto headline = [&](double t) {
    double sn = transfer_sum(t, n, tree, nullptr, workers);
    double sn1 = transfer_sum(t, n + 1, tree, nullptr, workers);
    return std::log(sn1) - std::log(sn);
  };

  BowenRootResult res;
  res.n_used = n;

  double lo = 0.0, hi = 2.0;
  double p_lo = headline(lo), p_hi = headline(hi);
  if (!(p_lo > 0.0) || !(p_hi < 0.0)) {
    res.status = BowenRootResult::Status::no_bracket;
    res.bracket = {lo, hi};
    res.h = std::numeric_limits<double>::quiet_NaN();
    res.residual = std::numeric_limits<double>::quiet_NaN();
    // still report the finite-n evidence, taken at the endpoint closer to a zero
    double t_near = std::abs(p_lo) <= std::abs(p_hi) ? lo : hi;
    res.at_root =
        pressure_estimate(f, z, t_near, {std::max(1, n / 2), n}, policy, metric, &tree, workers);
    return res;
  }

  while (hi - lo > tol_t) {
    double mid = 0.5 * (lo + hi);
    double p_mid = headline(mid);
    if (p_mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  res.h = 0.5 * (lo + hi);
  res.bracket = {lo, hi};
  res.residual = std::abs(headline(res.h));
  res.at_root = pressure_estimate(f, z, res.h, {std::max(1, n / 2), n}, policy, metric, &tree, workers);
  return res;
}

PoincareSums poincare_partial_sums(const MultiMap& f, Complex z, double t, double s, int N,
                                   const PruningPolicy& policy, Metric metric,
                                   const PreimageTree* cached_tree) {
  if (N < 2) raise(ErrorCode::invalid_argument, "poincare_partial_sums: need N >= 2");
  PreimageTree local;
  const PreimageTree* tree = cached_tree;
  if (!tree || tree->depth() < N) {
    local = build_preimage_tree(f, z, N, policy, metric);
    tree = &local;
  }

  PoincareSums out;
  out.t = t;
  out.s = s;
  double acc = 0.0;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(N));
  for (int k = 1; k <= N; ++k) {
    double term = std::exp(-s * double(k)) * transfer_sum(t, k, *tree);
    terms.push_back(term);
    acc += term;
    out.partial.push_back(acc);
  }
  // geometric decay check over the trailing half
  for (std::size_t k = terms.size() / 2; k + 1 < terms.size(); ++k)
    if (terms[k + 1] >= terms[k] * (1.0 - 1e-12)) out.divergence_flag = true;
  return out;
}

double critical_exponent_estimate(const MultiMap& f, Complex z, const std::vector<double>& t_grid,
                                  int n, const PruningPolicy& policy, Metric metric,
                                  double decay_margin, const PreimageTree* cached_tree,
                                  int workers) {
  if (t_grid.empty()) raise(ErrorCode::invalid_argument, "critical_exponent_estimate: empty grid");
  PreimageTree local;
  const PreimageTree* tree = cached_tree;
  if (!tree || tree->depth() < n + 1) {
    local = build_preimage_tree(f, z, n + 1, policy, metric, workers);
    tree = &local;
  }
  std::vector<double> grid(t_grid);
  std::sort(grid.begin(), grid.end());
  double threshold = std::log(1.0 - decay_margin);
  for (double t : grid) {
    double sn = transfer_sum(t, n, *tree, nullptr, workers);
    double sn1 = transfer_sum(t, n + 1, *tree, nullptr, workers);
    if (std::log(sn1) - std::log(sn) < threshold) return t;
  }
  raise(ErrorCode::inconclusive, "no grid point exhibits geometric decay");
}

std::vector<Complex> postcritical_sample(const MultiMap& f, int depth, std::size_t budget) {
  // BFS of the forward semigroup orbit of all finite critical values.
  std::vector<Complex> frontier;
  std::vector<Complex> orbit;
  auto push_unique = [](std::vector<Complex>& v, Complex p) {
    for (const auto& q : v)
      if (std::abs(p - q) <= 1e-10 * std::max(1.0, std::abs(q))) return false;
    v.push_back(p);
    return true;
  };
  for (const auto& g : f.generators())
    for (Complex cv : g.critical_values())
      if (is_finite(cv)) push_unique(frontier, cv);
  orbit = frontier;
  for (int d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<Complex> next;
    for (Complex p : frontier)
      for (const auto& g : f.generators()) {
        Complex q = g.eval(p);
        if (!is_finite(q)) continue;
        if (orbit.size() + next.size() >= budget) break;
        if (push_unique(orbit, q)) next.push_back(q);
      }
    frontier = std::move(next);
  }
  return orbit;
}

BasePointChoice base_point_select(const MultiMap& f, const std::vector<Complex>& candidates,
                                  int depth) {
  if (candidates.empty()) raise(ErrorCode::invalid_argument, "base_point_select: empty candidate list");
  std::vector<Complex> orbit = postcritical_sample(f, depth);
  if (orbit.empty()) {
    // no critical values in the plane (e.g. Moebius generators): any
    // candidate is fine, scored with an infinity sentinel
    return {candidates.front(), std::numeric_limits<double>::infinity()};
  }
  BasePointChoice best{candidates.front(), -1.0};
  for (Complex c : candidates) {
    double score = std::numeric_limits<double>::infinity();
    for (Complex p : orbit) score = std::min(score, std::abs(c - p));
    if (score > best.score) best = {c, score};
  }
  if (best.score <= 1e-4)
    raise(ErrorCode::all_candidates_rejected,
          "every candidate is within 1e-4 of the sampled postcritical set");
  return best;
}

}  // namespace rsg
