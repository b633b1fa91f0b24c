#include "rsgdim/words.hpp"

#include <cmath>

#include "rsgdim/errors.hpp"

namespace rsg {

std::string Word::to_string() const {
  std::string s;
  bool wide = false;
  for (auto c : symbols)
    if (c > 9) wide = true;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (wide && i > 0) s += '.';
    s += std::to_string(int(symbols[i]));
  }
  return s;
}

MultiMap::MultiMap(std::vector<RationalMap> generators, std::vector<std::string> labels)
    : gens_(std::move(generators)), labels_(std::move(labels)) {
  if (gens_.size() < 2) raise(ErrorCode::invalid_argument, "multimap: need at least two generators");
  if (gens_.size() > 255) raise(ErrorCode::invalid_argument, "multimap: alphabet above 255 unsupported");
  if (labels_.empty())
    for (std::size_t j = 0; j < gens_.size(); ++j) labels_.push_back("f" + std::to_string(j + 1));
  if (labels_.size() != gens_.size())
    raise(ErrorCode::invalid_argument, "multimap: label count mismatch");
}

int MultiMap::branching_factor() const {
  int s = 0;
  for (const auto& g : gens_) s += g.degree();
  return s;
}

int MultiMap::max_degree() const {
  int m = 0;
  for (const auto& g : gens_) m = std::max(m, g.degree());
  return m;
}

Complex compose_apply(const MultiMap& f, const Word& w, Complex z) {
  for (auto s : w.symbols) {
    if (s < 1 || int(s) > f.u()) raise(ErrorCode::invalid_argument, "word symbol out of range");
    z = f.gen(int(s)).eval(z);
  }
  return z;
}

DerivativeValue word_derivative(const MultiMap& f, const Word& w, Complex z, Metric metric) {
  if (w.empty()) raise(ErrorCode::empty_word, "word_derivative: empty word");
  Complex value(1.0, 0.0);
  double log_norm = 0.0;
  for (auto s : w.symbols) {
    if (s < 1 || int(s) > f.u()) raise(ErrorCode::invalid_argument, "word symbol out of range");
    const RationalMap& g = f.gen(int(s));
    DerivativeValue d = g.derivative(z, metric);
    value *= d.value;
    log_norm += std::log(d.norm);
    z = g.eval(z);
  }
  return {value, std::exp(log_norm)};
}

SkewState skew_step(const MultiMap& f, const SkewState& state) {
  if (state.prefix.empty()) raise(ErrorCode::empty_word, "skew_step: empty prefix");
  int s = int(state.prefix.symbols.front());
  if (s < 1 || s > f.u()) raise(ErrorCode::invalid_argument, "word symbol out of range");
  SkewState next;
  next.prefix.symbols.assign(state.prefix.symbols.begin() + 1, state.prefix.symbols.end());
  next.z = f.gen(s).eval(state.z);
  return next;
}

}  // namespace rsg
