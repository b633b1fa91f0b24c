#include "rsgdim/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"
#include "rsgdim/catalog.hpp"
#include "rsgdim/conditions.hpp"
#include "rsgdim/conformal.hpp"
#include "rsgdim/errors.hpp"
#include "rsgdim/io.hpp"
#include "rsgdim/julia.hpp"
#include "rsgdim/parallel.hpp"
#include "rsgdim/pressure.hpp"

namespace rsg {

namespace {

using nlohmann::json;

constexpr const char* kLibraryVersion = "0.1.0";
constexpr int kReportFormat = 1;

[[noreturn]] void schema_error(const std::string& msg) { raise(ErrorCode::schema, msg); }

void require_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema_error(std::string(where) + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) schema_error(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

double get_num(const json& o, const char* key, double def) {
  if (!o.contains(key)) return def;
  const json& v = o.at(key);
  if (!v.is_number()) schema_error(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double req_num(const json& o, const char* key, const char* where) {
  if (!o.contains(key)) schema_error(std::string(where) + ": missing required key '" + key + "'");
  const json& v = o.at(key);
  if (!v.is_number()) schema_error(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

long get_int(const json& o, const char* key, long def) {
  if (!o.contains(key)) return def;
  const json& v = o.at(key);
  if (!v.is_number_integer()) schema_error(std::string("'") + key + "' must be an integer");
  return v.get<long>();
}

std::string get_str(const json& o, const char* key, const std::string& def) {
  if (!o.contains(key)) return def;
  const json& v = o.at(key);
  if (!v.is_string()) schema_error(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

Complex parse_complex(const json& j, const char* where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  schema_error(std::string(where) + ": expected a number or [re, im]");
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Polynomial parse_poly(const json& j, const char* where) {
  if (!j.is_array() || j.empty()) schema_error(std::string(where) + ": expected a coefficient array");
  std::vector<Complex> c;
  for (const auto& e : j) c.push_back(parse_complex(e, where));
  return Polynomial(std::move(c));
}

json poly_json(const Polynomial& p) {
  json a = json::array();
  for (int i = 0; i <= p.degree(); ++i) a.push_back(complex_json(p[i]));
  return a;
}

RationalMap parse_generator(const json& j, const char* where) {
  if (j.is_array()) return RationalMap(parse_poly(j, where), Polynomial({1.0}));
  if (j.is_object()) {
    require_keys(j, where, {"num", "den"});
    if (!j.contains("num")) schema_error(std::string(where) + ": missing 'num'");
    Polynomial num = parse_poly(j.at("num"), where);
    Polynomial den = j.contains("den") ? parse_poly(j.at("den"), where) : Polynomial({1.0});
    return RationalMap(std::move(num), std::move(den));
  }
  schema_error(std::string(where) + ": expected a coefficient array or {num, den}");
}

json generator_json(const RationalMap& g) {
  return json{{"num", poly_json(g.num())}, {"den", poly_json(g.den())}};
}

struct ResolvedMultimap {
  MultiMap map;
  const CatalogEntry* entry = nullptr;  // set when the config named a catalog entry
  json echo;
};

ResolvedMultimap parse_multimap(const json& j) {
  if (j.is_string()) {
    const CatalogEntry& e = catalog_lookup(j.get<std::string>());
    return {e.map, &e, j};
  }
  if (j.is_object()) {
    require_keys(j, "multimap", {"generators", "labels"});
    if (!j.contains("generators") || !j.at("generators").is_array() || j.at("generators").size() < 2)
      schema_error("multimap: 'generators' must list at least two maps");
    std::vector<RationalMap> gens;
    for (const auto& g : j.at("generators")) gens.push_back(parse_generator(g, "multimap.generators"));
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      if (!j.at("labels").is_array()) schema_error("multimap: 'labels' must be an array");
      for (const auto& l : j.at("labels")) {
        if (!l.is_string()) schema_error("multimap: labels must be strings");
        labels.push_back(l.get<std::string>());
      }
    }
    MultiMap mm(gens, labels);
    json echo;
    echo["generators"] = json::array();
    for (const auto& g : mm.generators()) echo["generators"].push_back(generator_json(g));
    json lab = json::array();
    for (int k = 1; k <= mm.u(); ++k) lab.push_back(mm.label(k));
    echo["labels"] = lab;
    return {std::move(mm), nullptr, std::move(echo)};
  }
  schema_error("multimap: expected a catalog name or {generators, labels}");
}

Metric parse_metric(const std::string& s) {
  if (s == "euclidean") return Metric::euclidean;
  if (s == "spherical") return Metric::spherical;
  schema_error("metric: expected \"euclidean\" or \"spherical\"");
}

const char* metric_name(Metric m) { return m == Metric::euclidean ? "euclidean" : "spherical"; }

PruningPolicy parse_policy(const json& block, std::uint64_t default_seed, json& echo) {
  PruningPolicy p;
  p.seed = default_seed;
  if (block.contains("pruning")) {
    const json& j = block.at("pruning");
    require_keys(j, "pruning", {"mode", "node_budget", "beam_width", "seed"});
    std::string mode = get_str(j, "mode", "exhaustive");
    if (mode == "exhaustive")
      p.mode = PruningPolicy::Mode::exhaustive;
    else if (mode == "stochastic_beam")
      p.mode = PruningPolicy::Mode::stochastic_beam;
    else
      schema_error("pruning.mode: expected \"exhaustive\" or \"stochastic_beam\"");
    p.node_budget = std::uint64_t(get_int(j, "node_budget", long(p.node_budget)));
    p.beam_width = std::uint32_t(get_int(j, "beam_width", long(p.beam_width)));
    p.seed = std::uint64_t(get_int(j, "seed", long(p.seed)));
  }
  echo["pruning"] = {{"mode", p.mode == PruningPolicy::Mode::exhaustive ? "exhaustive" : "stochastic_beam"},
                     {"node_budget", p.node_budget},
                     {"beam_width", p.beam_width},
                     {"seed", p.seed}};
  return p;
}

struct RunContext {
  ResolvedMultimap mm;
  std::uint64_t seed = 1;
  int workers = 0;
  Metric metric = Metric::euclidean;
  std::string out_dir;
  json resolved;
  std::set<std::string> warnings;
  std::map<std::string, double> timings_ms;
  std::vector<std::string> outputs;

  std::string path(const std::string& file) const { return out_dir + "/" + file; }
};

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Complex parse_base_point(const json& block, const RunContext& ctx, json& echo) {
  json spec = block.contains("base_point") ? block.at("base_point") : json("auto");
  Complex z;
  if (spec.is_string()) {
    if (spec.get<std::string>() != "auto")
      schema_error("base_point: expected \"auto\" or [re, im]");
    if (ctx.mm.entry) {
      z = ctx.mm.entry->default_base;
    } else {
      std::vector<Complex> candidates;
      for (const auto& g : ctx.mm.map.generators()) {
        try {
          candidates.push_back(repelling_fixed_point(g));
        } catch (const Error&) {
        }
      }
      if (candidates.empty())
        raise(ErrorCode::no_repelling_fixed_point, "base_point auto: no generator has a repelling fixed point");
      z = base_point_select(ctx.mm.map, candidates).point;
    }
  } else {
    z = parse_complex(spec, "base_point");
  }
  echo["base_point"] = complex_json(z);
  return z;
}

JuliaParams parse_cloud(const json& parent, const char* key, const RunContext& ctx, long default_length,
                        json& echo) {
  JuliaParams p;
  p.length = default_length;
  p.seed = ctx.seed;
  p.workers = ctx.workers;
  if (parent.contains(key)) {
    const json& j = parent.at(key);
    require_keys(j, key, {"method", "depth", "length", "burn_in", "segments"});
    std::string method = get_str(j, "method", "chaos_game");
    if (method == "chaos_game")
      p.method = PointCloud::Method::chaos_game;
    else if (method == "full_tree")
      p.method = PointCloud::Method::full_tree;
    else
      schema_error(std::string(key) + ".method: expected \"chaos_game\" or \"full_tree\"");
    p.depth = int(get_int(j, "depth", p.depth));
    p.length = get_int(j, "length", p.length);
    p.burn_in = int(get_int(j, "burn_in", p.burn_in));
    p.segments = int(get_int(j, "segments", p.segments));
  }
  echo[key] = {{"method", p.method == PointCloud::Method::chaos_game ? "chaos_game" : "full_tree"},
               {"depth", p.depth},
               {"length", p.length},
               {"burn_in", p.burn_in},
               {"segments", p.segments}};
  return p;
}

json pressure_json(const PressureEstimate& pe) {
  json v = json::array(), r = json::array();
  for (auto [n, val] : pe.values_by_n) v.push_back(json::array({n, val}));
  for (auto [n, val] : pe.ratio_estimates) r.push_back(json::array({n, val}));
  return json{{"t", pe.t},
              {"values_by_n", v},
              {"ratio_estimates", r},
              {"headline", pe.headline()},
              {"base_point", complex_json(pe.base_point)},
              {"metric", metric_name(pe.metric)},
              {"pruning_used", pe.pruning_used},
              {"infinite_sum", pe.infinite_sum_flag}};
}

json region_json(const Region& r) {
  switch (r.kind()) {
    case RegionKind::disk:
      return json{{"kind", "disk"}, {"center", complex_json(r.center())}, {"radius", r.outer_radius()}};
    case RegionKind::annulus:
      return json{{"kind", "annulus"},
                  {"center", complex_json(r.center())},
                  {"inner", r.inner_radius()},
                  {"outer", r.outer_radius()}};
    case RegionKind::rectangle:
      return json{{"kind", "rectangle"},
                  {"x0", r.box().x0},
                  {"y0", r.box().y0},
                  {"x1", r.box().x1},
                  {"y1", r.box().y1}};
    case RegionKind::hull_difference:
      return json{{"kind", "hull_difference"},
                  {"outer", generator_json(r.hull_outer())},
                  {"inner", generator_json(r.hull_inner())},
                  {"max_iter", r.max_iter()}};
  }
  schema_error("unreachable region kind");
}

Region parse_region(const json& block, const RunContext& ctx, json& echo) {
  json spec = block.contains("region") ? block.at("region") : json("default");
  if (spec.is_string()) {
    if (spec.get<std::string>() != "default")
      schema_error("check.region: expected \"default\" or a region object");
    if (!ctx.mm.entry || !ctx.mm.entry->default_region)
      schema_error("check.region: no default region for this multimap; specify one");
    echo["region"] = region_json(*ctx.mm.entry->default_region);
    return *ctx.mm.entry->default_region;
  }
  if (!spec.is_object() || !spec.contains("kind")) schema_error("check.region: missing 'kind'");
  std::string kind = get_str(spec, "kind", "");
  Region r = [&] {
    if (kind == "disk") {
      require_keys(spec, "region", {"kind", "center", "radius"});
      return Region::disk(parse_complex(spec.at("center"), "region.center"),
                          req_num(spec, "radius", "region"));
    }
    if (kind == "annulus") {
      require_keys(spec, "region", {"kind", "center", "inner", "outer"});
      return Region::annulus(parse_complex(spec.at("center"), "region.center"),
                             req_num(spec, "inner", "region"), req_num(spec, "outer", "region"));
    }
    if (kind == "rectangle") {
      require_keys(spec, "region", {"kind", "x0", "y0", "x1", "y1"});
      return Region::rectangle(req_num(spec, "x0", "region"), req_num(spec, "y0", "region"),
                               req_num(spec, "x1", "region"), req_num(spec, "y1", "region"));
    }
    if (kind == "hull_difference") {
      require_keys(spec, "region", {"kind", "outer", "inner", "max_iter"});
      if (!spec.contains("outer") || !spec.contains("inner"))
        schema_error("region: hull_difference needs 'outer' and 'inner'");
      return Region::hull_difference(parse_generator(spec.at("outer"), "region.outer"),
                                     parse_generator(spec.at("inner"), "region.inner"),
                                     int(get_int(spec, "max_iter", 500)));
    }
    schema_error("region.kind: expected disk | annulus | rectangle | hull_difference");
  }();
  echo["region"] = region_json(r);
  return r;
}

// ---------------------------------------------------------------- render ---

int cmd_render(RunContext& ctx, const json& block) {
  require_keys(block, "render",
               {"method", "depth", "length", "burn_in", "segments", "viewport", "pruning", "out_png",
                "out_json"});
  json& echo = ctx.resolved["render"];

  JuliaParams jp;
  jp.length = 100000;
  jp.seed = ctx.seed;
  jp.workers = ctx.workers;
  std::string method = get_str(block, "method", "chaos_game");
  if (method == "chaos_game")
    jp.method = PointCloud::Method::chaos_game;
  else if (method == "full_tree")
    jp.method = PointCloud::Method::full_tree;
  else
    schema_error("render.method: expected \"chaos_game\" or \"full_tree\"");
  jp.depth = int(get_int(block, "depth", jp.depth));
  jp.length = get_int(block, "length", jp.length);
  jp.burn_in = int(get_int(block, "burn_in", jp.burn_in));
  jp.segments = int(get_int(block, "segments", jp.segments));
  echo["method"] = method;
  echo["depth"] = jp.depth;
  echo["length"] = jp.length;
  echo["burn_in"] = jp.burn_in;
  echo["segments"] = jp.segments;
  jp.policy = parse_policy(block, ctx.seed, echo);

  Viewport vp = ctx.mm.entry ? ctx.mm.entry->default_viewport : Viewport{{0.0, 0.0}, 2.2, 2.2, 800, 800};
  if (block.contains("viewport")) {
    const json& v = block.at("viewport");
    require_keys(v, "viewport", {"center", "half_width", "half_height", "px", "py"});
    if (v.contains("center")) vp.center = parse_complex(v.at("center"), "viewport.center");
    vp.half_width = get_num(v, "half_width", vp.half_width);
    vp.half_height = get_num(v, "half_height", vp.half_height);
    vp.px = int(get_int(v, "px", vp.px));
    vp.py = int(get_int(v, "py", vp.py));
  }
  validate_viewport(vp);  // schema failures leave no output behind
  echo["viewport"] = {{"center", complex_json(vp.center)},
                      {"half_width", vp.half_width},
                      {"half_height", vp.half_height},
                      {"px", vp.px},
                      {"py", vp.py}};
  std::string out_png = get_str(block, "out_png", "render.png");
  std::string out_json = get_str(block, "out_json", "render.json");
  echo["out_png"] = out_png;
  echo["out_json"] = out_json;

  Stopwatch sw;
  PointCloud cloud = approximate_julia(ctx.mm.map, jp);
  ctx.timings_ms["cloud"] = sw.ms();

  Stopwatch sw2;
  Image img = rasterize(cloud, vp, ctx.workers);
  write_png_gray8(ctx.path(out_png), img);
  ctx.outputs.push_back(out_png);
  ctx.timings_ms["raster"] = sw2.ms();

  std::size_t nonzero = 0;
  for (auto p : img.pixels)
    if (p) ++nonzero;

  json side{{"method", echo["method"]},
            {"point_count", cloud.points.size()},
            {"points_outside", img.points_outside},
            {"nonzero_pixels", nonzero},
            {"source_hash", hex64(cloud.source_hash)},
            {"viewport", echo["viewport"]}};
  write_text_file(ctx.path(out_json), side.dump(2) + "\n");
  ctx.outputs.push_back(out_json);
  return 0;
}

// ------------------------------------------------------------- dimension ---

std::vector<double> parse_t_grid(const json& block, json& echo) {
  double lo = 0.0, hi = 2.0, step = 0.025;
  if (block.contains("t_grid")) {
    const json& g = block.at("t_grid");
    if (g.is_array()) {
      std::vector<double> ts;
      for (const auto& e : g) {
        if (!e.is_number()) schema_error("t_grid: entries must be numbers");
        ts.push_back(e.get<double>());
      }
      if (ts.empty()) schema_error("t_grid: empty");
      echo["t_grid"] = g;
      return ts;
    }
    require_keys(g, "t_grid", {"lo", "hi", "step"});
    lo = get_num(g, "lo", lo);
    hi = get_num(g, "hi", hi);
    step = get_num(g, "step", step);
    if (!(step > 0.0) || !(hi >= lo)) schema_error("t_grid: need lo <= hi and step > 0");
  }
  echo["t_grid"] = {{"lo", lo}, {"hi", hi}, {"step", step}};
  std::vector<double> ts;
  for (double t = lo; t <= hi + 1e-12; t += step) ts.push_back(t);
  return ts;
}

int cmd_dimension(RunContext& ctx, const json& block) {
  require_keys(block, "dimension",
               {"base_point", "n_range", "tol_t", "t_grid", "box", "cloud", "pruning", "out_json"});
  json& echo = ctx.resolved["dimension"];

  if (!block.contains("n_range")) schema_error("dimension: missing required key 'n_range'");
  const json& nr = block.at("n_range");
  if (!nr.is_array() || nr.size() != 2 || !nr[0].is_number_integer() || !nr[1].is_number_integer())
    schema_error("dimension.n_range: expected [n_lo, n_hi]");
  int n_lo = nr[0].get<int>(), n_hi = nr[1].get<int>();
  if (n_lo < 1 || n_hi <= n_lo || n_hi > 14)
    schema_error("dimension.n_range: need 1 <= n_lo < n_hi <= 14");
  echo["n_range"] = json::array({n_lo, n_hi});

  double tol_t = get_num(block, "tol_t", 5e-4);
  if (!(tol_t > 0.0)) schema_error("dimension.tol_t: must be > 0");
  echo["tol_t"] = tol_t;

  Complex z = parse_base_point(block, ctx, echo);
  PruningPolicy policy = parse_policy(block, ctx.seed, echo);
  std::vector<double> t_grid = parse_t_grid(block, echo);
  JuliaParams cloud_params = parse_cloud(block, "cloud", ctx, 400000, echo);
  std::string out_json = get_str(block, "out_json", "dimension.json");
  echo["out_json"] = out_json;

  // Bowen root from the successive-ratio pressure estimate
  Stopwatch sw;
  BowenRootResult bowen = bowen_root(ctx.mm.map, z, n_hi, tol_t, policy, ctx.metric, ctx.workers);
  ctx.timings_ms["bowen"] = sw.ms();
  if (bowen.at_root.infinite_sum_flag) ctx.warnings.insert("InfiniteSum");
  if (bowen.status == BowenRootResult::Status::no_bracket) ctx.warnings.insert("NoBracket");
  if (bowen.at_root.pruning_used) ctx.warnings.insert("PruningUsed");

  // Box-counting on a fresh cloud
  Stopwatch sw2;
  PointCloud cloud = approximate_julia(ctx.mm.map, cloud_params);
  double bx0 = cloud.points[0].real(), bx1 = bx0, by0 = cloud.points[0].imag(), by1 = by0;
  for (Complex p : cloud.points) {
    bx0 = std::min(bx0, p.real());
    bx1 = std::max(bx1, p.real());
    by0 = std::min(by0, p.imag());
    by1 = std::max(by1, p.imag());
  }
  double diag = std::hypot(bx1 - bx0, by1 - by0);
  double eps_hi = diag > 0.0 ? diag / 8.0 : 0.1;
  double decades = 1.8;
  int steps = 12;
  if (block.contains("box")) {
    const json& bj = block.at("box");
    require_keys(bj, "box", {"eps_hi", "decades", "steps"});
    eps_hi = get_num(bj, "eps_hi", eps_hi);
    decades = get_num(bj, "decades", decades);
    steps = int(get_int(bj, "steps", steps));
  }
  echo["box"] = {{"eps_hi", eps_hi}, {"decades", decades}, {"steps", steps}};
  DimensionFit fit = box_count_dimension(cloud, epsilon_ladder(eps_hi, decades, steps), ctx.seed);
  ctx.timings_ms["boxcount"] = sw2.ms();
  if (fit.degenerate) ctx.warnings.insert("DegenerateFit");
  if (fit.few_points_warning) ctx.warnings.insert("FewPoints");

  // Poincare critical exponent on the t grid
  Stopwatch sw3;
  json poincare{{"t_grid", echo["t_grid"]}, {"critical_exponent", nullptr}, {"inconclusive", false}};
  double s0 = std::numeric_limits<double>::quiet_NaN();
  try {
    s0 = critical_exponent_estimate(ctx.mm.map, z, t_grid, n_hi, policy, ctx.metric, 0.01, nullptr,
                                    ctx.workers);
    poincare["critical_exponent"] = s0;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::inconclusive) throw;
    ctx.warnings.insert("inconclusive: critical exponent grid never decays");
    poincare["inconclusive"] = true;
  }
  ctx.timings_ms["poincare"] = sw3.ms();

  json out{{"bowen",
            {{"status", bowen.status == BowenRootResult::Status::ok ? "ok" : "no_bracket"},
             {"h", bowen.h},
             {"bracket", json::array({bowen.bracket.first, bowen.bracket.second})},
             {"n_used", bowen.n_used},
             {"residual", bowen.residual},
             {"pressure_at_root", pressure_json(bowen.at_root)}}},
           {"boxcount",
            {{"slope", fit.slope},
             {"r2", fit.r2},
             {"ci", fit.ci},
             {"epsilons", fit.epsilons},
             {"counts", fit.counts},
             {"degenerate", fit.degenerate},
             {"few_points", fit.few_points_warning},
             {"cloud_points", cloud.points.size()}}},
           {"poincare", poincare}};
  if (bowen.status == BowenRootResult::Status::ok) {
    json agree{{"bowen_minus_box", bowen.h - fit.slope}};
    if (!std::isnan(s0)) agree["bowen_minus_poincare"] = bowen.h - s0;
    out["agreement"] = agree;
  }
  write_text_file(ctx.path(out_json), out.dump(2) + "\n");
  ctx.outputs.push_back(out_json);
  return bowen.status == BowenRootResult::Status::ok ? 0 : 3;
}

// --------------------------------------------------------------- measure ---

int cmd_measure(RunContext& ctx, const json& block) {
  require_keys(block, "measure",
               {"base_point", "t", "s", "s_offset", "truncation", "geometric", "pruning", "out_csv",
                "out_json"});
  json& echo = ctx.resolved["measure"];

  Complex xi = parse_base_point(block, ctx, echo);
  PruningPolicy policy = parse_policy(block, ctx.seed, echo);
  int N = int(get_int(block, "truncation", 8));
  if (N < 1 || N > 16) schema_error("measure.truncation: must be in [1, 16]");
  echo["truncation"] = N;
  double s_offset = get_num(block, "s_offset", 0.05);
  std::string out_csv = get_str(block, "out_csv", "atoms.csv");
  std::string out_json = get_str(block, "out_json", "measure.json");
  echo["out_csv"] = out_csv;
  echo["out_json"] = out_json;

  Stopwatch sw;
  PreimageTree tree = build_preimage_tree(ctx.mm.map, xi, N + 1, policy, ctx.metric, ctx.workers);
  ctx.timings_ms["tree"] = sw.ms();
  if (tree.pruned()) ctx.warnings.insert("PruningUsed");

  // exponent t: explicit number or the Bowen root of a preliminary pass
  double t_used;
  json t_spec = block.contains("t") ? block.at("t") : json("bowen");
  if (t_spec.is_string()) {
    if (t_spec.get<std::string>() != "bowen") schema_error("measure.t: expected \"bowen\" or a number");
    Stopwatch swb;
    BowenRootResult bowen = bowen_root(ctx.mm.map, xi, N, 5e-4, policy, ctx.metric, ctx.workers);
    ctx.timings_ms["bowen"] = swb.ms();
    if (bowen.status != BowenRootResult::Status::ok) {
      ctx.warnings.insert("NoBracket");
      raise(ErrorCode::non_convergence, "measure: preliminary pressure estimate has no sign change");
    }
    t_used = bowen.h;
  } else if (t_spec.is_number()) {
    t_used = t_spec.get<double>();
  } else {
    schema_error("measure.t: expected \"bowen\" or a number");
  }
  echo["t"] = t_used;

  // discount s: explicit, or estimated pressure at t plus the offset
  double s_used;
  if (block.contains("s")) {
    s_used = req_num(block, "s", "measure");
  } else {
    PressureEstimate pe =
        pressure_estimate(ctx.mm.map, xi, t_used, {N}, policy, ctx.metric, &tree, ctx.workers);
    if (pe.infinite_sum_flag) ctx.warnings.insert("InfiniteSum");
    s_used = pe.headline() + s_offset;
  }
  echo["s"] = s_used;
  echo["s_offset"] = s_offset;

  Stopwatch sw2;
  AtomicMeasure nu =
      build_conformal_atoms(ctx.mm.map, xi, t_used, s_used, N, policy, ctx.metric, &tree, ctx.workers);
  AtomicMeasure planar = project_measure(nu);
  ctx.timings_ms["atoms"] = sw2.ms();

  // geometric ratios at the measure exponent and configured offsets
  long centers_want = 50;
  double lo_frac = 1e-3, hi_frac = 1e-1;
  int radius_count = 12;
  std::vector<double> offsets{0.0, 0.2};
  if (block.contains("geometric")) {
    const json& g = block.at("geometric");
    require_keys(g, "geometric",
                 {"centers", "radius_lo_frac", "radius_hi_frac", "radius_count", "exponent_offsets"});
    centers_want = get_int(g, "centers", centers_want);
    lo_frac = get_num(g, "radius_lo_frac", lo_frac);
    hi_frac = get_num(g, "radius_hi_frac", hi_frac);
    radius_count = int(get_int(g, "radius_count", radius_count));
    if (g.contains("exponent_offsets")) {
      offsets.clear();
      for (const auto& e : g.at("exponent_offsets")) {
        if (!e.is_number()) schema_error("geometric.exponent_offsets: numbers expected");
        offsets.push_back(e.get<double>());
      }
    }
  }
  if (centers_want < 1 || radius_count < 1 || !(lo_frac > 0.0) || !(hi_frac >= lo_frac))
    schema_error("measure.geometric: need centers, radius_count >= 1 and 0 < radius_lo_frac <= radius_hi_frac");
  echo["geometric"] = {{"centers", centers_want},
                       {"radius_lo_frac", lo_frac},
                       {"radius_hi_frac", hi_frac},
                       {"radius_count", radius_count},
                       {"exponent_offsets", offsets}};

  double gx0 = planar.atoms[0].point.real(), gx1 = gx0;
  double gy0 = planar.atoms[0].point.imag(), gy1 = gy0;
  for (const auto& a : planar.atoms) {
    gx0 = std::min(gx0, a.point.real());
    gx1 = std::max(gx1, a.point.real());
    gy0 = std::min(gy0, a.point.imag());
    gy1 = std::max(gy1, a.point.imag());
  }
  double diam = std::hypot(gx1 - gx0, gy1 - gy0);
  if (!(diam > 0.0))
    raise(ErrorCode::degenerate_fit, "measure: atom support has zero diameter");

  std::size_t nc = std::min<std::size_t>(std::size_t(centers_want), planar.atoms.size());
  std::vector<Complex> centers;
  for (std::size_t k = 0; k < nc; ++k) {
    std::size_t idx = nc == 1 ? 0 : k * (planar.atoms.size() - 1) / (nc - 1);
    centers.push_back(planar.atoms[idx].point);
  }
  std::vector<double> radii;
  for (int k = 0; k < radius_count; ++k) {
    double frac = radius_count == 1
                      ? lo_frac
                      : lo_frac * std::pow(hi_frac / lo_frac, double(k) / double(radius_count - 1));
    radii.push_back(frac * diam);
  }

  Stopwatch sw3;
  json geo = json::array();
  for (double off : offsets) {
    GeometricReport rep = geometric_ratio_report(planar, t_used + off, centers, radii);
    if (rep.empty_count > 0) ctx.warnings.insert("EmptyGeometricBalls");
    geo.push_back(json{{"exponent", rep.h_used},
                       {"spread", rep.spread},
                       {"min_ratio", rep.min_ratio},
                       {"max_ratio", rep.max_ratio},
                       {"empty_count", rep.empty_count},
                       {"sample_count", rep.samples.size()}});
  }
  ctx.timings_ms["geometric"] = sw3.ms();

  // conformality residual against its truncation tail bound
  Stopwatch sw4;
  double residual = conformality_residual(nu, ctx.mm.map, &tree);
  double tail = std::exp(-s_used * double(N + 1)) *
                transfer_sum(t_used, N + 1, tree, nullptr, ctx.workers) / nu.normalizer;
  ctx.timings_ms["residual"] = sw4.ms();

  CsvWriter csv({"level", "word", "re", "im", "mass"});
  for (const auto& a : nu.atoms) {
    csv.cell(int(a.depth));
    csv.cell(unpack_word(a.packed_word, a.depth).to_string());
    csv.cell(a.point.real());
    csv.cell(a.point.imag());
    csv.cell(a.mass);
    csv.end_row();
  }
  csv.save(ctx.path(out_csv));
  ctx.outputs.push_back(out_csv);

  json out{{"t_used", t_used},
           {"s_used", s_used},
           {"truncation", N},
           {"base_point", complex_json(xi)},
           {"total_mass", nu.total_mass},
           {"atom_count", nu.atoms.size()},
           {"projected_atom_count", planar.atoms.size()},
           {"level_mass", nu.level_mass},
           {"normalizer", nu.normalizer},
           {"residual", {{"tv", residual}, {"tail_bound", tail}}},
           {"geometric", geo}};
  write_text_file(ctx.path(out_json), out.dump(2) + "\n");
  ctx.outputs.push_back(out_json);
  return 0;
}

// ----------------------------------------------------------------- check ---

int cmd_check(RunContext& ctx, const json& block) {
  require_keys(block, "check", {"region", "grid", "mc", "semihyp", "out_json"});
  json& echo = ctx.resolved["check"];

  Region U = parse_region(block, ctx, echo);
  int grid = int(get_int(block, "grid", 1000));
  long mc = get_int(block, "mc", 100000);
  if (mc < 0) schema_error("check.mc: must be >= 0");
  echo["grid"] = grid;
  echo["mc"] = mc;
  std::string out_json = get_str(block, "out_json", "check.json");
  echo["out_json"] = out_json;

  int sh_depth = 6;
  double dist_tol = 1e-2;
  json sh_block = block.contains("semihyp") ? block.at("semihyp") : json::object();
  require_keys(sh_block, "check.semihyp", {"depth", "dist_tol", "cloud"});
  sh_depth = int(get_int(sh_block, "depth", sh_depth));
  dist_tol = get_num(sh_block, "dist_tol", dist_tol);
  json& sh_echo = echo["semihyp"];
  sh_echo["depth"] = sh_depth;
  sh_echo["dist_tol"] = dist_tol;
  JuliaParams cloud_params = parse_cloud(sh_block, "cloud", ctx, 100000, sh_echo);

  Stopwatch sw;
  OSCReport osc = check_osc(ctx.mm.map, U, grid, std::uint64_t(mc), ctx.seed, ctx.workers);
  ctx.timings_ms["osc"] = sw.ms();

  Stopwatch sw2;
  PointCloud cloud = approximate_julia(ctx.mm.map, cloud_params);
  SemiHypReport sh = check_semihyperbolicity(ctx.mm.map, cloud, sh_depth, dist_tol, ctx.workers);
  ctx.timings_ms["semihyp"] = sw2.ms();

  auto witnesses_json = [](const std::vector<WitnessPoint>& ws) {
    json a = json::array();
    for (const auto& w : ws)
      a.push_back(json{{"x", complex_json(w.x)}, {"i", w.i}, {"j", w.j}});
    return a;
  };
  json pairs = json::array();
  for (const auto& pr : sh.pairs) {
    json p{{"generator", pr.generator},
           {"c", is_finite(pr.c) ? complex_json(pr.c) : json("inf")},
           {"dist_to_cloud", std::isfinite(pr.dist_to_cloud) ? json(pr.dist_to_cloud) : json("inf")},
           {"verdict", semihyp_verdict_name(pr.verdict)}};
    if (pr.verdict != SemiHypVerdict::not_in_julia) {
      p["min_orbit_distance"] = pr.min_orbit_distance;
      p["nearest_orbit_point"] = complex_json(pr.nearest_orbit_point);
      p["orbit_points"] = pr.orbit_points;
    }
    pairs.push_back(p);
    if (pr.verdict == SemiHypVerdict::inconclusive)
      ctx.warnings.insert("inconclusive: semi-hyperbolicity pair near the margin");
  }
  if (sh.overall == SemiHypVerdict::violated) ctx.warnings.insert("SemiHypViolated");

  bool documented = ctx.mm.entry && ctx.mm.entry->documented_osc_pass;
  bool failed = documented && !osc.pass();

  json out{{"osc",
            {{"osc1_violations", osc.osc1_violations},
             {"osc2_violations", osc.osc2_violations},
             {"osc1_witnesses", witnesses_json(osc.osc1_witnesses)},
             {"osc2_witnesses", witnesses_json(osc.osc2_witnesses)},
             {"osc3_alpha", osc.osc3_alpha},
             {"grid_size", osc.grid_size},
             {"mc_samples", osc.mc_samples},
             {"boundary_centers", osc.boundary_centers},
             {"pass", osc.pass()}}},
           {"semihyp",
            {{"overall", semihyp_verdict_name(sh.overall)},
             {"depth", sh.depth},
             {"dist_tol", sh.dist_tol},
             {"cloud_points", cloud.points.size()},
             {"pairs", pairs}}},
           {"documented_pass", documented},
           {"check_failed", failed}};
  write_text_file(ctx.path(out_json), out.dump(2) + "\n");
  ctx.outputs.push_back(out_json);
  return failed ? 4 : 0;
}

// ------------------------------------------------------------- dispatch ----

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::schema:
    case ErrorCode::unknown_name:
    case ErrorCode::invalid_argument:
    case ErrorCode::forbidden_pair:
    case ErrorCode::nonpositive_radius:
    case ErrorCode::empty_word:
      return 2;
    default:
      return 3;
  }
}

void write_run_report(const RunContext& ctx, const std::string& command, int exit_code,
                      const json* error) {
  json rep{{"command", command},
           {"config", ctx.resolved},
           {"versions", {{"library", kLibraryVersion}, {"report_format", kReportFormat}}},
           {"warnings", json::array()},
           {"timings_ms", json::object()},
           {"outputs", ctx.outputs},
           {"exit_code", exit_code}};
  for (const auto& w : ctx.warnings) rep["warnings"].push_back(w);
  for (const auto& [k, v] : ctx.timings_ms) rep["timings_ms"][k] = v;
  if (error) rep["error"] = *error;
  write_text_file(ctx.path("run_report.json"), rep.dump(2) + "\n");
}

}  // namespace

int run_command(const std::string& command, const CliOptions& opts) {
  RunContext ctx{ResolvedMultimap{MultiMap({RationalMap(Polynomial({0.0, 0.0, 1.0}), Polynomial({1.0})),
                                            RationalMap(Polynomial({0.0, 0.0, 1.0}), Polynomial({1.0}))}),
                                  nullptr, json()},
                 1, 0, Metric::euclidean, opts.out_dir, json::object(), {}, {}, {}};
  bool report_ready = false;
  try {
    std::error_code fs_ec;
    std::filesystem::create_directories(opts.out_dir, fs_ec);

    std::ifstream in(opts.config_path);
    if (!in) schema_error("cannot read config file: " + opts.config_path);
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      schema_error(std::string("config is not valid JSON: ") + e.what());
    }

    require_keys(cfg, "config",
                 {"multimap", "seed", "workers", "metric", "render", "dimension", "measure", "check"});
    if (!cfg.contains("multimap")) schema_error("config: missing 'multimap'");
    ctx.mm = parse_multimap(cfg.at("multimap"));
    ctx.seed = opts.seed ? *opts.seed : std::uint64_t(get_int(cfg, "seed", 1));
    ctx.workers = resolve_workers(opts.workers ? *opts.workers : int(get_int(cfg, "workers", 0)));
    ctx.metric = parse_metric(get_str(cfg, "metric", "euclidean"));

    ctx.resolved = json{{"multimap", ctx.mm.echo},
                        {"seed", ctx.seed},
                        {"workers", opts.workers ? *opts.workers : int(get_int(cfg, "workers", 0))},
                        {"metric", metric_name(ctx.metric)}};
    report_ready = true;

    json block = cfg.contains(command) ? cfg.at(command) : json::object();
    int code;
    if (command == "render")
      code = cmd_render(ctx, block);
    else if (command == "dimension")
      code = cmd_dimension(ctx, block);
    else if (command == "measure")
      code = cmd_measure(ctx, block);
    else if (command == "check")
      code = cmd_check(ctx, block);
    else
      schema_error("unknown command: " + command);

    write_run_report(ctx, command, code, nullptr);
    return code;
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", error_code_name(e.code()), e.what());
    int code = exit_code_for(e.code());
    if (report_ready) {
      try {
        json err{{"code", error_code_name(e.code())}, {"message", e.what()}};
        write_run_report(ctx, command, code, &err);
      } catch (...) {
      }
    }
    return code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

int run_family_c0(int d1, int d, double r) {
  try {
    std::printf("%.17g\n", family_c0(d1, d, r));
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  }
}

int run_list_examples() {
  for (const auto& e : builtin_examples())
    std::printf("%-14s %s\n", e.name.c_str(), e.summary.c_str());
  return 0;
}

}  // namespace rsg
