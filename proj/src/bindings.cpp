#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rsgdim/catalog.hpp"
#include "rsgdim/conditions.hpp"
#include "rsgdim/conformal.hpp"
#include "rsgdim/errors.hpp"
#include "rsgdim/julia.hpp"
#include "rsgdim/pressure.hpp"

namespace py = pybind11;
using namespace rsg;

namespace {

RationalMap make_map(const std::vector<Complex>& num, const std::vector<Complex>& den) {
  return RationalMap(Polynomial(num), Polynomial(den));
}

MultiMap make_multimap(const std::vector<RationalMap>& gens, const std::vector<std::string>& labels) {
  return MultiMap(gens, labels);
}

JuliaParams cloud_params(const std::string& method, int depth, long length, int burn_in, int segments,
                         std::uint64_t seed, int workers) {
  JuliaParams p;
  if (method == "chaos_game")
    p.method = PointCloud::Method::chaos_game;
  else if (method == "full_tree")
    p.method = PointCloud::Method::full_tree;
  else
    raise(ErrorCode::invalid_argument, "method: expected 'chaos_game' or 'full_tree'");
  p.depth = depth;
  p.length = length;
  p.burn_in = burn_in;
  p.segments = segments;
  p.seed = seed;
  p.workers = workers;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Julia sets, pressure, Hausdorff dimension and conformal measures "
            "for finitely generated rational semigroups";

  py::register_exception<Error>(m, "Error");

  py::class_<RationalMap>(m, "RationalMap")
      .def(py::init(&make_map), py::arg("num"), py::arg("den") = std::vector<Complex>{1.0},
           "Rational map from numerator/denominator coefficients (ascending powers).")
      .def("__call__", [](const RationalMap& f, Complex z) { return f.eval(z); })
      .def_property_readonly("degree", &RationalMap::degree)
      .def_property_readonly("is_polynomial", &RationalMap::is_polynomial)
      .def("derivative",
           [](const RationalMap& f, Complex z, const std::string& metric) {
             DerivativeValue d = f.derivative(z, metric == "spherical" ? Metric::spherical
                                                                       : Metric::euclidean);
             return py::make_tuple(d.value, d.norm);
           },
           py::arg("z"), py::arg("metric") = "euclidean",
           "Returns (complex value, derivative norm in the chosen metric).")
      .def("preimages",
           [](const RationalMap& f, Complex w) {
             RootSet rs = f.preimages(w);
             std::vector<std::pair<Complex, int>> out;
             for (const auto& e : rs.roots) out.emplace_back(e.point, e.multiplicity);
             return out;
           },
           py::arg("w"), "Finite solutions x of f(x) = w as (point, multiplicity) pairs.");

  py::class_<MultiMap>(m, "MultiMap")
      .def(py::init(&make_multimap), py::arg("generators"),
           py::arg("labels") = std::vector<std::string>{})
      .def_property_readonly("u", &MultiMap::u)
      .def_property_readonly("branching_factor", &MultiMap::branching_factor)
      .def("generator", &MultiMap::gen, py::arg("j"), "1-based generator access.")
      .def("label", &MultiMap::label, py::arg("j"));

  m.def("example",
        [](const std::string& name) { return catalog_lookup(name).map; }, py::arg("name"),
        "Built-in example semigroup by name (see example_names()).");
  m.def("example_names", [] {
    std::vector<std::string> names;
    for (const auto& e : builtin_examples()) names.push_back(e.name);
    return names;
  });
  m.def("family_c0", &family_c0, py::arg("d1"), py::arg("d"), py::arg("r"),
        "Parameter bound c0(d1, d, r) for the two-generator polynomial family.");

  py::class_<PointCloud>(m, "PointCloud")
      .def_readonly("points", &PointCloud::points)
      .def_property_readonly("source_hash", [](const PointCloud& c) { return c.source_hash; });

  m.def("julia_points",
        [](const MultiMap& f, const std::string& method, int depth, long length, int burn_in,
           int segments, std::uint64_t seed, int workers) {
          return approximate_julia(f, cloud_params(method, depth, length, burn_in, segments, seed,
                                                   workers));
        },
        py::arg("multimap"), py::arg("method") = "chaos_game", py::arg("depth") = 8,
        py::arg("length") = 100000, py::arg("burn_in") = 64, py::arg("segments") = 8,
        py::arg("seed") = 1, py::arg("workers") = 1,
        "Backward-iteration approximation of the Julia set.");

  m.def("repelling_fixed_point", &repelling_fixed_point, py::arg("map"));

  m.def("transfer_sum",
        [](const MultiMap& f, Complex z, double t, int n, int workers) {
          PreimageTree tree = build_preimage_tree(f, z, n, {}, Metric::euclidean, workers);
          return transfer_sum(t, n, tree, nullptr, workers);
        },
        py::arg("multimap"), py::arg("z"), py::arg("t"), py::arg("n"), py::arg("workers") = 1,
        "Level-n transfer operator sum at the base point.");

  py::class_<PressureEstimate>(m, "PressureEstimate")
      .def_readonly("t", &PressureEstimate::t)
      .def_readonly("values_by_n", &PressureEstimate::values_by_n)
      .def_readonly("ratio_estimates", &PressureEstimate::ratio_estimates)
      .def_property_readonly("headline", &PressureEstimate::headline);

  m.def("pressure",
        [](const MultiMap& f, Complex z, double t, const std::vector<int>& n_range, int workers) {
          return pressure_estimate(f, z, t, n_range, {}, Metric::euclidean, nullptr, workers);
        },
        py::arg("multimap"), py::arg("z"), py::arg("t"), py::arg("n_range"), py::arg("workers") = 1);

  py::class_<BowenRootResult>(m, "BowenRoot")
      .def_property_readonly("ok",
                             [](const BowenRootResult& r) {
                               return r.status == BowenRootResult::Status::ok;
                             })
      .def_readonly("h", &BowenRootResult::h)
      .def_readonly("bracket", &BowenRootResult::bracket)
      .def_readonly("n_used", &BowenRootResult::n_used)
      .def_readonly("residual", &BowenRootResult::residual);

  m.def("bowen_dimension",
        [](const MultiMap& f, Complex z, int n, double tol_t, int workers) {
          return bowen_root(f, z, n, tol_t, {}, Metric::euclidean, workers);
        },
        py::arg("multimap"), py::arg("z"), py::arg("n"), py::arg("tol_t") = 5e-4,
        py::arg("workers") = 1, "Zero of the finite-n pressure estimate on [0, 2].");

  m.def("box_dimension",
        [](const PointCloud& cloud, double eps_hi, double decades, int steps, std::uint64_t seed) {
          DimensionFit fit = box_count_dimension(cloud, epsilon_ladder(eps_hi, decades, steps), seed);
          return py::make_tuple(fit.slope, fit.r2);
        },
        py::arg("cloud"), py::arg("eps_hi"), py::arg("decades") = 1.8, py::arg("steps") = 12,
        py::arg("seed") = 7, "Box-counting slope and r^2 for a point cloud.");

  py::class_<Atom>(m, "Atom")
      .def_readonly("point", &Atom::point)
      .def_readonly("mass", &Atom::mass)
      .def_property_readonly("level", [](const Atom& a) { return int(a.depth); })
      .def_property_readonly("word",
                             [](const Atom& a) { return unpack_word(a.packed_word, a.depth).to_string(); });

  py::class_<AtomicMeasure>(m, "AtomicMeasure")
      .def_readonly("atoms", &AtomicMeasure::atoms)
      .def_readonly("total_mass", &AtomicMeasure::total_mass)
      .def_readonly("t", &AtomicMeasure::t)
      .def_readonly("s", &AtomicMeasure::s)
      .def_readonly("level_mass", &AtomicMeasure::level_mass);

  m.def("conformal_atoms",
        [](const MultiMap& f, Complex xi, double t, double s, int truncation, int workers) {
          return build_conformal_atoms(f, xi, t, s, truncation, {}, Metric::euclidean, nullptr,
                                       workers);
        },
        py::arg("multimap"), py::arg("xi"), py::arg("t"), py::arg("s"), py::arg("truncation") = 8,
        py::arg("workers") = 1, "Truncated conformal-measure atom tower at exponent t, discount s.");
  m.def("project_measure", &project_measure, py::arg("measure"),
        "Merge atoms at coinciding points (forgets the symbolic coordinate).");
  m.def("conformality_residual",
        [](const AtomicMeasure& nu, const MultiMap& f) { return conformality_residual(nu, f); },
        py::arg("measure"), py::arg("multimap"),
        "Total-variation gap in the truncated conformality identity.");

  py::class_<Region>(m, "Region")
      .def_static("disk", &Region::disk, py::arg("center"), py::arg("radius"))
      .def_static("annulus", &Region::annulus, py::arg("center"), py::arg("inner"), py::arg("outer"))
      .def_static("rectangle", &Region::rectangle, py::arg("x0"), py::arg("y0"), py::arg("x1"),
                  py::arg("y1"))
      .def_static("hull_difference", &Region::hull_difference, py::arg("outer"), py::arg("inner"),
                  py::arg("max_iter") = 500)
      .def("contains", &Region::contains, py::arg("z"));

  py::class_<OSCReport>(m, "OSCReport")
      .def_readonly("osc1_violations", &OSCReport::osc1_violations)
      .def_readonly("osc2_violations", &OSCReport::osc2_violations)
      .def_readonly("osc3_alpha", &OSCReport::osc3_alpha)
      .def_readonly("mc_samples", &OSCReport::mc_samples)
      .def_readonly("boundary_centers", &OSCReport::boundary_centers)
      .def_property_readonly("ok", &OSCReport::pass);

  m.def("check_osc",
        [](const MultiMap& f, const Region& U, int grid, std::uint64_t mc, std::uint64_t seed,
           int workers) { return check_osc(f, U, grid, mc, seed, workers); },
        py::arg("multimap"), py::arg("region"), py::arg("grid") = 1000, py::arg("mc") = 100000,
        py::arg("seed") = 1, py::arg("workers") = 1,
        "Open set condition grid test plus boundary density sampling.");

  py::class_<SemiHypReport>(m, "SemiHypReport")
      .def_property_readonly("overall",
                             [](const SemiHypReport& r) {
                               return std::string(semihyp_verdict_name(r.overall));
                             })
      .def_property_readonly("pairs", [](const SemiHypReport& r) {
        py::list out;
        for (const auto& p : r.pairs) {
          py::dict d;
          d["generator"] = p.generator;
          d["c"] = p.c;
          d["dist_to_cloud"] = p.dist_to_cloud;
          d["min_orbit_distance"] = p.min_orbit_distance;
          d["verdict"] = semihyp_verdict_name(p.verdict);
          out.append(d);
        }
        return out;
      });

  m.def("check_semihyperbolicity",
        [](const MultiMap& f, const PointCloud& julia, int depth, double dist_tol, int workers) {
          return check_semihyperbolicity(f, julia, depth, dist_tol, workers);
        },
        py::arg("multimap"), py::arg("julia"), py::arg("depth") = 6, py::arg("dist_tol") = 1e-2,
        py::arg("workers") = 1, "Separation test for critical points near the Julia set.");
}
