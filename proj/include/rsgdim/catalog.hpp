#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsgdim/conditions.hpp"
#include "rsgdim/julia.hpp"
#include "rsgdim/words.hpp"

namespace rsg {

// Smallness bound c0(d1, d, r) for the perturbed pair (f1, lambda (z-b)^d + b):
// the construction below is valid for 0 < |lambda| < c0, provided
// closure(B(b, r)) lies inside the filled hull of f1 (the caller's charge).
// The exponent pair (d1, d) = (2, 2) is excluded.
double family_c0(int d1, int d, double r);

struct CatalogEntry {
  std::string name;
  std::string summary;
  MultiMap map;
  std::optional<Region> default_region;  // open set used by default in checks
  bool documented_osc_pass = false;      // violations on this entry are a hard failure
  Complex default_base{};                // default base point for preimage trees
  Viewport default_viewport{};
};

// Build (f1, lambda (z-b)^d + b) with the smallness check |lambda| < c0 and
// the annular open set int K(f2) \ K(f1) attached as the default region.
CatalogEntry make_prop92_entry(const Polynomial& f1, Complex b, int d, Complex lambda, double r,
                               const std::string& name = "prop92");

const std::vector<CatalogEntry>& builtin_examples();
const CatalogEntry& catalog_lookup(const std::string& name);

}  // namespace rsg
