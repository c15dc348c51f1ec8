#pragma once

// String-addressable catalog: "heat.li_yau", "log.hamilton_neg",
// "yamabe.case1_2.k_scaled", ... resolved to a candidate, its equation and
// the system/branches it is expected to satisfy.

#include <memory>
#include <string>
#include <vector>

#include "harnack/candidates.hpp"
#include "harnack/equations.hpp"
#include "harnack/ode_lab.hpp"
#include "harnack/system_check.hpp"

namespace harnack {

struct CatalogParams {
  double m = 3.0;
  double K = 0.5;
  int n = 1;
  double a = 1.0;  // log: reaction slope; yamabe: linear coefficient
  double b = 1.0;
  double p = 2.0;
  double M = 1.0;
  double alpha = 2.0;
  double delta = 0.5;
  double k = 0.0;
  double eps = 1e-4;    // sharp negative family
  double t_max = 60.0;  // horizon for the Riccati solve behind l(t)
  std::vector<PowerTerm> terms{{1.0, 0.5}};  // power.li_yau
};

struct CatalogEntry {
  std::string id;
  CandidateFunctions cand;
  Equation eq = Equation::linear(0.0);
  CurvatureParams params;
  SystemKind system = SystemKind::A3;
  // branches the entry is annotated with; every one is expected to pass
  std::vector<Branch> branches;
  std::shared_ptr<const LFunction> l;  // set for log.sharp_neg_family

  // Default check grid: log-spaced from 1e-3 to min(10, window end), where
  // the window end of an open domain is pulled in to 90% of its length.
  std::vector<double> default_t_grid(int points = 200) const;
};

std::vector<std::string> catalog_ids();
bool catalog_has(const std::string& id);

// Throws std::invalid_argument for unknown ids, ConstructionError for
// parameters outside the family's range.
CatalogEntry resolve_catalog(const std::string& id, const CatalogParams& p);

}  // namespace harnack
