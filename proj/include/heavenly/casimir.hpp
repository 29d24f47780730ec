#ifndef HEAVENLY_CASIMIR_HPP
#define HEAVENLY_CASIMIR_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heavenly/vector_field.hpp"

namespace heavenly {

// component i: l_i div(a) + sum_j a_j d_j l_i + sum_j l_j d_i a_j
OneForm coadjoint_action(const OneForm& l, const VectorField& a);

// Series counterpart: every component expanded at one point. Missing
// components are exact zeros.
using SeriesField = std::map<Direction, LaurentSeries>;
SeriesField coadjoint_action(const SeriesField& l, const SeriesField& a, const ContextPtr& ctx,
                              const ExpansionPoint& point);

struct ExactnessWitness {
  Direction i;
  Direction j;
  // d_i l_j - d_j l_i
  LambdaRational value;
};

struct ExactnessResult {
  bool closed = true;
  std::vector<ExactnessWitness> witness;
};

// checks d_i l_j - d_j l_i for i < j; `exclude_lambda_row` drops the pairs
// involving the lambda direction (seeds written with dλ = 0)
ExactnessResult exactness_check(const OneForm& l, bool exclude_lambda_row = false);

// torus differential of f: sum_i d_i f dx_i, plus d_lambda f dλ unless dλ = 0
OneForm differential(const LambdaRational& f, bool dlambda_zero);

} // namespace heavenly

#endif
