#pragma once

#include <random>

#include "heavenly/jet.hpp"

namespace hvtest {

using namespace heavenly;

inline IndependentVar X(int i = 1) { return IndependentVar::x(i); }
inline IndependentVar Y() { return IndependentVar::y(); }
inline IndependentVar T() { return IndependentVar::t(); }

inline GaussianRational random_coeff(std::mt19937_64& rng, bool gaussian = true) {
  std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
  GaussianRational re = GaussianRational::ratio(num(rng), den(rng));
  if (!gaussian || rng() % 3)
    return re;
  return re + GaussianRational::ratio(num(rng), den(rng)) * GaussianRational::i();
}

inline Symbol random_jet(std::mt19937_64& rng, const JetContext& ctx, int max_order) {
  std::uniform_int_distribution<int> dep(0, static_cast<int>(ctx.dependents.size()) - 1);
  auto dirs = ctx.jet_directions();
  std::uniform_int_distribution<std::size_t> dir(0, dirs.size() - 1);
  std::uniform_int_distribution<int> ord(0, max_order);
  MultiIndex mi{};
  for (int k = ord(rng); k > 0; --k)
    ++mi[dirs[dir(rng)].slot()];
  return Symbol::jet(dep(rng), mi);
}

inline DiffPoly random_poly(std::mt19937_64& rng, const ContextPtr& ctx, int terms = 4, int max_deg = 2, int max_order = 2) {
  DiffPoly p(ctx);
  std::uniform_int_distribution<int> nt(0, terms), deg(0, max_deg);
  for (int k = nt(rng); k > 0; --k) {
    DiffPoly m(ctx, random_coeff(rng));
    for (int d = deg(rng); d > 0; --d)
      m *= DiffPoly::symbol(ctx, random_jet(rng, *ctx, max_order));
    p += m;
  }
  return p;
}

} // namespace hvtest
