#ifndef HEAVENLY_CATALOG_BUILD_HPP
#define HEAVENLY_CATALOG_BUILD_HPP

#include <map>
#include <string>
#include <vector>

#include "heavenly/spec.hpp"

namespace heavenly::build {

inline IndependentVar X(int i = 1) { return IndependentVar::x(i); }
inline IndependentVar Y() { return IndependentVar::y(); }
inline IndependentVar T() { return IndependentVar::t(); }
inline Direction DX(int i = 1) { return Direction::x(i); }
inline Direction DL() { return Direction::lambda(); }

struct JetFn {
  ContextPtr c;
  std::string dep;
  DiffPoly operator()(std::initializer_list<IndependentVar> w = {}) const { return DiffPoly::jet(c, dep, w); }
};

inline DiffPoly K(const ContextPtr& c, const GaussianRational& v) { return DiffPoly(c, v); }

inline LambdaRational R(const DiffPoly& p) { return LambdaRational(p); }

// lambda^k for k >= 0
inline LambdaRational lam(const ContextPtr& c, int k = 1) { return LambdaRational(LambdaPoly::monomial(DiffPoly(c, 1), k)); }

// c0 + c1 λ + c2 λ^2 + ...
inline LambdaRational poly(const ContextPtr& c, std::vector<DiffPoly> coeffs) {
  return LambdaRational(LambdaPoly(c, std::move(coeffs)));
}

inline LambdaRational over(const DiffPoly& c, const GaussianRational& p, int m = 1) { return LambdaRational::pole(c, p, m); }

// (power, coefficient) pairs of one component
using Terms = std::vector<std::pair<int, DiffPoly>>;

struct Grad {
  std::map<Direction, Terms> rows;
  void list(Direction d) { rows[d]; }
  void add(Direction d, int power, const DiffPoly& c) { rows[d].push_back({power, c}); }
};

// tail_power: exponent of the printed O(.) tail in λ (at infinity) or λ - p
GradientExpansion gradient(const ContextPtr& c, std::string label, ExpansionPoint pt, int tail_power, const Grad& g,
                           int threshold, int seed = 0);
// shorter tail actually checked; same exponent convention as tail_power
GradientExpansion validated(GradientExpansion g, int tail_power);

void rule(PdeSystem& sys, const std::string& dep, std::initializer_list<IndependentVar> w, const DiffPoly& rhs,
          const std::string& label);

// pde_text from the generators, validation left to the caller
void finalize(EquationSpec& spec);

OneForm form(const ContextPtr& c, std::initializer_list<std::pair<const Direction, LambdaRational>> comps);
VectorField field(const ContextPtr& c, std::initializer_list<std::pair<const Direction, LambdaRational>> comps);

// potentials of the seeds; the same for every k
inline const char* const kPleb1SeedNote = "differential of u_x1 - u_x2 + λ(x1 + x2) + (u_y + u_t)/λ with dλ = 0";
inline const char* const kModPlebSeedNote = "differential of u_y/λ + u_x1 - u_x2 + λ x1 + λ x2 with dλ = 0";
inline const char* const kHusainSeedNote = "d(u_y + i u_t)/(λ - i) + d(u_y - i u_t)/(λ + i) with dλ = 0";
inline const char* const kMongeSeedNote = "du_y + du_t + (dx1 + dx2)/λ with dλ = 0";
std::string monge_nonlocal_note(int k);

// family constructors; k is the number of coordinate pairs
EquationSpec pleb1_family(int k);
EquationSpec mod_pleb_family(int k);
EquationSpec husain_family(int k);
EquationSpec monge_family(int k);

// the two alternative n = 4 Monge seeds and their expansions, appended after the main seed
void monge_alternative_seeds(EquationSpec& spec, const JetFn& u, const JetFn& ry, const JetFn& rt);

} // namespace heavenly::build

#endif
