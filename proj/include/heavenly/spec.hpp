#ifndef HEAVENLY_SPEC_HPP
#define HEAVENLY_SPEC_HPP

#include <optional>
#include <string>
#include <vector>

#include "heavenly/casimir.hpp"
#include "heavenly/pde_system.hpp"

namespace heavenly {

enum class Backend { Rewrite, Certificate };
enum class ProjectionKind { Plus, Minus, MinusWithConstant };

std::string backend_name(Backend b);
std::string projection_name(ProjectionKind p);

struct SeedSpec {
  std::string label;
  OneForm form;
  // written as a total differential with dλ = 0
  bool dlambda_zero = false;
  std::optional<bool> expect_closed;
  std::string note;
};

// Truncated Casimir gradient at one point. Orders are in the local parameter
// (λ - p, or 1/λ at infinity).
struct GradientExpansion {
  std::string label;
  int seed = 0;
  ExpansionPoint point;
  // listed components carry the tail; unlisted ones are exact zeros
  SeriesField comps;
  int printed_tail = 0;
  int validated_tail = 0;
  // first residual order the truncation can reach
  int threshold = 0;
  std::string note;
};

struct RecipeTerm {
  int casimir = 0;
  GaussianRational coeff{1};
  // multiply by (λ - p)^shift, or λ^shift at infinity
  int shift = 0;
};

struct GeneratorRecipe {
  std::vector<RecipeTerm> terms;
  ProjectionKind projection = ProjectionKind::Plus;
};

struct GeneratorSpec {
  IndependentVar tau;
  VectorField field;
  GeneratorRecipe recipe;
};

// alternative reading of a display, checked alongside the main entry
struct LaxVariant {
  std::string label;
  std::string note;
  std::optional<PdeSystem> pde;
  std::optional<VectorField> a_t;
  std::optional<VectorField> a_y;
};

struct FamilyInfo {
  std::string family;
  int k = 1;
};

struct EquationSpec {
  std::string id;
  std::string title;
  ContextPtr ctx;
  std::vector<SeedSpec> seeds;
  std::vector<GradientExpansion> casimirs;
  GeneratorSpec gen_t;
  GeneratorSpec gen_y;
  PdeSystem pde;
  std::string pde_text;
  Backend backend = Backend::Rewrite;
  // dependents defined only through part of their derivatives (e.g. a with a_x given)
  std::vector<std::string> nonlocal;
  std::vector<LaxVariant> variants;
  std::optional<FamilyInfo> family;
  std::vector<std::string> notes;

  explicit EquationSpec(ContextPtr c)
      : ctx(c), gen_t{IndependentVar::t(), VectorField(c), {}}, gen_y{IndependentVar::y(), VectorField(c), {}}, pde(c) {}

  int n() const { return ctx->n; }
  const GradientExpansion& casimir(int index) const;
};

// shift, scale and project the stored expansions per recipe
VectorField apply_recipe(const EquationSpec& spec, const GeneratorRecipe& recipe);

// empty when the entry is sound
std::vector<std::string> validate(const EquationSpec& spec);

// structural equality, used for family-vs-base comparison
bool same_spec(const EquationSpec& a, const EquationSpec& b);

} // namespace heavenly

#endif
