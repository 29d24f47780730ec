#include "heavenly/spec.hpp"

#include <set>
#include <sstream>

namespace heavenly {

std::string backend_name(Backend b) { return b == Backend::Rewrite ? "rewrite" : "certificate"; }

std::string projection_name(ProjectionKind p) {
  switch (p) {
  case ProjectionKind::Plus:
    return "plus";
  case ProjectionKind::Minus:
    return "minus";
  case ProjectionKind::MinusWithConstant:
    return "minus+constant";
  }
  return "?";
}

const GradientExpansion& EquationSpec::casimir(int index) const {
  if (index < 1 || index > static_cast<int>(casimirs.size()))
    throw std::out_of_range(id + ": no Casimir gradient with index " + std::to_string(index));
  return casimirs[index - 1];
}

namespace {

LambdaRational project(const LaurentSeries& s, ProjectionKind kind) {
  const ContextPtr& ctx = s.context();
  const ExpansionPoint& pt = s.point();
  LambdaRational out(ctx);
  if (kind == ProjectionKind::Plus) {
    if (!pt.infinite)
      throw std::invalid_argument("plus projection needs an expansion at infinity");
    if (s.known_through() < 0)
      throw std::invalid_argument("expansion too short for the plus projection");
    for (int k = s.lowest(); k <= 0; ++k)
      if (!s.coeff(k).is_zero())
        out += LambdaRational(LambdaPoly::monomial(s.coeff(k), -k));
    return out;
  }
  if (pt.infinite)
    throw std::invalid_argument("minus projection needs a finite expansion point");
  const int last = kind == ProjectionKind::Minus ? -1 : 0;
  if (s.known_through() < last)
    throw std::invalid_argument("expansion too short for the minus projection");
  for (int k = s.lowest(); k <= last; ++k) {
    DiffPoly c = s.coeff(k);
    if (c.is_zero())
      continue;
    out += k < 0 ? LambdaRational::pole(c, pt.value, -k) : LambdaRational(c);
  }
  return out;
}

} // namespace

VectorField apply_recipe(const EquationSpec& spec, const GeneratorRecipe& recipe) {
  VectorField out(spec.ctx);
  for (const auto& term : recipe.terms) {
    const auto& g = spec.casimir(term.casimir);
    const int z = g.point.infinite ? -term.shift : term.shift;
    for (const auto& [d, s] : g.comps)
      out.set(d, out.get(d) + project(s.shifted(z).scaled(term.coeff), recipe.projection));
  }
  return out;
}

namespace {

std::set<int> field_deps(const LambdaRational& f, std::set<int> acc) {
  for (const auto& c : f.numerator().coeffs())
    for (const auto& s : c.symbols())
      if (s.is_jet())
        acc.insert(s.id);
  return acc;
}

void collect(const DiffPoly& p, std::set<int>& acc) {
  for (const auto& s : p.symbols())
    if (s.is_jet())
      acc.insert(s.id);
}

} // namespace

std::vector<std::string> validate(const EquationSpec& spec) {
  std::vector<std::string> issues;
  auto issue = [&](const std::string& s) { issues.push_back(spec.id + ": " + s); };

  for (const auto* g : {&spec.gen_t, &spec.gen_y}) {
    const std::string name = g == &spec.gen_t ? "A_t" : "A_y";
    try {
      if (!(apply_recipe(spec, g->recipe) == g->field))
        issue(name + " differs from the projection recipe applied to the stored expansions");
    } catch (const std::exception& e) {
      issue(name + " recipe failed: " + e.what());
    }
  }

  for (const auto& s : spec.pde.audit())
    issue("pde audit: " + s);

  std::set<int> used;
  auto add_field = [&](const auto& f) {
    for (const auto& [d, c] : f.components())
      used = field_deps(c, used);
  };
  add_field(spec.gen_t.field);
  add_field(spec.gen_y.field);
  for (const auto& s : spec.seeds)
    add_field(s.form);
  for (const auto& g : spec.casimirs)
    for (const auto& [d, s] : g.comps)
      for (int k = s.lowest(); k <= s.known_through(); ++k)
        collect(s.coeff(k), used);
  std::set<int> in_pde;
  for (const auto& r : spec.pde.rules) {
    in_pde.insert(r.leading.id);
    collect(r.rhs, in_pde);
  }
  for (const auto& g : spec.pde.generators)
    collect(g, in_pde);
  for (int d : in_pde)
    if (!used.count(d))
      issue("dependent " + spec.ctx->dependents[d] + " occurs in the PDE but in no field, seed or expansion");

  if (spec.backend == Backend::Rewrite) {
    for (std::size_t i = 0; i < spec.pde.generators.size(); ++i) {
      const auto& g = spec.pde.generators[i];
      bool oriented = false;
      for (const auto& r : spec.pde.rules)
        if (DiffPoly::symbol(spec.ctx, r.leading) - r.rhs == g) {
          oriented = true;
          break;
        }
      if (oriented)
        continue;
      std::optional<Symbol> top;
      for (const auto& s : g.symbols())
        if (s.is_jet() && (!top || spec.pde.ranking.less(*top, s)))
          top = s;
      const std::string label = i < spec.pde.generator_labels.size() ? spec.pde.generator_labels[i] : std::to_string(i);
      issue("generator " + label + " has no oriented rule; missing leading pattern " +
            (top ? DiffPoly::symbol(spec.ctx, *top).str() : std::string("?")));
    }
  } else if (spec.pde.generators.empty()) {
    issue("certificate backend without ideal generators");
  }

  for (std::size_t i = 0; i < spec.casimirs.size(); ++i) {
    const auto& g = spec.casimirs[i];
    if (g.seed < 0 || g.seed >= static_cast<int>(spec.seeds.size()))
      issue("Casimir " + std::to_string(i + 1) + " refers to a missing seed");
    if (g.validated_tail > g.printed_tail)
      issue("Casimir " + std::to_string(i + 1) + " validated tail beyond the printed one");
  }
  return issues;
}

namespace {

bool same_series(const LaurentSeries& a, const LaurentSeries& b) {
  if (!(a.point() == b.point()) || a.known_through() != b.known_through())
    return false;
  for (int k = std::min(a.lowest(), b.lowest()); k <= a.known_through(); ++k)
    if (!(a.coeff(k) == b.coeff(k)))
      return false;
  return true;
}

bool same_fields(const SeriesField& a, const SeriesField& b) {
  if (a.size() != b.size())
    return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
    if (!(ia->first == ib->first) || !same_series(ia->second, ib->second))
      return false;
  return true;
}

bool same_recipe(const GeneratorRecipe& a, const GeneratorRecipe& b) {
  if (a.projection != b.projection || a.terms.size() != b.terms.size())
    return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i)
    if (a.terms[i].casimir != b.terms[i].casimir || !(a.terms[i].coeff == b.terms[i].coeff) ||
        a.terms[i].shift != b.terms[i].shift)
      return false;
  return true;
}

bool same_pde(const PdeSystem& a, const PdeSystem& b) {
  if (a.rules.size() != b.rules.size() || a.generators != b.generators || a.generator_labels != b.generator_labels)
    return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i)
    if (!(a.rules[i].leading == b.rules[i].leading) || !(a.rules[i].rhs == b.rules[i].rhs) ||
        a.rules[i].label != b.rules[i].label)
      return false;
  return a.ranking.dep_offset == b.ranking.dep_offset && a.ranking.weights == b.ranking.weights &&
         a.ranking.priority == b.ranking.priority;
}

} // namespace

bool same_spec(const EquationSpec& a, const EquationSpec& b) {
  if (!(*a.ctx == *b.ctx) || a.id != b.id || a.backend != b.backend || a.nonlocal != b.nonlocal ||
      a.pde_text != b.pde_text)
    return false;
  if (a.seeds.size() != b.seeds.size() || a.casimirs.size() != b.casimirs.size() ||
      a.variants.size() != b.variants.size())
    return false;
  for (std::size_t i = 0; i < a.seeds.size(); ++i)
    if (a.seeds[i].label != b.seeds[i].label || !(a.seeds[i].form == b.seeds[i].form) ||
        a.seeds[i].dlambda_zero != b.seeds[i].dlambda_zero || a.seeds[i].expect_closed != b.seeds[i].expect_closed)
      return false;
  for (std::size_t i = 0; i < a.casimirs.size(); ++i) {
    const auto &x = a.casimirs[i], &y = b.casimirs[i];
    if (x.label != y.label || x.seed != y.seed || !(x.point == y.point) || x.printed_tail != y.printed_tail ||
        x.validated_tail != y.validated_tail || x.threshold != y.threshold || !same_fields(x.comps, y.comps))
      return false;
  }
  for (const auto& [ga, gb] : {std::pair{&a.gen_t, &b.gen_t}, std::pair{&a.gen_y, &b.gen_y}})
    if (!(ga->tau == gb->tau) || !(ga->field == gb->field) || !same_recipe(ga->recipe, gb->recipe))
      return false;
  if (!same_pde(a.pde, b.pde))
    return false;
  for (std::size_t i = 0; i < a.variants.size(); ++i) {
    const auto &x = a.variants[i], &y = b.variants[i];
    if (x.label != y.label || x.pde.has_value() != y.pde.has_value() || (x.pde && !same_pde(*x.pde, *y.pde)) ||
        x.a_t != y.a_t || x.a_y != y.a_y)
      return false;
  }
  return true;
}

} // namespace heavenly
