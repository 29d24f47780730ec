#include "heavenly/catalog.hpp"

#include <functional>
#include <mutex>

#include "catalog_build.hpp"

namespace heavenly {

namespace build {

GradientExpansion gradient(const ContextPtr& c, std::string label, ExpansionPoint pt, int tail_power, const Grad& g,
                           int threshold, int seed) {
  const int tail = pt.infinite ? -tail_power : tail_power;
  GradientExpansion out;
  out.label = std::move(label);
  out.seed = seed;
  out.point = pt;
  out.printed_tail = tail;
  out.validated_tail = tail;
  out.threshold = threshold;
  for (const auto& [d, terms] : g.rows) {
    std::map<int, DiffPoly> by_index;
    for (const auto& [power, coeff] : terms) {
      const int idx = pt.infinite ? -power : power;
      if (idx >= tail)
        throw std::invalid_argument(out.label + ": coefficient inside the tail");
      auto it = by_index.try_emplace(idx, DiffPoly(c)).first;
      it->second += coeff;
    }
    int lowest = tail;
    for (const auto& [idx, coeff] : by_index)
      if (!coeff.is_zero())
        lowest = std::min(lowest, idx);
    std::vector<DiffPoly> coeffs;
    for (int k = lowest; k < tail; ++k) {
      auto it = by_index.find(k);
      coeffs.push_back(it == by_index.end() ? DiffPoly(c) : it->second);
    }
    out.comps.emplace(d, LaurentSeries(c, pt, lowest, std::move(coeffs), tail - 1));
  }
  return out;
}

GradientExpansion validated(GradientExpansion g, int tail_power) {
  g.validated_tail = g.point.infinite ? -tail_power : tail_power;
  return g;
}

void rule(PdeSystem& sys, const std::string& dep, std::initializer_list<IndependentVar> w, const DiffPoly& rhs,
          const std::string& label) {
  Symbol lead = Symbol::jet(sys.ctx->dep_id(dep), make_index(w));
  sys.rules.push_back({lead, rhs, label});
  sys.generators.push_back(DiffPoly::symbol(sys.ctx, lead) - rhs);
  sys.generator_labels.push_back(label);
}

void finalize(EquationSpec& spec) {
  spec.pde_text.clear();
  for (std::size_t i = 0; i < spec.pde.generators.size(); ++i) {
    if (!spec.pde_text.empty())
      spec.pde_text += "; ";
    spec.pde_text += spec.pde.generators[i].str() + " = 0";
  }
}

OneForm form(const ContextPtr& c, std::initializer_list<std::pair<const Direction, LambdaRational>> comps) {
  return OneForm(c, comps);
}

VectorField field(const ContextPtr& c, std::initializer_list<std::pair<const Direction, LambdaRational>> comps) {
  return VectorField(c, comps);
}

} // namespace build

using namespace build;

namespace {

const GaussianRational I = GaussianRational::i();

EquationSpec einstein_weyl() {
  auto c = make_context(1, {"u", "v"});
  JetFn u{c, "u"}, v{c, "v"};
  const auto x = X(), y = Y(), t = T();
  EquationSpec s(c);
  s.id = "einstein_weyl";
  s.title = "Einstein-Weyl metric equation";
  s.seeds.push_back({"seed",
                     form(c, {{DX(), poly(c, {-2 * u({x}) * v({x}) - u({y}), u({x})})},
                              {DL(), poly(c, {v({y}) + v({x}).pow(2), -v({x}), K(c, 1)})}}),
                     false, false, ""});
  Grad py, pt;
  py.add(DL(), 0, -u({x}));
  py.add(DL(), -1, u({y}));
  py.add(DX(), 1, K(c, 1));
  py.add(DX(), 0, v({x}));
  py.add(DX(), -1, -v({y}));
  pt.add(DL(), 1, -u({x}));
  pt.add(DL(), 0, u({y}));
  pt.add(DX(), 2, K(c, 1));
  pt.add(DX(), 1, v({x}));
  pt.add(DX(), 0, u() - v({y}));
  s.casimirs.push_back(validated(gradient(c, "p_y", ExpansionPoint::infinity(), -2, py, -1), -1));
  s.casimirs.push_back(validated(gradient(c, "p_t", ExpansionPoint::infinity(), -1, pt, -2), 0));
  s.gen_t = {t,
             field(c, {{DX(), poly(c, {u() - v({y}), v({x}), K(c, 1)})}, {DL(), poly(c, {u({y}), -u({x})})}}),
             {{{2, 1, 0}}, ProjectionKind::Plus}};
  s.gen_y = {y, field(c, {{DX(), poly(c, {v({x}), K(c, 1)})}, {DL(), R(-u({x}))}}), {{{1, 1, 0}}, ProjectionKind::Plus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {x, t},
       -u({y, y}) - u({x}).pow(2) - u() * u({x, x}) - v({x}) * u({x, y}) + v({y}) * u({x, x}), "u_xt");
  rule(s.pde, "v", {x, t}, -v({y, y}) - u() * v({x, x}) - v({x}) * v({x, y}) + v({y}) * v({x, x}), "v_xt");
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.description = "weights x=1, y=1, t=2";
  finalize(s);
  return s;
}

EquationSpec dkp() {
  auto c = make_context(1, {"u"});
  JetFn u{c, "u"};
  const auto x = X(), y = Y(), t = T();
  EquationSpec s(c);
  s.id = "dkp";
  s.title = "dispersionless Kadomtsev-Petviashvili equation";
  s.seeds.push_back({"seed", form(c, {{DX(), poly(c, {-u({y}), u({x})})}, {DL(), lam(c, 2)}}), false, std::nullopt,
                     "v = 0 reduction of the Einstein-Weyl seed"});
  Grad py, pt;
  py.add(DL(), 0, -u({x}));
  py.add(DL(), -1, u({y}));
  py.add(DX(), 1, K(c, 1));
  pt.add(DL(), 1, -u({x}));
  pt.add(DL(), 0, u({y}));
  pt.add(DX(), 2, K(c, 1));
  pt.add(DX(), 0, u());
  s.casimirs.push_back(validated(gradient(c, "p_y", ExpansionPoint::infinity(), -2, py, -1), -1));
  s.casimirs.push_back(validated(gradient(c, "p_t", ExpansionPoint::infinity(), -1, pt, -2), 0));
  s.gen_t = {t, field(c, {{DX(), poly(c, {u(), K(c, 0), K(c, 1)})}, {DL(), poly(c, {u({y}), -u({x})})}}),
             {{{2, 1, 0}}, ProjectionKind::Plus}};
  s.gen_y = {y, field(c, {{DX(), lam(c)}, {DL(), R(-u({x}))}}), {{{1, 1, 0}}, ProjectionKind::Plus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {x, t}, -u({y, y}) - u({x}).pow(2) - u() * u({x, x}), "u_xt");
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.description = "weights x=1, y=1, t=2";
  finalize(s);
  return s;
}

EquationSpec mod_einstein_weyl() {
  auto c = make_context(1, {"u", "w", "a", "p", "q"});
  JetFn u{c, "u"}, w{c, "w"}, a{c, "a"}, p{c, "p"}, q{c, "q"};
  const auto x = X(), y = Y(), t = T();
  EquationSpec s(c);
  s.id = "mod_einstein_weyl";
  s.title = "modified Einstein-Weyl metric equation";
  auto lx0 = 2 * u({x}) * p() + 2 * u({x}) * q() + 3 * u({x}) * w({x}).pow(2) + 2 * u({y}) * w({x}) +
             6 * u() * u({x}) * w({x}) + 2 * u() * u({y}) + 3 * u().pow(2) * u({x}) - 2 * a() * u({x});
  auto ll0 = 2 * p() + 2 * q() + w({x}).pow(2) + 3 * u() * w({x}) + 3 * u().pow(2) - a();
  s.seeds.push_back({"seed",
                     form(c, {{DX(), poly(c, {lx0, 2 * u({x}) * w({x}) + u({y}) + 3 * u() * u({x}), u({x})})},
                              {DL(), poly(c, {ll0, w({x}) + 3 * u(), K(c, 1)})}}),
                     false, std::nullopt, "p and q stand for the x-antiderivatives of u_x w_x and u_y"});
  Grad g1, g2;
  g1.add(DL(), 1, u({x}));
  g1.add(DX(), 1, K(c, -1));
  g1.add(DX(), 0, w({x}));
  g1.list(DL());
  g2.add(DL(), 2, u({x}));
  g2.add(DX(), 2, K(c, -1));
  g2.add(DL(), 1, u() * u({x}) + u({y}));
  g2.add(DX(), 1, -u() + w({x}));
  g2.add(DX(), 0, u() * w({x}) - a());
  s.casimirs.push_back(validated(gradient(c, "gamma1", ExpansionPoint::infinity(), -1, g1, -2), 0));
  s.casimirs.push_back(gradient(c, "gamma2", ExpansionPoint::infinity(), -1, g2, -1));
  s.gen_y = {y, field(c, {{DX(), poly(c, {w({x}), K(c, -1)})}, {DL(), poly(c, {K(c, 0), u({x})})}}),
             {{{1, 1, 0}}, ProjectionKind::Plus}};
  s.gen_t = {t,
             field(c, {{DX(), poly(c, {u() * w({x}) - a(), w({x}) - u(), K(c, -1)})},
                       {DL(), poly(c, {K(c, 0), u() * u({x}) + u({y}), u({x})})}}),
             {{{2, 1, 0}}, ProjectionKind::Plus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {x, t},
       u({y, y}) + u({x}) * u({y}) + u({x}).pow(2) * w({x}) + u() * u({x, y}) + u({x, y}) * w({x}) + u({x, x}) * a(),
       "u_xt");
  rule(s.pde, "w", {x, t}, u() * w({x, y}) + u({y}) * w({x}) + w({x}) * w({x, y}) + a() * w({x, x}) - a({y}), "w_xt");
  rule(s.pde, "a", {x}, u({x}) * w({x}) - w({x, y}), "a_x");
  rule(s.pde, "p", {x}, u({x}) * w({x}), "p_x");
  rule(s.pde, "q", {x}, u({y}), "q_x");
  s.pde.ranking.weights[kSlotT] = 3;
  s.pde.ranking.dep_offset = {0, 0, 2, 1, 1};
  s.pde.ranking.description = "weights x=1, y=1, t=3; offsets a=2, p=1, q=1";
  s.nonlocal = {"a", "p", "q"};
  s.notes.push_back("a is known only through a_x; a t-derivative of a has no rule");
  finalize(s);
  return s;
}

EquationSpec dunajski() {
  auto c = make_context(2, {"u", "v"});
  JetFn u{c, "u"}, v{c, "v"};
  const auto x1 = X(1), x2 = X(2), y = Y(), t = T();
  EquationSpec s(c);
  s.id = "dunajski";
  s.title = "Dunajski heavenly equation system";
  s.seeds.push_back(
      {"seed",
       form(c, {{DX(1), poly(c, {v({x1}) - u({x1, x1}) + u({x1, x2}), K(c, 1)})},
                {DX(2), poly(c, {v({x2}) + u({x2, x2}) - u({x1, x2}), K(c, 1)})},
                {DL(), poly(c, {-DiffPoly::coord(c, 1) - DiffPoly::coord(c, 2), K(c, 1)})}}),
       false, std::nullopt, ""});
  Grad py, pt;
  py.add(DX(1), 1, K(c, 1));
  py.add(DX(1), 0, -u({x1, x2}));
  py.add(DX(2), 0, u({x1, x1}));
  py.add(DL(), 0, -v({x1}));
  pt.add(DX(2), 1, K(c, -1));
  pt.add(DX(1), 0, u({x2, x2}));
  pt.add(DX(2), 0, -u({x1, x2}));
  pt.add(DL(), 0, v({x2}));
  s.casimirs.push_back(gradient(c, "p_y", ExpansionPoint::infinity(), -1, py, 0));
  s.casimirs.push_back(gradient(c, "p_t", ExpansionPoint::infinity(), -1, pt, 0));
  s.gen_t = {t, field(c, {{DX(1), R(u({x2, x2}))}, {DX(2), poly(c, {-u({x1, x2}), K(c, -1)})}, {DL(), R(v({x2}))}}),
             {{{2, 1, 0}}, ProjectionKind::Plus}};
  s.gen_y = {y, field(c, {{DX(1), poly(c, {-u({x1, x2}), K(c, 1)})}, {DX(2), R(u({x1, x1}))}, {DL(), R(-v({x1}))}}),
             {{{1, 1, 0}}, ProjectionKind::Plus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {x1, t}, -u({y, x2}) - u({x1, x1}) * u({x2, x2}) + u({x1, x2}).pow(2) + v(), "u_x1t");
  rule(s.pde, "v", {x1, t},
       -v({x2, y}) - u({x1, x1}) * v({x2, x2}) - u({x2, x2}) * v({x1, x1}) + 2 * u({x1, x2}) * v({x1, x2}), "v_x1t");
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.description = "weights x=1, y=1, t=2";
  PdeSystem printed(c);
  rule(printed, "u", {x1, t}, s.pde.rules[0].rhs, "u_x1t");
  rule(printed, "v", {x1, t}, -v({x2, y}) - u({x1, x1}) * v({x2, x2}) + 2 * u({x1, x2}) * v({x1, x2}), "v_x1t");
  printed.ranking = s.pde.ranking;
  s.variants.push_back({"printed_v_equation", "v-equation without the u_x2x2 v_x1x1 term", printed, std::nullopt,
                        std::nullopt});
  s.notes.push_back("the v-equation carries u_x2x2 v_x1x1; the residual of the stored fields requires it");
  finalize(s);
  return s;
}

EquationSpec conformal1() {
  auto c = make_context(1, {"u"});
  JetFn u{c, "u"};
  const auto x = X(), y = Y(), t = T();
  EquationSpec s(c);
  s.id = "conformal1";
  s.title = "first conformal structure generating equation";
  s.seeds.push_back({"seed",
                     form(c, {{DX(), over(u({t}).pow(-2), 0) * poly(c, {K(c, 1), K(c, -1)}) +
                                         over(u({y}).pow(-2), 1) * lam(c)}}),
                     false, std::nullopt, ""});
  Grad g1, g2;
  g1.add(DX(), 0, u({y}));
  g2.add(DX(), 0, u({t}));
  s.casimirs.push_back(gradient(c, "gamma1", ExpansionPoint::at(1), 2, g1, 0));
  s.casimirs.push_back(gradient(c, "gamma2", ExpansionPoint::at(0), 2, g2, 0));
  s.gen_y = {y, field(c, {{DX(), over(-u({y}), 1)}}), {{{1, -1, -1}}, ProjectionKind::Minus}};
  s.gen_t = {t, field(c, {{DX(), over(-u({t}), 0)}}), {{{2, -1, -1}}, ProjectionKind::Minus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {y, t}, -u({x, t}) * u({y}) + u({x, y}) * u({t}), "u_yt");
  s.pde.ranking.weights[kSlotY] = 2;
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.description = "weights x=1, y=2, t=2";
  finalize(s);
  return s;
}

EquationSpec conformal2() {
  auto c = make_context(1, {"u"}, {"alpha", "beta"});
  JetFn u{c, "u"};
  const auto x = X(), y = Y(), t = T();
  auto alpha = DiffPoly::param(c, "alpha"), beta = DiffPoly::param(c, "beta");
  EquationSpec s(c);
  s.id = "conformal2";
  s.title = "second conformal structure generating equation";
  auto ux2 = u({x}).pow(2);
  s.seeds.push_back({"seed",
                     form(c, {{DX(), R(ux2) + over(2 * ux2 * (u({y}) + alpha), 0) +
                                         over(ux2 * (3 * u({y}).pow(2) + 4 * alpha * u({y}) + beta), 0, 2)}}),
                     false, std::nullopt, ""});
  Grad g;
  g.add(DX(), 0, u({x}).pow(-1));
  g.add(DX(), 1, -u({y}) * u({x}).pow(-1));
  s.casimirs.push_back(gradient(c, "gamma1", ExpansionPoint::at(0), 3, g, 0));
  s.casimirs.back().note = "integration constants c0 = 1, c1 = c2 = 0";
  s.gen_y = {y, field(c, {{DX(), over(-u({x}).pow(-1), 0)}}), {{{1, -1, -1}}, ProjectionKind::Minus}};
  s.gen_t = {t, field(c, {{DX(), over(u({x}).pow(-1), 0, 2) + over(-u({y}) * u({x}).pow(-1), 0)}}),
             {{{1, 1, -2}}, ProjectionKind::Minus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {x, t}, -u({x}) * u({y, y}) + u({y}) * u({x, y}), "u_xt");
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.description = "weights x=1, y=1, t=2";
  finalize(s);
  return s;
}

EquationSpec inverse_shabat() {
  auto c = make_context(1, {"u"}, {"a0", "a1"});
  JetFn u{c, "u"};
  const auto x = X(), y = Y(), t = T();
  auto a0 = DiffPoly::param(c, "a0"), a1 = DiffPoly::param(c, "a1");
  EquationSpec s(c);
  s.id = "inverse_shabat";
  s.title = "inverse first Shabat reduction heavenly equation";
  auto ux2 = u({x}).pow(2);
  s.seeds.push_back({"seed", form(c, {{DX(), over(a0 * u({y}).pow(-2) * ux2, -1) + poly(c, {a1 * ux2, a1 * ux2})}}),
                     false, std::nullopt, ""});
  Grad g1, g2;
  auto ratio = u({y}) * u({x}).pow(-1);
  g1.add(DX(), 0, ratio);
  g1.add(DX(), 1, -ratio);
  g2.add(DX(), 0, u({x}).pow(-1));
  s.casimirs.push_back(validated(gradient(c, "gamma1", ExpansionPoint::at(-1), 2, g1, -1), 1));
  s.casimirs.push_back(gradient(c, "gamma2", ExpansionPoint::infinity(), -2, g2, 1));
  s.gen_y = {y, field(c, {{DX(), LambdaRational(LambdaPoly(c, {K(c, 0), -ratio}), {{-1, 1}})}}),
             {{{1, 1, -1}}, ProjectionKind::MinusWithConstant}};
  s.gen_t = {t, field(c, {{DX(), lam(c) * R(u({x}).pow(-1))}}), {{{2, 1, 1}}, ProjectionKind::Plus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {x, y}, -u({y}) * u({t, x}) + u({t, y}) * u({x}), "u_xy");
  s.pde.ranking.weights[0] = 2;
  s.pde.ranking.weights[kSlotY] = 2;
  s.pde.ranking.description = "weights x=2, y=2, t=1";
  s.variants.push_back({"strict_minus", "A_y from the principal part alone, without the constant term", std::nullopt,
                        std::nullopt, field(c, {{DX(), over(ratio, -1)}})});
  s.notes.push_back("the A_y projection keeps the constant term of the local expansion");
  finalize(s);
  return s;
}

EquationSpec pleb1() {
  auto c = make_context(2, {"u"});
  JetFn u{c, "u"};
  const auto x1 = X(1), x2 = X(2), y = Y(), t = T();
  EquationSpec s(c);
  s.id = "pleb1";
  s.title = "first Plebanski heavenly equation";
  s.seeds.push_back(
      {"seed",
       form(c, {{DX(1), poly(c, {u({x1, x1}) - u({x1, x2}), K(c, 1)}) + over(u({y, x1}) + u({t, x1}), 0)},
                {DX(2), poly(c, {u({x1, x2}) - u({x2, x2}), K(c, 1)}) + over(u({y, x2}) + u({t, x2}), 0)}}),
       true, true, kPleb1SeedNote});
  Grad g1, g2;
  g1.add(DX(1), 0, -u({y, x2}));
  g1.add(DX(2), 0, u({y, x1}));
  g2.add(DX(1), 0, -u({t, x2}));
  g2.add(DX(2), 0, u({t, x1}));
  s.casimirs.push_back(validated(gradient(c, "gamma1", ExpansionPoint::at(0), 2, g1, 0), 1));
  s.casimirs.push_back(validated(gradient(c, "gamma2", ExpansionPoint::at(0), 2, g2, 0), 1));
  s.gen_y = {y, field(c, {{DX(1), over(-u({y, x2}), 0)}, {DX(2), over(u({y, x1}), 0)}}),
             {{{1, 1, -1}}, ProjectionKind::Minus}};
  s.gen_t = {t, field(c, {{DX(1), over(-u({t, x2}), 0)}, {DX(2), over(u({t, x1}), 0)}}),
             {{{2, 1, -1}}, ProjectionKind::Minus}};
  s.pde = PdeSystem(c);
  s.pde.generators.push_back(u({y, x1}) * u({t, x2}) - u({y, x2}) * u({t, x1}) - 1);
  s.pde.generator_labels.push_back("P");
  s.pde.ranking.description = "no oriented rule; ideal membership";
  s.backend = Backend::Certificate;
  s.family = FamilyInfo{"pleb1", 1};
  finalize(s);
  return s;
}

EquationSpec mod_pleb() {
  auto c = make_context(2, {"u"});
  JetFn u{c, "u"};
  const auto x1 = X(1), x2 = X(2), y = Y(), t = T();
  EquationSpec s(c);
  s.id = "mod_pleb";
  s.title = "modified Plebanski heavenly equation";
  s.seeds.push_back(
      {"seed",
       form(c, {{DX(1), over(u({x1, y}), 0) + poly(c, {u({x1, x1}) - u({x1, x2}), K(c, 1)})},
                {DX(2), over(u({x2, y}), 0) + poly(c, {u({x1, x2}) - u({x2, x2}), K(c, 1)})}}),
       true, true, kModPlebSeedNote});
  Grad g1, g2;
  g1.add(DX(1), 0, u({y, x2}));
  g1.add(DX(2), 0, -u({y, x1}));
  g2.add(DX(1), -1, -u({x2, x2}));
  g2.add(DX(2), 0, K(c, -1));
  g2.add(DX(2), -1, u({x1, x2}));
  s.casimirs.push_back(gradient(c, "gamma1", ExpansionPoint::at(0), 1, g1, 0));
  s.casimirs.push_back(gradient(c, "gamma2", ExpansionPoint::infinity(), -2, g2, 1));
  s.gen_y = {y, field(c, {{DX(1), over(u({y, x2}), 0)}, {DX(2), over(-u({y, x1}), 0)}}),
             {{{1, 1, -1}}, ProjectionKind::Minus}};
  s.gen_t = {t, field(c, {{DX(1), R(-u({x2, x2}))}, {DX(2), poly(c, {u({x1, x2}), K(c, -1)})}}),
             {{{2, 1, 1}}, ProjectionKind::Plus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {y, t}, u({y, x1}) * u({x2, x2}) - u({y, x2}) * u({x1, x2}), "u_yt");
  s.pde.ranking.weights[kSlotY] = 2;
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.description = "weights x=1, y=2, t=2";
  PdeSystem literal(c);
  rule(literal, "u", {y, t}, u({y, x2}) * u({x1, x2}) - u({y, x1}) * u({x2, x2}), "u_yt");
  literal.ranking = s.pde.ranking;
  s.variants.push_back({"family_literal_sign", "sum-form PDE read literally at m = 1", literal, std::nullopt, std::nullopt});
  s.variants.push_back({"psi_display_sign", "A_y with the opposite overall sign", std::nullopt, std::nullopt,
                        -s.gen_y.field});
  s.family = FamilyInfo{"mod_pleb", 1};
  finalize(s);
  return s;
}

EquationSpec husain() {
  auto c = make_context(2, {"u"});
  JetFn u{c, "u"};
  const auto x1 = X(1), x2 = X(2), y = Y(), t = T();
  const PoleMap pm{{I, 1}, {-I, 1}};
  auto frac = [&](const DiffPoly& c0, const DiffPoly& c1) { return LambdaRational(LambdaPoly(c, {c0, c1}), pm); };
  EquationSpec s(c);
  s.id = "husain";
  s.title = "Husain heavenly equation";
  s.seeds.push_back({"seed",
                     form(c, {{DX(1), frac(-2 * u({t, x1}), 2 * u({y, x1}))}, {DX(2), frac(-2 * u({t, x2}), 2 * u({y, x2}))}}),
                     true, true, kHusainSeedNote});
  const GaussianRational half = GaussianRational::ratio(1, 2);
  Grad g1, g2;
  g1.add(DX(1), 0, half * (-u({y, x2}) - I * u({t, x2})));
  g1.add(DX(2), 0, half * (u({y, x1}) + I * u({t, x1})));
  g2.add(DX(1), 0, half * (-u({y, x2}) + I * u({t, x2})));
  g2.add(DX(2), 0, half * (u({y, x1}) - I * u({t, x1})));
  s.casimirs.push_back(gradient(c, "gamma1", ExpansionPoint::at(I), 1, g1, 0));
  s.casimirs.push_back(gradient(c, "gamma2", ExpansionPoint::at(-I), 1, g2, 0));
  s.gen_y = {y, field(c, {{DX(1), frac(u({t, x2}), -u({y, x2}))}, {DX(2), frac(-u({t, x1}), u({y, x1}))}}),
             {{{1, 1, -1}, {2, 1, -1}}, ProjectionKind::Minus}};
  s.gen_t = {t, field(c, {{DX(1), frac(-u({y, x2}), -u({t, x2}))}, {DX(2), frac(u({y, x1}), u({t, x1}))}}),
             {{{1, -I, -1}, {2, I, -1}}, ProjectionKind::Minus}};
  s.pde = PdeSystem(c);
  rule(s.pde, "u", {t, t}, -u({y, y}) - u({y, x1}) * u({t, x2}) + u({y, x2}) * u({t, x1}), "u_tt");
  s.pde.ranking.weights[kSlotY] = 2;
  s.pde.ranking.weights[kSlotT] = 3;
  s.pde.ranking.description = "weights x=1, y=2, t=3";
  PdeSystem literal(c);
  rule(literal, "u", {t, t}, -u({y, y}) - u({y, x1}) * u({t, x2}) + u({y, x2}) * u({x2, x1}), "u_tt");
  literal.ranking = s.pde.ranking;
  s.variants.push_back(
      {"family_literal_index", "sum-form PDE read literally: x2-derivative in the last product", literal, std::nullopt,
       std::nullopt});
  s.family = FamilyInfo{"husain", 1};
  finalize(s);
  return s;
}

EquationSpec monge() {
  auto c = make_context(4, {"u", "r", "ry", "rt"});
  JetFn u{c, "u"}, r{c, "r"}, ry{c, "ry"}, rt{c, "rt"};
  const auto x1 = X(1), x2 = X(2), x3 = X(3), x4 = X(4), y = Y(), t = T();
  EquationSpec s(c);
  s.id = "monge";
  s.title = "general Monge heavenly equation";
  auto inv = over(K(c, 1), 0);
  s.seeds.push_back({"hen**",
                     form(c, {{DX(1), R(u({y, x1}) + u({t, x1})) + inv},
                              {DX(2), R(u({y, x2}) + u({t, x2})) + inv},
                              {DX(3), R(u({y, x3}) + u({t, x3}))},
                              {DX(4), R(u({y, x4}) + u({t, x4}))}}),
                     true, true, kMongeSeedNote});
  auto yt = [&](IndependentVar v) { return u({y, v}) + u({t, v}); };
  Grad g1, g2, g3, g4;
  for (Grad* g : {&g1, &g2, &g3, &g4})
    for (int i = 1; i <= 4; ++i)
      g->list(DX(i));
  g1.add(DX(2), 0, K(c, 1));
  g1.add(DX(1), 1, -yt(x2) - r());
  g1.add(DX(2), 1, r());
  g2.add(DX(1), 0, K(c, 1));
  g2.add(DX(1), 1, -r());
  g2.add(DX(2), 1, -yt(x1) + r());
  g3.add(DX(3), 0, -u({y, x4}));
  g3.add(DX(4), 0, u({y, x3}));
  g3.add(DX(2), 1, u({t, x3}) * u({y, x4}) - u({t, x4}) * u({y, x3}));
  g3.add(DX(3), 1, u({t, x4}) * u({y, x2}) - u({t, x2}) * u({y, x4}));
  g3.add(DX(4), 1, u({t, x2}) * u({y, x3}) - u({t, x3}) * u({y, x2}));
  g4.add(DX(3), 0, -u({t, x4}));
  g4.add(DX(4), 0, u({t, x3}));
  g4.add(DX(1), 1, u({y, x3}) * u({t, x4}) - u({y, x4}) * u({t, x3}));
  g4.add(DX(3), 1, u({y, x4}) * u({t, x1}) - u({y, x1}) * u({t, x4}));
  g4.add(DX(4), 1, u({y, x1}) * u({t, x3}) - u({y, x3}) * u({t, x1}));
  s.casimirs.push_back(gradient(c, "gamma1", ExpansionPoint::at(0), 2, g1, 1));
  s.casimirs.push_back(gradient(c, "gamma2", ExpansionPoint::at(0), 2, g2, 1));
  s.casimirs.push_back(gradient(c, "gamma3", ExpansionPoint::at(0), 2, g3, 1));
  s.casimirs.push_back(gradient(c, "gamma4", ExpansionPoint::at(0), 2, g4, 1));
  s.gen_y = {y,
             field(c, {{DX(2), inv}, {DX(3), over(-u({y, x4}), 0)}, {DX(4), over(u({y, x3}), 0)}}),
             {{{1, 1, -1}, {3, 1, -1}}, ProjectionKind::Minus}};
  s.gen_t = {t,
             field(c, {{DX(1), -inv}, {DX(3), over(-u({t, x4}), 0)}, {DX(4), over(u({t, x3}), 0)}}),
             {{{2, -1, -1}, {4, 1, -1}}, ProjectionKind::Minus}};
  s.pde = PdeSystem(c);
  auto rhs = -u({y, x1}) - u({y, x3}) * u({t, x4}) + u({y, x4}) * u({t, x3});
  rule(s.pde, "u", {t, x2}, rhs, "u_tx2");
  auto ut12 = rhs.total_derivative(x1);
  rule(s.pde, "r", {x2}, r({x1}) + u({y, x1, x2}) + ut12, "r_x2");
  rule(s.pde, "ry", {x2}, ry({x1}) + u({y, x1, x2}), "ry_x2");
  rule(s.pde, "rt", {x2}, rt({x1}) + ut12, "rt_x2");
  s.pde.ranking.weights[1] = 2;
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.dep_offset = {0, 4, 4, 4};
  s.pde.ranking.description = "weights x2=2, t=2, other directions 1; offsets r=ry=rt=4";
  s.nonlocal = {"r", "ry", "rt"};
  s.notes.push_back(monge_nonlocal_note(2));
  s.family = FamilyInfo{"monge", 2};
  monge_alternative_seeds(s, u, ry, rt);
  finalize(s);
  return s;
}

} // namespace

namespace build {

void monge_alternative_seeds(EquationSpec& s, const JetFn& u, const JetFn& ry, const JetFn& rt) {
  const ContextPtr& c = s.ctx;
  const auto x1 = X(1), x2 = X(2), x3 = X(3), x4 = X(4), y = Y(), t = T();
  auto inv = over(K(c, 1), 0);
  for (int variant = 0; variant < 2; ++variant) {
    const IndependentVar a = variant == 0 ? y : t;
    const JetFn& rr = variant == 0 ? ry : rt;
    const int seed = static_cast<int>(s.seeds.size());
    s.seeds.push_back({variant == 0 ? "du_y" : "du_t",
                       form(c, {{DX(1), R(u({a, x1})) + inv},
                                {DX(2), R(u({a, x2})) + inv},
                                {DX(3), R(u({a, x3}))},
                                {DX(4), R(u({a, x4}))}}),
                       true, true, ""});
    Grad g1, g2, g3, g4;
    for (Grad* g : {&g1, &g2, &g3, &g4})
      for (int i = 1; i <= 4; ++i)
        g->list(DX(i));
    g1.add(DX(2), 0, K(c, 1));
    g1.add(DX(1), 1, -u({a, x2}) - rr());
    g1.add(DX(2), 1, rr());
    g2.add(DX(1), 0, K(c, 1));
    g2.add(DX(1), 1, -rr());
    g2.add(DX(2), 1, -u({a, x1}) + rr());
    // the companion pair: the a-gradient has no linear term, the b-gradient does
    Grad& ga = variant == 0 ? g3 : g4;
    Grad& gb = variant == 0 ? g4 : g3;
    ga.add(DX(3), 0, -u({y, x4}));
    ga.add(DX(4), 0, u({y, x3}));
    gb.add(DX(3), 0, -u({t, x4}));
    gb.add(DX(4), 0, u({t, x3}));
    if (variant == 0) {
      gb.add(DX(1), 1, u({y, x3}) * u({t, x4}) - u({y, x4}) * u({t, x3}));
      gb.add(DX(3), 1, u({y, x4}) * u({t, x1}) - u({y, x1}) * u({t, x4}));
      gb.add(DX(4), 1, u({y, x1}) * u({t, x3}) - u({y, x3}) * u({t, x1}));
    } else {
      ga.add(DX(2), 1, u({t, x3}) * u({y, x4}) - u({t, x4}) * u({y, x3}));
      ga.add(DX(3), 1, u({t, x4}) * u({y, x2}) - u({t, x2}) * u({y, x4}));
      ga.add(DX(4), 1, u({t, x2}) * u({y, x3}) - u({t, x3}) * u({y, x2}));
    }
    const std::string tag = variant == 0 ? "du_y:" : "du_t:";
    s.casimirs.push_back(gradient(c, tag + "gamma1", ExpansionPoint::at(0), 2, g1, 1, seed));
    s.casimirs.push_back(gradient(c, tag + "gamma2", ExpansionPoint::at(0), 2, g2, 1, seed));
    s.casimirs.push_back(gradient(c, tag + "gamma3", ExpansionPoint::at(0), 2, g3, 1, seed));
    s.casimirs.push_back(gradient(c, tag + "gamma4", ExpansionPoint::at(0), 2, g4, 1, seed));
  }
}

} // namespace build

namespace {

struct Registry {
  std::vector<EquationSpec> entries;
  std::vector<std::string> issues;
};

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    for (auto make : {einstein_weyl, dkp, mod_einstein_weyl, dunajski, conformal1, conformal2, inverse_shabat, pleb1,
                      mod_pleb, husain, monge})
      r.entries.push_back(make());
    for (const auto& e : r.entries)
      for (auto& s : validate(e))
        r.issues.push_back(std::move(s));
    return r;
  }();
  return reg;
}

} // namespace

const EquationSpec& catalog_get(const std::string& id) {
  for (const auto& e : registry().entries)
    if (e.id == id)
      return e;
  throw UnknownEquation("unknown equation id '" + id + "'");
}

std::vector<CatalogEntry> catalog_list() {
  std::vector<CatalogEntry> out;
  for (const auto& e : registry().entries)
    out.push_back({e.id, e.n(), e.backend, e.family ? std::optional<std::string>(e.family->family) : std::nullopt});
  return out;
}

const std::vector<FamilyDescriptor>& catalog_families() {
  static const std::vector<FamilyDescriptor> fams{{"pleb1", 1, 1}, {"mod_pleb", 1, 1}, {"husain", 1, 1}, {"monge", 2, 2}};
  return fams;
}

EquationSpec catalog_instantiate(const std::string& family, int k) {
  for (const auto& f : catalog_families()) {
    if (f.id != family)
      continue;
    if (k < f.min_k || k > kMaxTorus / 2)
      throw InvalidFamilyParameter(family + ": k must lie in [" + std::to_string(f.min_k) + ", " +
                                   std::to_string(kMaxTorus / 2) + "], got " + std::to_string(k));
    if (family == "pleb1")
      return pleb1_family(k);
    if (family == "mod_pleb")
      return mod_pleb_family(k);
    if (family == "husain")
      return husain_family(k);
    return monge_family(k);
  }
  throw UnknownEquation("unknown family '" + family + "'");
}

std::vector<std::string> catalog_validate_all() { return registry().issues; }

} // namespace heavenly

namespace heavenly {

std::string render_lax_equation(const IndependentVar& tau, const VectorField& a) {
  const JetContext& ctx = *a.context();
  std::string out = "ψ_" + ctx.slot_name(tau.slot());
  std::string rest = render_field(a);
  if (rest == "0")
    return out + " = 0";
  for (std::size_t pos = 0; (pos = rest.find("∂_", pos)) != std::string::npos;)
    rest.replace(pos, std::string("∂_").size(), "ψ_");
  return out + (rest[0] == '-' ? " - " + rest.substr(1) : " + " + rest) + " = 0";
}

namespace {

using nlohmann::ordered_json;

ordered_json series_json(const LaurentSeries& s) {
  ordered_json coeffs = ordered_json::object();
  for (int k = s.lowest(); k <= s.known_through(); ++k) {
    auto c = s.coeff(k);
    if (!c.is_zero())
      coeffs[std::to_string(s.point().infinite ? -k : k)] = c.str();
  }
  return {{"text", s.str()}, {"coefficients", coeffs}};
}

ordered_json pde_json(const PdeSystem& p) {
  ordered_json rules = ordered_json::array();
  for (const auto& r : p.rules)
    rules.push_back({{"label", r.label}, {"leading", r.leading.str(*p.ctx)}, {"rhs", r.rhs.str()}});
  ordered_json gens = ordered_json::array();
  for (const auto& g : p.generators)
    gens.push_back(g.str());
  return {{"rules", rules}, {"generators", gens}, {"ranking", p.ranking.description}};
}

ordered_json recipe_json(const GeneratorRecipe& r) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : r.terms)
    terms.push_back({{"casimir", t.casimir}, {"coefficient", t.coeff.str()}, {"shift", t.shift}});
  return {{"projection", projection_name(r.projection)}, {"terms", terms}};
}

} // namespace

ordered_json spec_json(const EquationSpec& s) {
  ordered_json j;
  j["id"] = s.id;
  j["title"] = s.title;
  j["n"] = s.n();
  j["dependents"] = s.ctx->dependents;
  j["parameters"] = s.ctx->params;
  j["backend"] = backend_name(s.backend);
  j["pde"] = s.pde_text;
  j["system"] = pde_json(s.pde);
  if (!s.nonlocal.empty())
    j["nonlocal"] = s.nonlocal;
  ordered_json seeds = ordered_json::array();
  for (const auto& seed : s.seeds) {
    ordered_json e{{"label", seed.label}, {"form", render_form(seed.form)}, {"dlambda_zero", seed.dlambda_zero}};
    e["expect_closed"] = seed.expect_closed ? ordered_json(*seed.expect_closed) : ordered_json(nullptr);
    if (!seed.note.empty())
      e["note"] = seed.note;
    seeds.push_back(e);
  }
  j["seeds"] = seeds;
  ordered_json cas = ordered_json::array();
  for (std::size_t i = 0; i < s.casimirs.size(); ++i) {
    const auto& g = s.casimirs[i];
    ordered_json comps = ordered_json::object();
    for (const auto& [d, ser] : g.comps)
      comps[d.str(*s.ctx)] = series_json(ser);
    auto tail = [&](int t) { return g.point.infinite ? -t : t; };
    ordered_json e{{"index", i + 1},        {"label", g.label},
                   {"seed", g.seed},        {"point", g.point.str()},
                   {"printed_tail", tail(g.printed_tail)}, {"validated_tail", tail(g.validated_tail)},
                   {"threshold", g.threshold}, {"components", comps}};
    if (!g.note.empty())
      e["note"] = g.note;
    cas.push_back(e);
  }
  j["casimirs"] = cas;
  for (const auto* g : {&s.gen_y, &s.gen_t})
    j[g == &s.gen_y ? "A_y" : "A_t"] = {{"field", render_field(g->field)},
                                         {"lax", render_lax_equation(g->tau, g->field)},
                                         {"recipe", recipe_json(g->recipe)}};
  ordered_json vars = ordered_json::array();
  for (const auto& v : s.variants) {
    ordered_json e{{"label", v.label}, {"note", v.note}};
    if (v.pde)
      e["system"] = pde_json(*v.pde);
    if (v.a_t)
      e["A_t"] = render_field(*v.a_t);
    if (v.a_y)
      e["A_y"] = render_field(*v.a_y);
    vars.push_back(e);
  }
  j["variants"] = vars;
  if (s.family)
    j["family"] = {{"id", s.family->family}, {"k", s.family->k}};
  j["notes"] = s.notes;
  return j;
}

ordered_json catalog_json() {
  ordered_json entries = ordered_json::array();
  for (const auto& e : catalog_list())
    entries.push_back(spec_json(catalog_get(e.id)));
  ordered_json fams = ordered_json::array();
  for (const auto& f : catalog_families())
    fams.push_back({{"id", f.id}, {"base_k", f.base_k}, {"min_k", f.min_k}, {"max_k", kMaxTorus / 2}});
  return {{"equations", entries}, {"families", fams}};
}

} // namespace heavenly
