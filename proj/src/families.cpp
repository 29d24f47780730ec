#include "heavenly/catalog.hpp"

#include "catalog_build.hpp"

namespace heavenly::build {

namespace {

std::string instance_id(const std::string& id, int k, int base_k) {
  return k == base_k ? id : id + "_k" + std::to_string(k);
}

// λ(δ_i1 + δ_i2)
LambdaRational lambda_part(const ContextPtr& c, int i) { return i <= 2 ? lam(c) : LambdaRational(c); }

} // namespace

std::string monge_nonlocal_note(int k) {
  return k == 2 ? "r, ry, rt invert (∂_x2 - ∂_x1) on u_yx1x2 + u_tx1x2, u_yx1x2 and u_tx1x2"
                : "r inverts (∂_x2 - ∂_x1) on u_yx1x2 + u_tx1x2";
}

EquationSpec pleb1_family(int k) {
  const int n = 2 * k;
  auto c = make_context(n, {"u"});
  JetFn u{c, "u"};
  const auto y = Y(), t = T();
  EquationSpec s(c);
  s.id = instance_id("pleb1", k, 1);
  s.title = "first Plebanski heavenly equation";
  OneForm l(c);
  for (int i = 1; i <= n; ++i)
    l.set(DX(i), R(u({X(1), X(i)}) - u({X(2), X(i)})) + lambda_part(c, i) + over(u({y, X(i)}) + u({t, X(i)}), 0));
  s.seeds.push_back({"seed", l, true, true, kPleb1SeedNote});
  VectorField ay(c), at(c);
  GeneratorRecipe ry{{}, ProjectionKind::Minus}, rt{{}, ProjectionKind::Minus};
  DiffPoly bracket(c);
  for (int m = 1; m <= k; ++m) {
    const auto a = X(2 * m - 1), b = X(2 * m);
    for (const auto tau : {y, t}) {
      Grad g;
      for (int i = 1; i <= n; ++i)
        g.list(DX(i));
      g.add(DX(2 * m - 1), 0, -u({tau, b}));
      g.add(DX(2 * m), 0, u({tau, a}));
      const int idx = tau == y ? 2 * m - 1 : 2 * m;
      s.casimirs.push_back(validated(gradient(c, "gamma" + std::to_string(idx), ExpansionPoint::at(0), 2, g, 0), 1));
      VectorField& f = tau == y ? ay : at;
      f.set(DX(2 * m - 1), over(-u({tau, b}), 0));
      f.set(DX(2 * m), over(u({tau, a}), 0));
      (tau == y ? ry : rt).terms.push_back({idx, 1, -1});
    }
    bracket += u({y, a}) * u({t, b}) - u({y, b}) * u({t, a});
  }
  if (k > 1) {
    for (const auto tau : {y, t}) {
      Grad g;
      for (int m = 1; m <= k; ++m) {
        g.add(DX(2 * m - 1), 0, -u({tau, X(2 * m)}));
        g.add(DX(2 * m), 0, u({tau, X(2 * m - 1)}));
      }
      const std::string label = tau == y ? "sum_y" : "sum_t";
      s.casimirs.push_back(validated(gradient(c, label, ExpansionPoint::at(0), 2, g, 0), 1));
    }
  }
  s.gen_y = {y, ay, ry};
  s.gen_t = {t, at, rt};
  s.pde.generators.push_back(bracket - 1);
  s.pde.generator_labels.push_back("P");
  s.pde.ranking.description = "no oriented rule; ideal membership";
  s.backend = Backend::Certificate;
  s.family = FamilyInfo{"pleb1", k};
  finalize(s);
  return s;
}

EquationSpec mod_pleb_family(int k) {
  const int n = 2 * k;
  auto c = make_context(n, {"u"});
  JetFn u{c, "u"};
  const auto y = Y(), t = T(), x2 = X(2);
  EquationSpec s(c);
  s.id = instance_id("mod_pleb", k, 1);
  s.title = "modified Plebanski heavenly equation";
  OneForm l(c);
  for (int i = 1; i <= n; ++i)
    l.set(DX(i), over(u({X(i), y}), 0) + R(u({X(1), X(i)}) - u({X(2), X(i)})) + lambda_part(c, i));
  s.seeds.push_back({"seed", l, true, true, kModPlebSeedNote});
  VectorField ay(c), at(c);
  GeneratorRecipe ry{{}, ProjectionKind::Minus}, rt{{}, ProjectionKind::Plus};
  DiffPoly sum(c);
  for (int m = 1; m <= k; ++m) {
    const auto a = X(2 * m - 1), b = X(2 * m);
    Grad gy, gt;
    for (int i = 1; i <= n; ++i) {
      gy.list(DX(i));
      gt.list(DX(i));
    }
    gy.add(DX(2 * m - 1), 0, u({y, b}));
    gy.add(DX(2 * m), 0, -u({y, a}));
    s.casimirs.push_back(gradient(c, "gamma" + std::to_string(2 * m - 1), ExpansionPoint::at(0), 1, gy, 0));
    gt.add(DX(2 * m - 1), -1, -u({b, x2}));
    gt.add(DX(2 * m), -1, u({a, x2}));
    if (m == 1)
      gt.add(DX(2), 0, K(c, -1));
    s.casimirs.push_back(gradient(c, "gamma" + std::to_string(2 * m), ExpansionPoint::infinity(), -2, gt, 1));
    ay.set(DX(2 * m - 1), over(u({y, b}), 0));
    ay.set(DX(2 * m), over(-u({y, a}), 0));
    at.set(DX(2 * m - 1), R(-u({b, x2})));
    at.set(DX(2 * m), m == 1 ? poly(c, {u({a, x2}), K(c, -1)}) : R(u({a, x2})));
    ry.terms.push_back({2 * m - 1, 1, -1});
    rt.terms.push_back({2 * m, 1, 1});
    sum += u({y, b}) * u({x2, a}) - u({y, a}) * u({x2, b});
  }
  s.gen_y = {y, ay, ry};
  s.gen_t = {t, at, rt};
  rule(s.pde, "u", {y, t}, -sum, "u_yt");
  s.pde.ranking.weights[kSlotY] = 2;
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.description = "weights x=1, y=2, t=2";
  PdeSystem literal(c);
  rule(literal, "u", {y, t}, sum, "u_yt");
  literal.ranking = s.pde.ranking;
  s.variants.push_back({"family_literal_sign", "sum-form PDE read literally at m = 1", literal, std::nullopt, std::nullopt});
  s.variants.push_back({"psi_display_sign", "A_y with the opposite overall sign", std::nullopt, std::nullopt, -ay});
  s.family = FamilyInfo{"mod_pleb", k};
  finalize(s);
  return s;
}

EquationSpec husain_family(int k) {
  const int n = 2 * k;
  auto c = make_context(n, {"u"});
  JetFn u{c, "u"};
  const auto y = Y(), t = T();
  const GaussianRational I = GaussianRational::i(), half = GaussianRational::ratio(1, 2);
  const PoleMap pm{{I, 1}, {-I, 1}};
  auto frac = [&](const DiffPoly& c0, const DiffPoly& c1) { return LambdaRational(LambdaPoly(c, {c0, c1}), pm); };
  EquationSpec s(c);
  s.id = instance_id("husain", k, 1);
  s.title = "Husain heavenly equation";
  OneForm l(c);
  for (int i = 1; i <= n; ++i)
    l.set(DX(i), frac(-2 * u({t, X(i)}), 2 * u({y, X(i)})));
  s.seeds.push_back({"seed", l, true, true, kHusainSeedNote});
  VectorField ay(c), at(c);
  GeneratorRecipe ry{{}, ProjectionKind::Minus}, rt{{}, ProjectionKind::Minus};
  DiffPoly sum(c), literal_sum(c);
  for (int m = 1; m <= k; ++m) {
    const auto a = X(2 * m - 1), b = X(2 * m);
    for (int sign : {1, -1}) {
      const GaussianRational is = sign == 1 ? I : -I;
      Grad g;
      for (int i = 1; i <= n; ++i)
        g.list(DX(i));
      g.add(DX(2 * m - 1), 0, half * (-u({y, b}) - is * u({t, b})));
      g.add(DX(2 * m), 0, half * (u({y, a}) + is * u({t, a})));
      const int idx = sign == 1 ? 2 * m - 1 : 2 * m;
      s.casimirs.push_back(gradient(c, "gamma" + std::to_string(idx), ExpansionPoint::at(is), 1, g, 0));
      ry.terms.push_back({idx, 1, -1});
      rt.terms.push_back({idx, -is, -1});
    }
    ay.set(DX(2 * m - 1), frac(u({t, b}), -u({y, b})));
    ay.set(DX(2 * m), frac(-u({t, a}), u({y, a})));
    at.set(DX(2 * m - 1), frac(-u({y, b}), -u({t, b})));
    at.set(DX(2 * m), frac(u({y, a}), u({t, a})));
    sum += u({y, a}) * u({t, b}) - u({y, b}) * u({t, a});
    literal_sum += u({y, a}) * u({t, b}) - u({y, b}) * u({X(2), a});
  }
  s.gen_y = {y, ay, ry};
  s.gen_t = {t, at, rt};
  rule(s.pde, "u", {t, t}, -u({y, y}) - sum, "u_tt");
  s.pde.ranking.weights[kSlotY] = 2;
  s.pde.ranking.weights[kSlotT] = 3;
  s.pde.ranking.description = "weights x=1, y=2, t=3";
  PdeSystem literal(c);
  rule(literal, "u", {t, t}, -u({y, y}) - literal_sum, "u_tt");
  literal.ranking = s.pde.ranking;
  s.variants.push_back({"family_literal_index", "sum-form PDE read literally: x2-derivative in the last product",
                        literal, std::nullopt, std::nullopt});
  s.family = FamilyInfo{"husain", k};
  finalize(s);
  return s;
}

EquationSpec monge_family(int k) {
  const int n = 2 * k;
  auto c = k == 2 ? make_context(n, {"u", "r", "ry", "rt"}) : make_context(n, {"u", "r"});
  JetFn u{c, "u"}, r{c, "r"};
  const auto x1 = X(1), x2 = X(2), y = Y(), t = T();
  EquationSpec s(c);
  s.id = instance_id("monge", k, 2);
  s.title = "general Monge heavenly equation";
  auto inv = over(K(c, 1), 0);
  OneForm l(c);
  for (int i = 1; i <= n; ++i)
    l.set(DX(i), R(u({y, X(i)}) + u({t, X(i)})) + (i <= 2 ? inv : LambdaRational(c)));
  s.seeds.push_back({"hen**", l, true, true, kMongeSeedNote});
  auto yt = [&](IndependentVar v) { return u({y, v}) + u({t, v}); };
  auto listed = [&] {
    Grad g;
    for (int i = 1; i <= n; ++i)
      g.list(DX(i));
    return g;
  };
  Grad g1 = listed(), g2 = listed();
  g1.add(DX(2), 0, K(c, 1));
  g1.add(DX(1), 1, -yt(x2) - r());
  g1.add(DX(2), 1, r());
  g2.add(DX(1), 0, K(c, 1));
  g2.add(DX(1), 1, -r());
  g2.add(DX(2), 1, -yt(x1) + r());
  s.casimirs.push_back(gradient(c, "gamma1", ExpansionPoint::at(0), 2, g1, 1));
  s.casimirs.push_back(gradient(c, "gamma2", ExpansionPoint::at(0), 2, g2, 1));
  VectorField ay(c, {{DX(2), inv}}), at(c, {{DX(1), -inv}});
  GeneratorRecipe ry{{{1, 1, -1}}, ProjectionKind::Minus}, rt{{{2, -1, -1}}, ProjectionKind::Minus};
  DiffPoly sum(c);
  for (int m = 2; m <= k; ++m) {
    const auto a = X(2 * m - 1), b = X(2 * m);
    Grad go = listed(), ge = listed();
    go.add(DX(2 * m - 1), 0, -u({y, b}));
    go.add(DX(2 * m), 0, u({y, a}));
    go.add(DX(2), 1, u({t, a}) * u({y, b}) - u({t, b}) * u({y, a}));
    go.add(DX(2 * m - 1), 1, u({t, b}) * u({y, x2}) - u({t, x2}) * u({y, b}));
    go.add(DX(2 * m), 1, u({t, x2}) * u({y, a}) - u({t, a}) * u({y, x2}));
    ge.add(DX(2 * m - 1), 0, -u({t, b}));
    ge.add(DX(2 * m), 0, u({t, a}));
    ge.add(DX(1), 1, u({y, a}) * u({t, b}) - u({y, b}) * u({t, a}));
    ge.add(DX(2 * m - 1), 1, u({y, b}) * u({t, x1}) - u({y, x1}) * u({t, b}));
    ge.add(DX(2 * m), 1, u({y, x1}) * u({t, a}) - u({y, a}) * u({t, x1}));
    s.casimirs.push_back(gradient(c, "gamma" + std::to_string(2 * m - 1), ExpansionPoint::at(0), 2, go, 1));
    s.casimirs.push_back(gradient(c, "gamma" + std::to_string(2 * m), ExpansionPoint::at(0), 2, ge, 1));
    ay.set(DX(2 * m - 1), over(-u({y, b}), 0));
    ay.set(DX(2 * m), over(u({y, a}), 0));
    at.set(DX(2 * m - 1), over(-u({t, b}), 0));
    at.set(DX(2 * m), over(u({t, a}), 0));
    ry.terms.push_back({2 * m - 1, 1, -1});
    rt.terms.push_back({2 * m, 1, -1});
    sum += u({y, a}) * u({t, b}) - u({y, b}) * u({t, a});
  }
  s.gen_y = {y, ay, ry};
  s.gen_t = {t, at, rt};
  auto rhs = -u({y, x1}) - sum;
  rule(s.pde, "u", {t, x2}, rhs, "u_tx2");
  auto ut12 = rhs.total_derivative(x1);
  rule(s.pde, "r", {x2}, r({x1}) + u({y, x1, x2}) + ut12, "r_x2");
  if (k == 2) {
    JetFn ryf{c, "ry"}, rtf{c, "rt"};
    rule(s.pde, "ry", {x2}, ryf({x1}) + u({y, x1, x2}), "ry_x2");
    rule(s.pde, "rt", {x2}, rtf({x1}) + ut12, "rt_x2");
  }
  s.pde.ranking.weights[1] = 2;
  s.pde.ranking.weights[kSlotT] = 2;
  s.pde.ranking.dep_offset = k == 2 ? std::vector<int>{0, 4, 4, 4} : std::vector<int>{0, 4};
  s.pde.ranking.description = "weights x2=2, t=2, other directions 1; offsets r=ry=rt=4";
  s.nonlocal = k == 2 ? std::vector<std::string>{"r", "ry", "rt"} : std::vector<std::string>{"r"};
  s.notes.push_back(monge_nonlocal_note(k));
  s.family = FamilyInfo{"monge", k};
  if (k == 2)
    monge_alternative_seeds(s, u, JetFn{c, "ry"}, JetFn{c, "rt"});
  finalize(s);
  return s;
}

} // namespace heavenly::build
