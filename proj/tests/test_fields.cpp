#include "doctest.h"

#include "heavenly/casimir.hpp"
#include "support.hpp"

using namespace heavenly;
using namespace hvtest;

namespace {

struct Dkp {
  ContextPtr c = make_context(1, {"u"});
  DiffPoly j(std::initializer_list<IndependentVar> v) const { return DiffPoly::jet(c, "u", v); }
  LambdaRational lam() const { return LambdaRational::lambda(c); }
  LambdaRational r(const DiffPoly& p) const { return LambdaRational(p); }

  VectorField at() const {
    VectorField f(c);
    f.set(Direction::x(1), lam() * lam() + r(j({})));
    f.set(Direction::lambda(), -(lam() * r(j({X()}))) + r(j({Y()})));
    return f;
  }
  VectorField ay() const {
    VectorField f(c);
    f.set(Direction::x(1), lam());
    f.set(Direction::lambda(), r(-j({X()})));
    return f;
  }
};

} // namespace

TEST_CASE("dKP bracket and time derivatives") {
  Dkp d;
  auto br = lie_bracket(d.at(), d.ay());
  CHECK(br.get(Direction::x(1)) == d.r(d.j({Y()})));
  auto lam_comp = d.r(-d.j({}) * d.j({X(), X()}) - d.j({X()}).pow(2)) - d.lam() * d.r(d.j({X(), Y()}));
  CHECK(br.get(Direction::lambda()) == lam_comp);

  auto dy = d.at().time_derivative(Y());
  CHECK(dy.get(Direction::x(1)) == d.r(d.j({Y()})));
  CHECK(dy.get(Direction::lambda()) == d.r(d.j({Y(), Y()})) - d.lam() * d.r(d.j({X(), Y()})));
  auto dt = d.ay().time_derivative(T());
  CHECK(dt.get(Direction::x(1)).is_zero());
  CHECK(dt.get(Direction::lambda()) == d.r(-d.j({X(), T()})));

  VectorField konst(d.c);
  konst.set(Direction::x(1), d.lam());
  CHECK(konst.time_derivative(T()).is_zero());
  VectorField dx(d.c);
  dx.set(Direction::x(1), d.r(DiffPoly(d.c, 1)));
  CHECK(lie_bracket(konst, dx).is_zero());
  CHECK(lie_bracket(d.at(), d.at()).is_zero());
}

TEST_CASE("dKP residual and conditions") {
  Dkp d;
  auto R = compat_residual({T(), d.at()}, {Y(), d.ay()});
  CHECK(R.get(Direction::x(1)).is_zero());
  auto pde = d.j({X(), T()}) + d.j({Y(), Y()}) + d.j({}) * d.j({X(), X()}) + d.j({X()}).pow(2);
  CHECK(R.get(Direction::lambda()) == d.r(pde));
  auto conds = extract_conditions(R);
  REQUIRE(conds.size() == 1);
  CHECK(conds[0].direction == Direction::lambda());
  CHECK(conds[0].lambda_power == 0);
  CHECK(conds[0].polynomial == pde);
  CHECK(extract_conditions(VectorField(d.c)).empty());
  CHECK(compat_residual({T(), d.ay()}, {Y(), d.ay()}) == d.ay().time_derivative(Y()) - d.ay().time_derivative(T()));
}

TEST_CASE("first conformal residual") {
  auto c = make_context(1, {"u"});
  auto j = [&](std::initializer_list<IndependentVar> v) { return DiffPoly::jet(c, "u", v); };
  VectorField ay(c), at(c);
  ay.set(Direction::x(1), LambdaRational::pole(-j({Y()}), 1, 1));
  at.set(Direction::x(1), LambdaRational::pole(-j({T()}), 0, 1));
  auto R = compat_residual({T(), at}, {Y(), ay});
  auto conds = extract_conditions(R);
  REQUIRE(conds.size() == 1);
  CHECK(conds[0].polynomial == j({Y(), T()}) + j({Y()}) * j({X(), T()}) - j({T()}) * j({X(), Y()}));
  CHECK(conds[0].denominator == PoleMap{{0, 1}, {1, 1}});
}

TEST_CASE("coadjoint action basics") {
  auto c = make_context(1, {"u"});
  OneForm l(c);
  l.set(Direction::lambda(), LambdaRational(DiffPoly(c, 1)));
  VectorField a(c);
  a.set(Direction::lambda(), LambdaRational::lambda(c));
  auto r = coadjoint_action(l, a);
  CHECK(r.get(Direction::lambda()) == LambdaRational(DiffPoly(c, 2)));
  CHECK(r.get(Direction::x(1)).is_zero());

  OneForm k(c);
  k.set(Direction::x(1), LambdaRational(DiffPoly(c, 3)));
  VectorField b(c);
  b.set(Direction::x(1), LambdaRational(DiffPoly(c, 5)));
  CHECK(coadjoint_action(k, b).is_zero());
  CHECK(coadjoint_action(OneForm(c), a).is_zero());
  CHECK(coadjoint_action(l, VectorField(c)).is_zero());
}

TEST_CASE("series coadjoint action agrees with rational route") {
  auto c = make_context(2, {"u"});
  std::mt19937_64 rng(5);
  std::vector<GaussianRational> alphabet{0, 1, -1, GaussianRational::i()};
  for (int trial = 0; trial < 10; ++trial) {
    auto rnd = [&]() {
      std::vector<DiffPoly> co;
      for (int k = 0; k < 2; ++k)
        co.push_back(random_poly(rng, c, 2, 1, 1));
      PoleMap poles;
      poles[alphabet[rng() % alphabet.size()]] = static_cast<int>(rng() % 2);
      return LambdaRational(LambdaPoly(c, co), poles);
    };
    OneForm l(c);
    VectorField a(c);
    for (auto d : {Direction::lambda(), Direction::x(1), Direction::x(2)}) {
      l.set(d, rnd());
      a.set(d, rnd());
    }
    auto exact = coadjoint_action(l, a);
    for (auto pt : {ExpansionPoint::infinity(), ExpansionPoint::at(alphabet[rng() % alphabet.size()])}) {
      SeriesField ls, as;
      for (const auto& [d, v] : l.components())
        ls.emplace(d, laurent_expand(v, pt, 4));
      for (const auto& [d, v] : a.components())
        as.emplace(d, laurent_expand(v, pt, 4));
      auto s = coadjoint_action(ls, as, c, pt);
      for (const auto& [d, v] : s) {
        auto e = laurent_expand(exact.get(d), pt, v.known_through());
        for (int k = std::min(v.lowest(), e.lowest()); k <= v.known_through(); ++k)
          CHECK(v.coeff(k) == e.coeff(k));
      }
    }
  }
}

TEST_CASE("exactness") {
  auto c = make_context(1, {"u", "v"});
  auto u = [&](std::initializer_list<IndependentVar> v) { return DiffPoly::jet(c, "u", v); };
  auto v = [&](std::initializer_list<IndependentVar> w) { return DiffPoly::jet(c, "v", w); };
  auto lam = LambdaRational::lambda(c);
  OneForm ew(c);
  ew.set(Direction::x(1), lam * LambdaRational(u({X()})) + LambdaRational(-2 * u({X()}) * v({X()}) - u({Y()})));
  ew.set(Direction::lambda(), lam * lam - lam * LambdaRational(v({X()})) + LambdaRational(v({Y()}) + v({X()}).pow(2)));
  auto res = exactness_check(ew);
  CHECK_FALSE(res.closed);
  REQUIRE(res.witness.size() == 1);
  CHECK(res.witness[0].i == Direction::lambda());
  auto expect = LambdaRational(u({X()}) - v({X(), Y()}) - 2 * v({X()}) * v({X(), X()})) + lam * LambdaRational(v({X(), X()}));
  CHECK(res.witness[0].value == expect);

  auto c2 = make_context(2, {"u"});
  auto f = LambdaRational(DiffPoly::jet(c2, "u", {X(1)})) + LambdaRational::lambda(c2) * LambdaRational(DiffPoly::coord(c2, 1)) +
           LambdaRational::pole(DiffPoly::jet(c2, "u", {Y()}), 0, 1);
  CHECK(exactness_check(differential(f, false)).closed);
  auto dl0 = differential(f, true);
  CHECK_FALSE(exactness_check(dl0).closed);
  CHECK(exactness_check(dl0, true).closed);
}
