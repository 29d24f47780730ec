#include "doctest.h"

#include <chrono>

#include "heavenly/catalog.hpp"
#include "heavenly/verify.hpp"
#include "mutations.hpp"
#include "support.hpp"

using namespace heavenly;
using namespace hvtest;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string notes(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v)
    out += s + "\n";
  return out;
}

const Condition* find_condition(const ConditionSet& cs, Direction d, int power) {
  for (const auto& c : cs)
    if (c.direction == d && c.lambda_power == power)
      return &c;
  return nullptr;
}


} // namespace

TEST_CASE("lax verification of every base entry") {
  for (const auto& e : catalog_list()) {
    const auto& spec = catalog_get(e.id);
    auto t0 = std::chrono::steady_clock::now();
    auto r = verify_lax(spec);
    INFO(e.id, "\n", report_text(r, *spec.ctx));
    CHECK(r.status == Status::Pass);
    CHECK(seconds_since(t0) < 5.0);
    for (const auto& c : r.conditions) {
      CHECK(c.discharge.ok);
      CHECK(c.leftover.is_zero());
    }
  }
}

TEST_CASE("pleb1 uses certificates built from derivatives of P") {
  const auto& spec = catalog_get("pleb1");
  CHECK(spec.backend == Backend::Certificate);
  auto r = verify_lax(spec);
  REQUIRE(r.status == Status::Pass);
  REQUIRE(r.conditions.size() == 2);
  for (const auto& c : r.conditions) {
    CHECK(c.discharge.kind == "certificate");
    if (c.condition.direction == Direction::x(1))
      CHECK(c.discharge.detail == "(-1)*D[x2](P)");
    else
      CHECK(c.discharge.detail == "(1)*D[x1](P)");
  }
}

TEST_CASE("variants that read the source literally fail") {
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"dunajski", "printed_v_equation"},
      {"inverse_shabat", "strict_minus"},
      {"mod_pleb", "family_literal_sign"},
      {"mod_pleb", "psi_display_sign"},
      {"husain", "family_literal_index"}};
  for (const auto& [id, label] : expected) {
    const auto& spec = catalog_get(id);
    LaxOptions o;
    o.variant = label;
    auto r = verify_lax(spec, o);
    INFO(id, " ", label);
    CHECK(r.variant == label);
    CHECK(r.status == Status::Fail);
  }
  auto all = verify_lax_all_variants(catalog_get("mod_pleb"));
  REQUIRE(all.size() == 3);
  CHECK(all[0].variant.empty());
  CHECK(all[0].status == Status::Pass);
  CHECK_THROWS(apply_variant(catalog_get("dkp"), "nonexistent"));
}

TEST_CASE("family instances verify at k = 2 and 3") {
  for (const auto& f : catalog_families()) {
    for (int k : {2, 3}) {
      if (k < f.min_k)
        continue;
      auto t0 = std::chrono::steady_clock::now();
      auto spec = catalog_instantiate(f.id, k);
      auto r = verify_lax(spec);
      INFO(spec.id, "\n", report_text(r, *spec.ctx));
      CHECK(r.status == Status::Pass);
      CHECK(seconds_since(t0) < 30.0);
    }
  }
}

TEST_CASE("a wrong sign in the rewrite rule fails") {
  auto spec = catalog_get("dkp");
  REQUIRE(spec.pde.rules.size() == 1);
  spec.pde.rules[0].rhs = -spec.pde.rules[0].rhs;
  auto r = verify_lax(spec);
  CHECK(r.status == Status::Fail);
  bool failed = false;
  for (const auto& c : r.conditions)
    failed = failed || c.discharge.kind == "failed";
  CHECK(failed);
}

TEST_CASE("an unruled nonlocal jet leaves the check conditional") {
  auto spec = catalog_get("mod_einstein_weyl");
  auto& rules = spec.pde.rules;
  auto before = rules.size();
  std::erase_if(rules, [](const Rule& r) { return r.label == "a_x"; });
  REQUIRE(rules.size() + 1 == before);
  spec.pde.generators.clear();
  spec.pde.generator_labels.clear();
  auto r = verify_lax(spec);
  INFO(report_text(r, *spec.ctx));
  CHECK(r.status == Status::Conditional);
  bool unresolved = false;
  for (const auto& c : r.conditions)
    unresolved = unresolved || c.discharge.kind == "unresolved";
  CHECK(unresolved);
}

TEST_CASE("mod_einstein_weyl closes without a rule for the t-derivative of a") {
  const auto& spec = catalog_get("mod_einstein_weyl");
  auto r = verify_lax(spec);
  CHECK(r.status == Status::Pass);
  auto n = notes(r.notes);
  CHECK(n.find("no t-derivative of the nonlocal dependents") != std::string::npos);
  auto j = report_json(r, *spec.ctx);
  CHECK(j["status"] == "PASS");
  CHECK(j["notes"].size() == r.notes.size());
}

TEST_CASE("dKP residual identity") {
  const auto& spec = catalog_get("dkp");
  auto c = spec.ctx;
  auto res = compat_residual({T(), spec.gen_t.field}, {Y(), spec.gen_y.field});
  auto cs = extract_conditions(res);
  REQUIRE(cs.size() == 1);
  auto u = [&](std::initializer_list<IndependentVar> v) { return DiffPoly::jet(c, "u", v); };
  const Condition* lam = find_condition(cs, Direction::lambda(), 0);
  REQUIRE(lam != nullptr);
  CHECK(lam->polynomial == u({X(), T()}) + u({Y(), Y()}) + u({}) * u({X(), X()}) + u({X()}).pow(2));
  CHECK(res.get(Direction::x(1)).is_zero());
}

TEST_CASE("first conformal residual identity") {
  const auto& spec = catalog_get("conformal1");
  auto c = spec.ctx;
  auto res = compat_residual({T(), spec.gen_t.field}, {Y(), spec.gen_y.field});
  auto cs = extract_conditions(res);
  REQUIRE(cs.size() == 1);
  auto u = [&](std::initializer_list<IndependentVar> v) { return DiffPoly::jet(c, "u", v); };
  const auto& x = cs[0];
  CHECK(x.direction == Direction::x(1));
  CHECK(x.polynomial == u({Y(), T()}) + u({Y()}) * u({X(), T()}) - u({T()}) * u({X(), Y()}));
  CHECK(x.denominator == PoleMap{{GaussianRational(0), 1}, {GaussianRational(1), 1}});
}

TEST_CASE("emitted linear systems") {
  auto dkp = emit_lax_system(catalog_get("dkp"));
  CHECK(dkp.text == "ψ_t + (λ^2 + u)*ψ_x + (-u[x]*λ + u[y])*ψ_λ = 0; ψ_y + λ*ψ_x - u[x]*ψ_λ = 0");
  CHECK(dkp.json["equations"].size() == 2);
  auto c1 = emit_lax_system(catalog_get("conformal1"));
  CHECK(c1.text == "ψ_t + (-u[t] / λ)*ψ_x = 0; ψ_y + (-u[y] / (λ - 1))*ψ_x = 0");
}

TEST_CASE("casimir expansions pass at catalog thresholds") {
  for (const std::string id : {"einstein_weyl", "dkp", "mod_einstein_weyl", "dunajski", "conformal1", "inverse_shabat",
                               "pleb1", "mod_pleb", "husain", "monge"}) {
    const auto& spec = catalog_get(id);
    for (int i = 1; i <= static_cast<int>(spec.casimirs.size()); ++i) {
      auto r = casimir_residual_order(spec, i);
      INFO(id, "\n", report_text(r, *spec.ctx));
      CHECK(r.status == Status::Pass);
      CHECK(r.threshold == r.catalog_threshold);
      REQUIRE(r.first_nonvanishing_order.has_value() == (r.components.size() > 0 &&
                                                          std::any_of(r.components.begin(), r.components.end(),
                                                                      [](const ComponentOrder& o) {
                                                                        return o.first_nonvanishing.has_value();
                                                                      })));
      if (r.first_nonvanishing_order)
        CHECK(*r.first_nonvanishing_order >= r.threshold);
    }
  }
}

TEST_CASE("printed tails that overclaim are reported") {
  const auto& ew = catalog_get("einstein_weyl");
  auto r = casimir_residual_order(ew, 1);
  CHECK(r.status == Status::Pass);
  CHECK(r.tail == 1);
  CHECK(r.printed_tail == 2);
  REQUIRE(r.printed_tail_status.has_value());
  CHECK(*r.printed_tail_status == Status::Fail);

  const auto& c1 = catalog_get("conformal1");
  auto r1 = casimir_residual_order(c1, 1);
  CHECK(r1.tail == r1.printed_tail);
  CHECK_FALSE(r1.printed_tail_status.has_value());
}

TEST_CASE("corrected Einstein-Weyl gradient holds at the printed tail") {
  const auto& ew = catalog_get("einstein_weyl");
  auto c = ew.ctx;
  auto g = ew.casimirs[0];
  auto& xs = g.comps.at(Direction::x(1));
  std::vector<DiffPoly> coeffs;
  for (int k = xs.lowest(); k <= xs.known_through(); ++k)
    coeffs.push_back(xs.coeff(k));
  REQUIRE(xs.lowest() == -1);
  REQUIRE(coeffs.size() == 3);
  coeffs[2] = DiffPoly::jet(c, "u") - DiffPoly::jet(c, "v", {Y()});
  xs = LaurentSeries(c, xs.point(), xs.lowest(), coeffs, xs.known_through());
  CasimirOptions o;
  o.tail_override = g.printed_tail;
  auto fixed = casimir_residual_order(ew, 1, g, o);
  INFO(report_text(fixed, *c));
  CHECK(fixed.status == Status::Pass);
  auto printed = casimir_residual_order(ew, 1, ew.casimirs[0], o);
  CHECK(printed.status == Status::Fail);
}

TEST_CASE("sign mutations of the gradients fail") {
  for (const std::string id :
       {"einstein_weyl", "dkp", "conformal1", "conformal2", "inverse_shabat", "pleb1", "mod_pleb", "husain", "monge"}) {
    const auto& spec = catalog_get(id);
    for (int i = 1; i <= static_cast<int>(spec.casimirs.size()); ++i) {
      auto r = casimir_residual_order(spec, i, sign_mutated(spec.casimirs[i - 1]));
      INFO(id, " #", i, "\n", report_text(r, *spec.ctx));
      CHECK(r.status == Status::Fail);
    }
  }
}

TEST_CASE("second conformal gradient disagrees with the literal casimir equation") {
  const auto& spec = catalog_get("conformal2");
  REQUIRE(spec.casimirs.size() == 1);
  auto r = casimir_residual_order(spec, 1);
  INFO(report_text(r, *spec.ctx));
  CHECK(r.status == Status::Fail);
  REQUIRE(r.first_nonvanishing_order.has_value());
  CHECK(*r.first_nonvanishing_order == -2);
  for (int tail = r.printed_tail; tail > 0; --tail) {
    CasimirOptions o;
    o.tail_override = tail;
    CHECK(casimir_residual_order(spec, 1, o).status == Status::Fail);
  }
}

TEST_CASE("family casimirs") {
  for (int k : {2, 3}) {
    for (const std::string fam : {"mod_pleb", "husain", "monge"}) {
      auto spec = catalog_instantiate(fam, k);
      for (int i = 1; i <= static_cast<int>(spec.casimirs.size()); ++i) {
        INFO(spec.id, " #", i);
        CHECK(casimir_residual_order(spec, i).status == Status::Pass);
      }
    }
    auto p = catalog_instantiate("pleb1", k);
    REQUIRE(static_cast<int>(p.casimirs.size()) == 2 * k + 2);
    for (int i = 1; i <= 2 * k; ++i)
      CHECK(casimir_residual_order(p, i).status == Status::Fail);
    CHECK(p.casimirs[2 * k].label == "sum_y");
    CHECK(casimir_residual_order(p, 2 * k + 1).status == Status::Pass);
    CHECK(casimir_residual_order(p, 2 * k + 2).status == Status::Pass);
  }
}

TEST_CASE("tail probe agrees with an independent truncation") {
  // a longer tail can only raise the threshold
  const auto& spec = catalog_get("inverse_shabat");
  int last = -100;
  for (int tail = spec.casimirs[0].validated_tail; tail > spec.casimirs[0].validated_tail - 3; --tail) {
    CasimirOptions o;
    o.tail_override = tail;
    auto r = casimir_residual_order(spec, 1, o);
    CHECK(r.tail == tail);
    CHECK(r.status == Status::Pass);
    if (last != -100)
      CHECK(r.threshold < last);
    last = r.threshold;
  }
}

TEST_CASE("exactness of the seeds") {
  for (const std::string id : {"pleb1", "mod_pleb", "husain", "monge"}) {
    auto r = verify_exactness(catalog_get(id));
    INFO(id);
    CHECK(r.status == Status::Pass);
    for (const auto& s : r.seeds)
      CHECK(s.result.closed);
  }
  const auto& ew = catalog_get("einstein_weyl");
  auto r = verify_exactness(ew);
  CHECK(r.status == Status::Pass);
  REQUIRE(r.seeds.size() == 1);
  CHECK_FALSE(r.seeds[0].result.closed);
  REQUIRE(r.seeds[0].result.witness.size() == 1);
  auto c = ew.ctx;
  auto u = [&](std::initializer_list<IndependentVar> v) { return DiffPoly::jet(c, "u", v); };
  auto v = [&](std::initializer_list<IndependentVar> w) { return DiffPoly::jet(c, "v", w); };
  auto expected = LambdaRational(u({X()}) - v({X(), Y()}) - 2 * v({X()}) * v({X(), X()})) +
                  LambdaRational::lambda(c) * LambdaRational(v({X(), X()}));
  const auto& w = r.seeds[0].result.witness[0];
  auto value = w.i == Direction::lambda() ? w.value : -w.value;
  CHECK(value == expected);
  for (const std::string id : {"pleb1", "husain"}) {
    auto f = catalog_instantiate(id, 3);
    CHECK(verify_exactness(f).seeds[0].result.closed);
  }
}
