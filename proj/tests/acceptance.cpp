#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "heavenly/catalog.hpp"
#include "heavenly/numerics.hpp"
#include "heavenly/verify.hpp"
#include "mutations.hpp"
#include "properties.hpp"

using namespace heavenly;
using namespace hvtest;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

struct Line {
  int id;
  std::string title;
  bool ok = true;
  std::vector<std::string> details;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      details.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { details.push_back(s); }
};

bool lax_clean(const LaxReport& r) {
  if (r.status != Status::Pass)
    return false;
  for (const auto& c : r.conditions)
    if (!c.discharge.ok || !c.leftover.is_zero())
      return false;
  return true;
}

Line criterion1() {
  Line l{1, "Lax-pair verification suite"};
  double slowest = 0;
  int passed = 0;
  const std::vector<std::string> ids{"einstein_weyl", "dkp",   "dunajski", "conformal1", "conformal2",
                                     "inverse_shabat", "pleb1", "mod_pleb", "husain",     "monge"};
  for (const auto& id : ids) {
    const auto& spec = catalog_get(id);
    auto t0 = Clock::now();
    auto r = verify_lax(spec);
    double dt = since(t0);
    slowest = std::max(slowest, dt);
    bool ok = lax_clean(r) && dt <= 5.0;
    passed += ok;
    l.check(ok, id + " " + status_name(r.status) + " in " + num(dt) + " s");
  }
  const auto& pleb1 = catalog_get("pleb1");
  bool certs = pleb1.backend == Backend::Certificate;
  for (const auto& c : verify_lax(pleb1).conditions)
    certs = certs && c.discharge.kind == "certificate";
  l.check(certs, "pleb1 discharged by certificates");
  l.note(std::to_string(passed) + "/" + std::to_string(ids.size()) + " entries PASS with zero leftover, slowest " +
         num(slowest) + " s");
  return l;
}

Line criterion2() {
  Line l{2, "family instantiation"};
  double slowest = 0;
  for (const std::string fam : {"pleb1", "mod_pleb", "husain", "monge"}) {
    const auto& base = catalog_get(fam);
    int base_k = 0;
    for (const auto& f : catalog_families())
      if (f.id == fam)
        base_k = f.base_k;
    auto inst = catalog_instantiate(fam, base_k);
    l.check(same_spec(inst, base) && spec_json(inst).dump() == spec_json(base).dump(),
            fam + " at k = " + std::to_string(base_k) + " differs from the base entry");
    for (int k : {2, 3}) {
      auto t0 = Clock::now();
      auto spec = catalog_instantiate(fam, k);
      auto r = verify_lax(spec);
      double dt = since(t0);
      slowest = std::max(slowest, dt);
      l.check(lax_clean(r) && dt <= 30.0, spec.id + " " + status_name(r.status) + " in " + num(dt) + " s");
    }
  }
  l.note("8 instances PASS, base-k instances identical, slowest " + num(slowest) + " s");
  return l;
}

Line criterion3() {
  Line l{3, "dKP residual identity"};
  const auto& spec = catalog_get("dkp");
  auto c = spec.ctx;
  auto u = [&](std::initializer_list<IndependentVar> v) { return DiffPoly::jet(c, "u", v); };
  auto res = compat_residual({T(), spec.gen_t.field}, {Y(), spec.gen_y.field});
  auto cs = extract_conditions(res);
  const DiffPoly expected = u({X(), T()}) + u({Y(), Y()}) + u({}) * u({X(), X()}) + u({X()}).pow(2);
  bool found = false;
  for (const auto& cond : cs)
    if (cond.direction == Direction::lambda())
      found = found || cond.polynomial == expected;
  l.check(cs.size() == 1 && found, "Λ condition equals u_xt + u_yy + u u_xx + u_x^2");
  l.check(res.get(Direction::x(1)).is_zero(), "X component of R vanishes");
  l.note("Λ: " + (cs.empty() ? std::string("none") : cs[0].polynomial.str()) + "; X: 0");
  return l;
}

Line criterion4() {
  Line l{4, "first conformal residual identity"};
  const auto& spec = catalog_get("conformal1");
  auto c = spec.ctx;
  auto u = [&](std::initializer_list<IndependentVar> v) { return DiffPoly::jet(c, "u", v); };
  auto cs = extract_conditions(compat_residual({T(), spec.gen_t.field}, {Y(), spec.gen_y.field}));
  bool ok = cs.size() == 1 && cs[0].direction == Direction::x(1) &&
            cs[0].polynomial == u({Y(), T()}) + u({Y()}) * u({X(), T()}) - u({T()}) * u({X(), Y()}) &&
            cs[0].denominator == PoleMap{{GaussianRational(0), 1}, {GaussianRational(1), 1}};
  l.check(ok, "cleared X condition u_yt + u_y u_xt - u_t u_xy over λ(λ - 1)");
  if (!cs.empty())
    l.note("X: " + cs[0].polynomial.str());
  return l;
}

Line criterion5() {
  Line l{5, "Casimir expansion suite"};
  int pass = 0, total = 0, mutants = 0, mutants_failed = 0;
  for (const std::string id :
       {"einstein_weyl", "conformal1", "conformal2", "inverse_shabat", "pleb1", "mod_pleb", "husain"}) {
    const auto& spec = catalog_get(id);
    for (int i = 1; i <= static_cast<int>(spec.casimirs.size()); ++i) {
      ++total;
      auto r = casimir_residual_order(spec, i);
      bool ok = r.status == Status::Pass && r.threshold == r.catalog_threshold;
      pass += ok;
      if (!ok) {
        std::string fn = r.first_nonvanishing_order ? std::to_string(*r.first_nonvanishing_order) : "none";
        std::string lead;
        for (const auto& c : r.components)
          if (c.first_nonvanishing && !c.leading_coefficient.empty() && lead.empty())
            lead = ", leading " + c.direction.str(*spec.ctx) + " coefficient " + c.leading_coefficient;
        l.check(false, id + " #" + std::to_string(i) + " " + status_name(r.status) + ": first nonvanishing order " +
                           fn + " below threshold " + std::to_string(r.threshold) + lead);
      }
      ++mutants;
      mutants_failed += casimir_residual_order(spec, i, sign_mutated(spec.casimirs[i - 1])).status == Status::Fail;
    }
  }
  l.check(mutants_failed == mutants, "every sign mutation FAILs");
  l.note(std::to_string(pass) + "/" + std::to_string(total) + " gradients PASS at catalog thresholds; " +
         std::to_string(mutants_failed) + "/" + std::to_string(mutants) + " sign mutations FAIL");
  return l;
}

Line criterion6() {
  Line l{6, "exactness suite"};
  for (const std::string id : {"pleb1", "mod_pleb", "husain", "monge"}) {
    auto r = verify_exactness(catalog_get(id));
    bool closed = !r.seeds.empty();
    for (const auto& s : r.seeds)
      closed = closed && s.result.closed;
    l.check(r.status == Status::Pass && closed, id + " seeds closed");
  }
  const auto& ew = catalog_get("einstein_weyl");
  auto r = verify_exactness(ew);
  auto c = ew.ctx;
  auto u = [&](std::initializer_list<IndependentVar> v) { return DiffPoly::jet(c, "u", v); };
  auto v = [&](std::initializer_list<IndependentVar> w) { return DiffPoly::jet(c, "v", w); };
  auto expected = LambdaRational(u({X()}) - v({X(), Y()}) - 2 * v({X()}) * v({X(), X()})) +
                  LambdaRational::lambda(c) * LambdaRational(v({X(), X()}));
  bool witness = r.seeds.size() == 1 && !r.seeds[0].result.closed && r.seeds[0].result.witness.size() == 1;
  if (witness) {
    const auto& w = r.seeds[0].result.witness[0];
    witness = (w.i == Direction::lambda() ? w.value : -w.value) == expected;
    l.note("einstein_weyl not closed, witness " + w.value.str());
  }
  l.check(r.status == Status::Pass && witness, "einstein_weyl seed not closed with the derived witness");
  return l;
}

Line criterion7() {
  Line l{7, "mod_einstein_weyl closure"};
  auto r = verify_lax(catalog_get("mod_einstein_weyl"));
  std::string notes;
  for (const auto& n : r.notes)
    notes += n + "; ";
  if (r.status == Status::Conditional) {
    bool named = false;
    for (const auto& c : r.conditions)
      named = named || (c.discharge.kind == "unresolved" && c.discharge.detail.find("a") != std::string::npos);
    l.check(named, "CONDITIONAL report names the unresolved closure");
    l.note("CONDITIONAL (exit 3): " + notes);
  } else {
    l.check(r.status == Status::Pass && lax_clean(r) && !r.notes.empty(), "PASS branch documents the discharge");
    l.note("PASS branch: " + notes);
  }
  return l;
}

Line criterion8() {
  Line l{8, "numerics"};
  auto t0 = Clock::now();
  Grid2 g;
  auto sim = dkp_solve(g, dkp_initial("single_mode"), 1.0, 10);
  l.check(sim.mass_drift < 1e-10, "mass drift " + num(sim.mass_drift));
  auto rich = dkp_richardson(g, sample_grid(g, dkp_initial("oblique_mode")), 1.0);
  l.check(rich.ratio >= 12 && rich.ratio <= 20, "Richardson ratio " + num(rich.ratio));
  l.note("64x64, dt = 1e-3, tmax = 1: mass drift " + num(sim.mass_drift) + ", Richardson ratio " + num(rich.ratio) +
         " (oblique mode)");

  const auto& dkp = catalog_get("dkp");
  Sample start;
  start.point[0] = 0.3;
  start.point[kSlotY] = 0.2;
  start.point[kSlotT] = 0.1;
  start.lambda = {0.4, 0.3};
  auto lin = flow_commutator_check(dkp, builtin_solution("linear_y", *dkp.ctx), start, 0.05);
  std::string gaps;
  for (double x : lin.gaps)
    gaps += " " + num(x);
  std::string ratios;
  for (double x : lin.ratios)
    ratios += " " + num(x);
  bool in_range = !lin.ratios.empty();
  for (double q : lin.ratios)
    in_range = in_range && q >= 12 && q <= 20;
  l.check(in_range, "u = α·y flow ratios in [12, 20]: gaps" + gaps + ", ratios" + ratios +
                        (lin.at_roundoff ? "; every gap is at roundoff because RK4 integrates these fields exactly"
                                         : ""));
  auto sine = flow_commutator_check(dkp, builtin_solution("sine_x", *dkp.ctx), start, 0.05);
  l.check(!sine.converges, "sine control does not converge");
  l.note("sine control gap stalls at " + num(sine.gaps.back()));

  const auto& c1 = catalog_get("conformal1");
  Sample s1 = start;
  s1.lambda = {0.4, 0.8};
  auto sep = flow_commutator_check(c1, builtin_solution("separable", *c1.ctx), s1, 0.05);
  std::string sep_ratios;
  for (double x : sep.ratios)
    sep_ratios += " " + num(x);
  l.note("supplementary: conformal1 with u = sin x (y + t) gives ratios" + sep_ratios +
         (sep.order_four ? " (order 4)" : ""));
  double dt = since(t0);
  l.check(dt <= 60, "runtime " + num(dt) + " s");
  l.note("runtime " + num(dt) + " s");
  return l;
}

Line criterion9() {
  Line l{9, "algebra property suite"};
  auto t0 = Clock::now();
  std::string summary;
  for (const auto& r : hvprop::all_properties(hvprop::kDefaultSeed, 1000)) {
    l.check(r.ok() && r.cases == 1000, r.name + ": " + r.first_failure);
    summary += r.name + " " + std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases) + "; ";
  }
  double dt = since(t0);
  l.check(dt <= 60, "runtime " + num(dt) + " s");
  l.note(summary + "runtime " + num(dt) + " s");
  return l;
}

} // namespace

int main() {
  int failed = 0, index = 0;
  for (auto f : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8,
                 criterion9}) {
    Line l{++index, "unevaluated"};
    try {
      l = f();
    } catch (const std::exception& e) {
      l.ok = false;
      l.details.push_back(std::string("exception: ") + e.what());
    }
    failed += !l.ok;
    std::cout << "criterion " << l.id << " " << (l.ok ? "PASS" : "FAIL") << ": " << l.title << "\n";
    for (const auto& d : l.details)
      std::cout << "    " << d << "\n";
    std::cout.flush();
  }
  std::cout << (9 - failed) << "/9 criteria pass\n";
  return failed ? 1 : 0;
}
