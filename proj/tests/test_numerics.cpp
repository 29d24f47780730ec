#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "heavenly/catalog.hpp"
#include "heavenly/numerics.hpp"
#include "support.hpp"

using namespace heavenly;
using namespace hvtest;

namespace {

Point at(double x, double y, double t) {
  Point p{};
  p[0] = x;
  p[kSlotY] = y;
  p[kSlotT] = t;
  return p;
}

MultiIndex mi(int ox, int oy = 0, int ot = 0) {
  MultiIndex m{};
  m[0] = static_cast<std::uint8_t>(ox);
  m[kSlotY] = static_cast<std::uint8_t>(oy);
  m[kSlotT] = static_cast<std::uint8_t>(ot);
  return m;
}

Sample dkp_start() {
  Sample s;
  s.point = at(0.3, 0.2, 0.1);
  s.lambda = {0.4, 0.3};
  return s;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

TEST_CASE("expr derivatives match finite differences") {
  const Expr x = Expr::var(X()), y = Expr::var(Y()), t = Expr::var(T());
  const Expr e = sin(x + y) * exp(Expr(0.5) * t) + x.pow(3) * cos(t);
  const double h = 1e-5;
  for (int slot : {0, kSlotY, kSlotT}) {
    Point p = at(0.7, -0.3, 0.4), q = p;
    p[slot] += h;
    q[slot] -= h;
    cplx fd = (e.eval(p) - e.eval(q)) / (2 * h);
    CHECK(std::abs(e.derivative(slot).eval(at(0.7, -0.3, 0.4)) - fd) < 1e-8);
  }
  CHECK(Expr(3.0).derivative(0).is_zero());
  CHECK(y.derivative(0).is_zero());
  CHECK((x - x + Expr(0.0)).eval(at(1, 2, 3)) == cplx(0.0));
}

TEST_CASE("closed-form jets") {
  const auto& dkp = catalog_get("dkp");
  auto sol = builtin_solution("sine_xy", *dkp.ctx);
  const Point p = at(0.4, 0.9, -0.2);
  CHECK(std::abs(sol.value("u", mi(0), p) - std::sin(1.3)) < 1e-15);
  CHECK(std::abs(sol.value("u", mi(2, 1), p) + std::cos(1.3)) < 1e-15);
  CHECK(std::abs(sol.value("u", mi(1, 0, 1), p)) == 0.0);
  CHECK(&sol.jet("u", mi(2, 1)) == &sol.jet("u", mi(2, 1)));
  CHECK_THROWS_AS(builtin_solution("nope", *dkp.ctx), UnknownSolution);

  const auto& ew = catalog_get("einstein_weyl");
  ClosedFormSolution only_u("only_u", {{"u", Expr::var(Y())}});
  auto samples = random_samples(ew, 3, 1);
  CHECK_THROWS_AS(mms_residual(ew, only_u, samples), MissingJet);
}

TEST_CASE("random samples") {
  const auto& c1 = catalog_get("conformal1");
  auto poles = pole_alphabet(c1);
  CHECK(poles.size() == 2);
  auto a = random_samples(c1, 200, 42), b = random_samples(c1, 200, 42);
  REQUIRE(a.size() == 200);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].point == b[k].point);
    CHECK(a[k].lambda == b[k].lambda);
    CHECK(a[k].point[0].real() >= 0);
    CHECK(a[k].point[0].real() < 2 * std::numbers::pi);
    CHECK(std::abs(a[k].point[kSlotY].real()) <= 1);
    CHECK(std::abs(a[k].lambda.real()) <= 2);
    CHECK(std::abs(a[k].lambda.imag()) <= 2);
    for (auto p : poles)
      CHECK(std::abs(a[k].lambda - p) >= 0.1);
  }
  CHECK(random_samples(c1, 5, 43)[0].point != a[0].point);
}

TEST_CASE("manufactured residuals") {
  const auto& dkp = catalog_get("dkp");
  auto samples = random_samples(dkp, 50, 3);
  CHECK(mms_residual(dkp, builtin_solution("linear_y", *dkp.ctx), samples).max_abs == 0.0);
  CHECK(mms_residual(dkp, builtin_solution("quadratic", *dkp.ctx), samples).max_abs < 1e-14);

  // u = sin(x + y): u_yy + u u_xx + u_x^2 = -sin(x + y) + cos(2(x + y))
  auto sol = builtin_solution("sine_xy", *dkp.ctx);
  auto r = mms_residual(dkp, sol, samples);
  double expected = 0;
  for (const auto& s : samples) {
    cplx z = s.point[0] + s.point[kSlotY];
    expected = std::max(expected, std::abs(-std::sin(z) + std::cos(2.0 * z)));
  }
  CHECK(std::abs(r.max_abs - expected) < 1e-12);

  // central differences of u alone
  const Expr& u = sol.expr("u");
  const double h = 1e-3;
  for (const auto& s : samples) {
    auto f = [&](double dx, double dy, double dt) {
      Point p = s.point;
      p[0] += dx;
      p[kSlotY] += dy;
      p[kSlotT] += dt;
      return u.eval(p);
    };
    cplx ux = (f(h, 0, 0) - f(-h, 0, 0)) / (2 * h);
    cplx uxx = (f(h, 0, 0) - 2.0 * f(0, 0, 0) + f(-h, 0, 0)) / (h * h);
    cplx uyy = (f(0, h, 0) - 2.0 * f(0, 0, 0) + f(0, -h, 0)) / (h * h);
    cplx uxt = (f(h, 0, h) - f(h, 0, -h) - f(-h, 0, h) + f(-h, 0, -h)) / (4 * h * h);
    cplx fd = uxt + uyy + f(0, 0, 0) * uxx + ux * ux;
    CHECK(std::abs(dkp.pde.generators[0].eval(sol.assignment(*dkp.ctx, s.point)) - fd) < 1e-6);
  }

  const auto& pleb1 = catalog_get("pleb1");
  CHECK(std::abs(mms_residual(pleb1, builtin_solution("zero", *pleb1.ctx), samples).max_abs - 1.0) < 1e-15);
  CHECK(mms_residual(catalog_get("conformal1"), builtin_solution("separable", *dkp.ctx), samples).max_abs < 1e-14);
}

TEST_CASE("numeric Lax residual agrees with the symbolic relation") {
  for (const auto& e : catalog_list()) {
    const auto& spec = catalog_get(e.id);
    auto samples = random_samples(spec, 10, 11);
    for (const auto& name : builtin_solution_names()) {
      CAPTURE(e.id);
      CAPTURE(name);
      auto sol = builtin_solution(name, *spec.ctx);
      auto r = lax_numeric_check(spec, sol, samples);
      CHECK(r.ok);
      CHECK(r.relation_available);
      CHECK(r.max_condition_error <= 1e-9);
      CHECK(r.max_relation_error <= 1e-9);
      CHECK(r.max_bound_ratio <= 1 + 1e-9);
      if (r.skipped < r.samples && r.max_abs_pde == 0.0)
        CHECK(r.max_abs_residual < 1e-12);
    }
  }
}

TEST_CASE("numeric Lax residual on a non-solution") {
  const auto& dkp = catalog_get("dkp");
  auto samples = random_samples(dkp, 30, 5);
  auto r = lax_numeric_check(dkp, builtin_solution("sine_x", *dkp.ctx), samples);
  CHECK(r.ok);
  CHECK(r.max_abs_pde > 0.5);
  // R has only a λ-component, equal to minus the PDE value
  CHECK(std::abs(r.max_abs_residual - r.max_abs_pde) < 1e-12);
  CHECK(report_json(r)["ok"] == true);
}

TEST_CASE("numeric Lax check guards") {
  const auto& c1 = catalog_get("conformal1");
  Sample s;
  s.point = at(0.1, 0.2, 0.3);
  s.lambda = {1.05, 0.0};
  CHECK_THROWS_AS(lax_numeric_check(c1, builtin_solution("zero", *c1.ctx), {s}), SampleAtPole);

  const auto& c2 = catalog_get("conformal2");
  auto samples = random_samples(c2, 8, 2);
  auto r = lax_numeric_check(c2, builtin_solution("zero", *c2.ctx), samples);
  CHECK(r.skipped == 8);
  CHECK(!r.notes.empty());
}

TEST_CASE("flow commutator: linear solution integrates exactly") {
  const auto& dkp = catalog_get("dkp");
  auto r = flow_commutator_check(dkp, builtin_solution("linear_y", *dkp.ctx), dkp_start(), 0.05);
  REQUIRE(r.gaps.size() == 3);
  CHECK(r.steps == std::vector<double>{0.05, 0.025, 0.0125});
  CHECK(r.at_roundoff);
  CHECK(r.converges);
  CHECK(!r.order_four);
  CHECK(!r.notes.empty());
  auto c = flow_commutator_check(dkp, builtin_solution("constant", *dkp.ctx), dkp_start(), 0.05);
  CHECK(c.at_roundoff);
}

TEST_CASE("flow commutator: order four on a nonlinear solution") {
  const auto& c1 = catalog_get("conformal1");
  Sample s;
  s.point = at(0.3, 0.2, 0.1);
  s.lambda = {0.4, 0.8};
  auto r = flow_commutator_check(c1, builtin_solution("separable", *c1.ctx), s, 0.05);
  CHECK(!r.at_roundoff);
  CHECK(r.order_four);
  for (double q : r.ratios) {
    CHECK(q >= 12);
    CHECK(q <= 20);
  }
}

TEST_CASE("flow commutator: sine negative control") {
  const auto& dkp = catalog_get("dkp");
  auto r = flow_commutator_check(dkp, builtin_solution("sine_x", *dkp.ctx), dkp_start(), 0.05);
  CHECK(!r.at_roundoff);
  CHECK(!r.converges);
  CHECK(r.gaps.back() > 0.1);
  auto j = report_json(r);
  CHECK(j["converges"] == false);
  CHECK_THROWS_AS(flow_commutator_check(dkp, builtin_solution("sine_x", *dkp.ctx), dkp_start(), 0.0),
                  std::invalid_argument);
}

TEST_CASE("spectral derivatives") {
  Grid2 g;
  const Expr x = Expr::var(X()), y = Expr::var(Y());
  ClosedFormSolution f("f", {{"u", sin(x + Expr(2.0) * y) + cos(Expr(3.0) * x)}});
  auto u = sample_grid(g, f);
  auto ux = spectral_derivative(g, u, 1, 0);
  auto uyy = spectral_derivative(g, u, 0, 2);
  ClosedFormSolution fx("fx", {{"u", f.jet("u", mi(1))}}), fyy("fyy", {{"u", f.jet("u", mi(0, 2))}});
  CHECK(max_abs_diff(ux, sample_grid(g, fx)) < 1e-10);
  CHECK(max_abs_diff(uyy, sample_grid(g, fyy)) < 1e-10);
  CHECK(max_abs_diff(spectral_derivative(g, u, 0, 0), u) < 1e-14);
}

TEST_CASE("dKP solver: constant state is stationary") {
  Grid2 g;
  auto r = dkp_solve(g, dkp_initial("constant"), 0.1);
  CHECK(r.steps == 100);
  CHECK(r.diagnostics.size() == 101);
  for (double v : r.final_state)
    CHECK(std::abs(v - 0.5) < 1e-14);
  CHECK(r.mass_drift < 1e-12);
}

TEST_CASE("dKP solver: mass conservation and Richardson ratio") {
  Grid2 g;
  REQUIRE(g.nx == 64);
  REQUIRE(g.dt == 1e-3);
  for (const auto& name : {"single_mode", "oblique_mode"}) {
    CAPTURE(name);
    auto r = dkp_solve(g, dkp_initial(name), 1.0, 50);
    CHECK(r.steps == 1000);
    CHECK(r.mass_drift < 1e-10);
    CHECK(r.diagnostics.back().time == doctest::Approx(1.0));
    for (const auto& d : r.diagnostics)
      CHECK(d.lax_gap < 1e-3);
  }
  auto rr = dkp_richardson(g, sample_grid(g, dkp_initial("oblique_mode")), 1.0);
  CHECK(rr.fine > 1e-13);
  CHECK(rr.ratio >= 12);
  CHECK(rr.ratio <= 20);
}

TEST_CASE("dKP solver: aborts") {
  Grid2 g;
  g.dt = 0.1;
  ClosedFormSolution big("big", {{"u", Expr(5.0)}});
  try {
    dkp_solve(g, big, 1.0);
    FAIL("expected abort");
  } catch (const NumericAbort& e) {
    CHECK(e.step == 1);
    CHECK(std::string(e.what()).find("CFL") != std::string::npos);
  }
  Grid2 ok;
  auto init = sample_grid(ok, dkp_initial("single_mode"));
  init[7] = std::nan("");
  CHECK_THROWS_AS(dkp_solve(ok, init, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(dkp_solve(ok, std::vector<double>(10, 0.0), 0.1), std::invalid_argument);
  Grid2 bad;
  bad.nx = 48;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.nx = 64;
  bad.dt = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(dkp_initial("nope"), UnknownSolution);
}

TEST_CASE("dKP output") {
  Grid2 g;
  g.nx = g.ny = 16;
  auto r = dkp_solve(g, dkp_initial("single_mode"), 0.01, 5);
  std::ostringstream os;
  write_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "step,time,mass,max_abs_u,lax_gap");
  int rows = 0;
  while (std::getline(is, line))
    ++rows;
  CHECK(rows == static_cast<int>(r.diagnostics.size()));
  CHECK(rows == 3);
  auto j = summary_json(r);
  CHECK(j["nx"] == 16);
  CHECK(j["steps"] == 10);
  CHECK(j["mass_drift"].get<double>() < 1e-12);
}
