#include "heavenly/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <fftw3.h>

#include "heavenly/ideal.hpp"
#include "heavenly/vector_field.hpp"
#include "heavenly/verify.hpp"

namespace heavenly {

// ---------------------------------------------------------------- Expr

struct Expr::Node {
  enum class Kind { Const, Var, Add, Mul, Sin, Cos, Exp, Pow } kind;
  cplx c{0.0};
  int slot = 0;
  int n = 0;
  std::vector<Expr> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

} // namespace

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double c) : node_(std::make_shared<const Node>(Node{Node::Kind::Const, cplx(c), 0, 0, {}})) {}

Expr Expr::constant(cplx c) { return Expr(std::make_shared<const Node>(Node{Node::Kind::Const, c, 0, 0, {}})); }

Expr Expr::var(IndependentVar v) { return Expr(std::make_shared<const Node>(Node{Node::Kind::Var, 0.0, v.slot(), 0, {}})); }

bool Expr::is_zero() const { return node_->kind == Node::Kind::Const && node_->c == cplx(0.0); }

cplx Expr::eval(const Point& p) const {
  const Node& n = *node_;
  switch (n.kind) {
  case Node::Kind::Const:
    return n.c;
  case Node::Kind::Var:
    return p[n.slot];
  case Node::Kind::Add: {
    cplx s = 0.0;
    for (const auto& a : n.args)
      s += a.eval(p);
    return s;
  }
  case Node::Kind::Mul: {
    cplx s = 1.0;
    for (const auto& a : n.args)
      s *= a.eval(p);
    return s;
  }
  case Node::Kind::Sin:
    return std::sin(n.args[0].eval(p));
  case Node::Kind::Cos:
    return std::cos(n.args[0].eval(p));
  case Node::Kind::Exp:
    return std::exp(n.args[0].eval(p));
  case Node::Kind::Pow:
    return std::pow(n.args[0].eval(p), n.n);
  }
  return 0.0;
}

Expr operator+(const Expr& a, const Expr& b) {
  using K = Expr::Node::Kind;
  std::vector<Expr> args;
  cplx c = 0.0;
  for (const Expr* e : {&a, &b}) {
    if (e->node_->kind == K::Const)
      c += e->node_->c;
    else if (e->node_->kind == K::Add)
      for (const auto& x : e->node_->args) {
        if (x.node_->kind == K::Const)
          c += x.node_->c;
        else
          args.push_back(x);
      }
    else
      args.push_back(*e);
  }
  if (c != cplx(0.0))
    args.push_back(Expr::constant(c));
  if (args.empty())
    return Expr(0.0);
  if (args.size() == 1)
    return args[0];
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{K::Add, 0.0, 0, 0, std::move(args)}));
}

Expr operator*(const Expr& a, const Expr& b) {
  using K = Expr::Node::Kind;
  std::vector<Expr> args;
  cplx c = 1.0;
  for (const Expr* e : {&a, &b}) {
    if (e->node_->kind == K::Const)
      c *= e->node_->c;
    else if (e->node_->kind == K::Mul)
      for (const auto& x : e->node_->args) {
        if (x.node_->kind == K::Const)
          c *= x.node_->c;
        else
          args.push_back(x);
      }
    else
      args.push_back(*e);
  }
  if (c == cplx(0.0))
    return Expr(0.0);
  if (c != cplx(1.0))
    args.insert(args.begin(), Expr::constant(c));
  if (args.empty())
    return Expr::constant(c);
  if (args.size() == 1)
    return args[0];
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{K::Mul, 0.0, 0, 0, std::move(args)}));
}

Expr operator-(const Expr& a) { return Expr(-1.0) * a; }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr sin(const Expr& a) {
  if (a.node_->kind == Expr::Node::Kind::Const)
    return Expr::constant(std::sin(a.node_->c));
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Kind::Sin, 0.0, 0, 0, {a}}));
}

Expr cos(const Expr& a) {
  if (a.node_->kind == Expr::Node::Kind::Const)
    return Expr::constant(std::cos(a.node_->c));
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Kind::Cos, 0.0, 0, 0, {a}}));
}

Expr exp(const Expr& a) {
  if (a.node_->kind == Expr::Node::Kind::Const)
    return Expr::constant(std::exp(a.node_->c));
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Kind::Exp, 0.0, 0, 0, {a}}));
}

Expr Expr::pow(int k) const {
  if (k == 0)
    return Expr(1.0);
  if (k == 1)
    return *this;
  if (node_->kind == Node::Kind::Const)
    return constant(std::pow(node_->c, k));
  return Expr(std::make_shared<const Node>(Node{Node::Kind::Pow, 0.0, 0, k, {*this}}));
}

Expr Expr::derivative(int slot) const {
  const Node& n = *node_;
  switch (n.kind) {
  case Node::Kind::Const:
    return Expr(0.0);
  case Node::Kind::Var:
    return Expr(n.slot == slot ? 1.0 : 0.0);
  case Node::Kind::Add: {
    Expr s(0.0);
    for (const auto& a : n.args)
      s = s + a.derivative(slot);
    return s;
  }
  case Node::Kind::Mul: {
    Expr s(0.0);
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      Expr d = n.args[i].derivative(slot);
      if (d.is_zero())
        continue;
      Expr term = d;
      for (std::size_t j = 0; j < n.args.size(); ++j)
        if (j != i)
          term = term * n.args[j];
      s = s + term;
    }
    return s;
  }
  case Node::Kind::Sin:
    return cos(n.args[0]) * n.args[0].derivative(slot);
  case Node::Kind::Cos:
    return -(sin(n.args[0]) * n.args[0].derivative(slot));
  case Node::Kind::Exp:
    return *this * n.args[0].derivative(slot);
  case Node::Kind::Pow:
    return Expr(static_cast<double>(n.n)) * n.args[0].pow(n.n - 1) * n.args[0].derivative(slot);
  }
  return Expr(0.0);
}

std::string Expr::str() const {
  const Node& n = *node_;
  auto join = [&](const char* sep) {
    std::string out;
    for (const auto& a : n.args)
      out += (out.empty() ? "" : sep) + a.str();
    return "(" + out + ")";
  };
  switch (n.kind) {
  case Node::Kind::Const: {
    std::ostringstream os;
    if (n.c.imag() == 0)
      os << n.c.real();
    else
      os << "(" << n.c.real() << (n.c.imag() < 0 ? "" : "+") << n.c.imag() << "i)";
    return os.str();
  }
  case Node::Kind::Var:
    return n.slot == kSlotY ? "y" : n.slot == kSlotT ? "t" : "x" + std::to_string(n.slot + 1);
  case Node::Kind::Add:
    return join(" + ");
  case Node::Kind::Mul:
    return join("*");
  case Node::Kind::Sin:
    return "sin" + join("");
  case Node::Kind::Cos:
    return "cos" + join("");
  case Node::Kind::Exp:
    return "exp" + join("");
  case Node::Kind::Pow:
    return n.args[0].str() + "^" + std::to_string(n.n);
  }
  return "";
}

// ---------------------------------------------------------------- solutions

ClosedFormSolution::ClosedFormSolution(std::string name, std::map<std::string, Expr> deps,
                                       std::map<std::string, cplx> params)
    : name_(std::move(name)), deps_(std::move(deps)), params_(std::move(params)) {}

const Expr& ClosedFormSolution::expr(const std::string& dep) const {
  auto it = deps_.find(dep);
  if (it == deps_.end())
    throw MissingJet("solution '" + name_ + "' has no value for " + dep);
  return it->second;
}

const Expr& ClosedFormSolution::jet(const std::string& dep, const MultiIndex& mi) const {
  auto key = std::make_pair(dep, mi);
  if (auto it = cache_.find(key); it != cache_.end())
    return it->second;
  const Expr* out = nullptr;
  int slot = -1;
  for (int s = 0; s < kSlots; ++s)
    if (mi[s] > 0) {
      slot = s;
      break;
    }
  if (slot < 0) {
    out = &expr(dep);
    return cache_.emplace(key, *out).first->second;
  }
  MultiIndex lower = mi;
  --lower[slot];
  Expr d = jet(dep, lower).derivative(slot);
  return cache_.emplace(key, std::move(d)).first->second;
}

cplx ClosedFormSolution::value(const std::string& dep, const MultiIndex& mi, const Point& p) const {
  return jet(dep, mi).eval(p);
}

Assignment ClosedFormSolution::assignment(const JetContext& ctx, const Point& p) const {
  return [this, &ctx, p](const Symbol& s) -> std::optional<cplx> {
    switch (s.kind) {
    case SymbolKind::Jet: {
      const std::string& dep = ctx.dependents.at(s.id);
      if (!has(dep))
        throw MissingJet("solution '" + name_ + "' has no value for jet " + s.str(ctx));
      return value(dep, s.orders, p);
    }
    case SymbolKind::Coord:
      return p[s.id];
    case SymbolKind::Param: {
      auto it = params_.find(ctx.params.at(s.id));
      if (it == params_.end())
        throw MissingJet("solution '" + name_ + "' has no value for parameter " + s.str(ctx));
      return it->second;
    }
    }
    return std::nullopt;
  };
}

std::vector<std::string> builtin_solution_names() {
  return {"zero", "constant", "linear_y", "sine_x", "sine_xy", "y_sin_t", "quadratic", "separable"};
}

ClosedFormSolution builtin_solution(const std::string& name, const JetContext& ctx) {
  const Expr x = Expr::var(IndependentVar::x(1)), y = Expr::var(IndependentVar::y()), t = Expr::var(IndependentVar::t());
  Expr e;
  if (name == "zero")
    e = Expr(0.0);
  else if (name == "constant")
    e = Expr(0.7);
  else if (name == "linear_y")
    e = Expr(0.5) * y;
  else if (name == "sine_x")
    e = sin(x);
  else if (name == "sine_xy")
    e = sin(x + y);
  else if (name == "y_sin_t")
    e = y * sin(t) + cos(t);
  else if (name == "quadratic")
    e = x - Expr(0.5) * y.pow(2);
  else if (name == "separable")
    e = sin(x) * (y + t);
  else
    throw UnknownSolution("unknown built-in solution '" + name + "'");
  std::map<std::string, Expr> deps;
  for (std::size_t i = 0; i < ctx.dependents.size(); ++i)
    deps.emplace(ctx.dependents[i], i == 0 ? e : Expr(0.0));
  std::map<std::string, cplx> params;
  for (const auto& p : ctx.params)
    params.emplace(p, 1.0);
  return ClosedFormSolution(name, std::move(deps), std::move(params));
}

// ---------------------------------------------------------------- samples

std::vector<cplx> pole_alphabet(const EquationSpec& spec) {
  std::vector<cplx> out;
  for (const VectorField* f : {&spec.gen_t.field, &spec.gen_y.field})
    for (const auto& [d, c] : f->components())
      for (const auto& [p, m] : c.poles()) {
        cplx z = p.to_complex();
        if (std::find(out.begin(), out.end(), z) == out.end())
          out.push_back(z);
      }
  return out;
}

namespace {

double pole_distance(const std::vector<cplx>& poles, cplx lambda) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : poles)
    d = std::min(d, std::abs(lambda - p));
  return d;
}

Point point_of(const Sample& s) { return s.point; }

} // namespace

std::vector<Sample> random_samples(const EquationSpec& spec, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi), unit(-1.0, 1.0), box(-2.0, 2.0);
  const auto poles = pole_alphabet(spec);
  std::vector<Sample> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Sample s;
    for (int i = 0; i < spec.ctx->n; ++i)
      s.point[i] = angle(rng);
    s.point[kSlotY] = unit(rng);
    s.point[kSlotT] = unit(rng);
    s.lambda = {box(rng), box(rng)};
    if (pole_distance(poles, s.lambda) >= 0.1)
      out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------- residuals

MmsReport mms_residual(const EquationSpec& spec, const ClosedFormSolution& sol, const std::vector<Sample>& samples) {
  MmsReport r;
  r.equation_id = spec.id;
  r.solution = sol.name();
  r.samples = static_cast<int>(samples.size());
  double total = 0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < spec.pde.generators.size(); ++k) {
    ResidualNorms n;
    n.label = k < spec.pde.generator_labels.size() ? spec.pde.generator_labels[k] : "g" + std::to_string(k + 1);
    double sum = 0;
    for (const auto& s : samples) {
      double v = std::abs(spec.pde.generators[k].eval(sol.assignment(*spec.ctx, point_of(s))));
      n.max_abs = std::max(n.max_abs, v);
      sum += v;
    }
    n.mean_abs = samples.empty() ? 0 : sum / static_cast<double>(samples.size());
    r.max_abs = std::max(r.max_abs, n.max_abs);
    total += sum;
    count += samples.size();
    r.generators.push_back(n);
  }
  r.mean_abs = count ? total / static_cast<double>(count) : 0;
  return r;
}

namespace {

bool close_rel(cplx a, cplx b, double tol, double* err) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  double e = std::abs(a - b) / scale;
  *err = std::max(*err, e);
  return e <= tol;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

cplx denominator_value(const PoleMap& poles, cplx lambda) {
  cplx d = 1.0;
  for (const auto& [p, m] : poles)
    d *= std::pow(lambda - p.to_complex(), m);
  return d;
}

struct Relation {
  const Condition* condition;
  std::optional<Certificate> certificate;
  std::vector<DiffPoly> prolonged;
};

} // namespace

LaxNumericReport lax_numeric_check(const EquationSpec& spec, const ClosedFormSolution& sol,
                                   const std::vector<Sample>& samples) {
  constexpr double tol = 1e-9;
  LaxNumericReport r;
  r.equation_id = spec.id;
  r.solution = sol.name();
  r.samples = static_cast<int>(samples.size());
  const auto poles = pole_alphabet(spec);
  for (const auto& s : samples)
    if (pole_distance(poles, s.lambda) < 0.1)
      throw SampleAtPole("sample λ = (" + std::to_string(s.lambda.real()) + ", " + std::to_string(s.lambda.imag()) +
                         ") lies within 0.1 of a pole");

  const VectorField res = compat_residual({spec.gen_t.tau, spec.gen_t.field}, {spec.gen_y.tau, spec.gen_y.field});
  const ConditionSet conds = extract_conditions(res);
  const CertBounds bounds = default_cert_bounds();
  std::vector<Relation> rel;
  for (const auto& c : conds) {
    Relation x{&c, std::nullopt, {}};
    auto m = ideal_membership(c.polynomial, spec.pde, bounds.order, bounds.degree);
    if (m.found()) {
      x.certificate = m.certificate;
      for (const auto& t : x.certificate->terms)
        x.prolonged.push_back(spec.pde.generators.at(t.generator).total_derivative(t.word));
    } else {
      r.relation_available = false;
    }
    rel.push_back(std::move(x));
  }
  if (!r.relation_available)
    r.notes.push_back("no certificate within the search bounds for some condition; bound check skipped for it");

  bool ok = true;
  for (const auto& s : samples) {
    Assignment a = sol.assignment(*spec.ctx, s.point);
    std::map<Direction, cplx> rv;
    bool singular = false;
    for (const auto& [d, c] : res.components()) {
      cplx v = c.eval(a, s.lambda);
      singular = singular || !finite(v);
      rv[d] = v;
    }
    std::vector<cplx> gv;
    for (const auto& g : spec.pde.generators) {
      cplx v = g.eval(a);
      singular = singular || !finite(v);
      gv.push_back(v);
    }
    std::map<Direction, cplx> from_conditions, from_relation;
    std::map<Direction, double> bound;
    for (const auto& x : rel) {
      const Condition& c = *x.condition;
      cplx mult = DiffPoly::term(spec.ctx, c.jet_multiplier, GaussianRational(1)).eval(a);
      cplx scale = std::pow(s.lambda, c.lambda_power) / (mult * denominator_value(c.denominator, s.lambda));
      singular = singular || !finite(scale);
      from_conditions[c.direction] += scale * c.polynomial.eval(a);
      if (!x.certificate)
        continue;
      cplx sum = 0.0;
      double abs_sum = 0;
      for (std::size_t k = 0; k < x.certificate->terms.size(); ++k) {
        cplx q = x.certificate->terms[k].multiplier.eval(a);
        cplx g = x.prolonged[k].eval(a);
        sum += q * g;
        abs_sum += std::abs(q) * std::abs(g);
      }
      from_relation[c.direction] += scale * sum;
      bound[c.direction] += std::abs(scale) * abs_sum;
    }
    if (singular) {
      ++r.skipped;
      continue;
    }
    for (auto v : gv)
      r.max_abs_pde = std::max(r.max_abs_pde, std::abs(v));
    for (const auto& [d, v] : rv) {
      r.max_abs_residual = std::max(r.max_abs_residual, std::abs(v));
      ok = close_rel(v, from_conditions[d], tol, &r.max_condition_error) && ok;
      if (r.relation_available) {
        ok = close_rel(v, from_relation[d], tol, &r.max_relation_error) && ok;
        double b = bound[d];
        if (b > 0)
          r.max_bound_ratio = std::max(r.max_bound_ratio, std::abs(v) / b);
        else if (std::abs(v) > tol)
          ok = false;
      }
    }
  }
  if (r.skipped)
    r.notes.push_back(std::to_string(r.skipped) + " samples skipped: a jet denominator vanishes");
  r.ok = ok && r.max_bound_ratio <= 1 + tol;
  return r;
}

// ---------------------------------------------------------------- flows

namespace {

// state: slots of Point plus λ at index kSlots
using State = std::array<cplx, kSlots + 1>;

struct FlowField {
  const EquationSpec& spec;
  const ClosedFormSolution& sol;
  const GeneratorSpec& gen;
  const std::vector<cplx>& poles;

  State operator()(const State& z) const {
    Point p{};
    std::copy(z.begin(), z.begin() + kSlots, p.begin());
    const cplx lambda = z[kSlots];
    if (pole_distance(poles, lambda) < 1e-6)
      throw SampleAtPole("characteristic reaches a λ-pole");
    Assignment a = sol.assignment(*spec.ctx, p);
    State out{};
    out[gen.tau.slot()] = 1.0;
    for (const auto& [d, c] : gen.field.components()) {
      cplx v = c.eval(a, lambda);
      if (d.is_lambda())
        out[kSlots] = v;
      else
        out[d.index - 1] = v;
    }
    return out;
  }
};

State axpy(const State& z, cplx h, const State& k) {
  State out = z;
  for (std::size_t i = 0; i < z.size(); ++i)
    out[i] += h * k[i];
  return out;
}

State rk4_flow(const FlowField& f, State z, double time, double h) {
  const long n = std::lround(time / h);
  const double step = time / static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    State k1 = f(z);
    State k2 = f(axpy(z, step / 2, k1));
    State k3 = f(axpy(z, step / 2, k2));
    State k4 = f(axpy(z, step, k3));
    for (std::size_t j = 0; j < z.size(); ++j)
      z[j] += step / 6 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return z;
}

} // namespace

FlowReport flow_commutator_check(const EquationSpec& spec, const ClosedFormSolution& sol, const Sample& start, double h,
                                 double s, double r) {
  if (!(h > 0) || !(s > 0) || !(r > 0))
    throw std::invalid_argument("flow step and times must be positive");
  FlowReport rep;
  rep.equation_id = spec.id;
  rep.solution = sol.name();
  rep.s = s;
  rep.r = r;
  const auto poles = pole_alphabet(spec);
  FlowField ft{spec, sol, spec.gen_t, poles}, fy{spec, sol, spec.gen_y, poles};
  State z0{};
  std::copy(start.point.begin(), start.point.end(), z0.begin());
  z0[kSlots] = start.lambda;
  for (double step : {h, h / 2, h / 4}) {
    State a = rk4_flow(fy, rk4_flow(ft, z0, s, step), r, step);
    State b = rk4_flow(ft, rk4_flow(fy, z0, r, step), s, step);
    double gap = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      gap = std::max(gap, std::abs(a[i] - b[i]));
    if (!std::isfinite(gap))
      throw std::runtime_error("flow integration produced a non-finite state");
    rep.steps.push_back(step);
    rep.gaps.push_back(gap);
  }
  rep.at_roundoff = std::all_of(rep.gaps.begin(), rep.gaps.end(), [](double g) { return g < kRoundoffFloor; });
  for (std::size_t i = 0; i + 1 < rep.gaps.size(); ++i)
    rep.ratios.push_back(rep.gaps[i + 1] > 0 ? rep.gaps[i] / rep.gaps[i + 1] : std::numeric_limits<double>::infinity());
  rep.converges = rep.at_roundoff || rep.gaps.back() < rep.gaps.front() / 8;
  rep.order_four = !rep.at_roundoff && std::all_of(rep.ratios.begin(), rep.ratios.end(),
                                                   [](double q) { return q >= 12 && q <= 20; });
  if (rep.at_roundoff)
    rep.notes.push_back("all gaps below 1e-12: the integrator is exact for these fields and the ratio is undefined");
  else if (!rep.converges)
    rep.notes.push_back("gap does not decrease with the step: the flows do not commute");
  return rep;
}

// ---------------------------------------------------------------- dKP solver

double Grid2::dx() const { return 2 * std::numbers::pi / nx; }
double Grid2::dy() const { return 2 * std::numbers::pi / ny; }

void Grid2::validate() const {
  auto pow2 = [](int n) { return n >= 8 && (n & (n - 1)) == 0; };
  if (!pow2(nx) || !pow2(ny))
    throw std::invalid_argument("grid sizes must be powers of two and at least 8");
  if (!(dt > 0))
    throw std::invalid_argument("dt must be positive");
  if (!(cfl > 0))
    throw std::invalid_argument("cfl constant must be positive");
}

namespace {

class Spectral {
public:
  explicit Spectral(const Grid2& g) : nx_(g.nx), ny_(g.ny), nk_(g.nx / 2 + 1) {
    real_.assign(static_cast<std::size_t>(nx_) * ny_, 0.0);
    spec_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * ny_ * nk_));
    fwd_ = fftw_plan_dft_r2c_2d(ny_, nx_, real_.data(), spec_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_2d(ny_, nx_, spec_, real_.data(), FFTW_ESTIMATE);
  }
  ~Spectral() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(spec_);
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  std::size_t modes() const { return static_cast<std::size_t>(ny_) * nk_; }
  int kx(std::size_t m) const { return static_cast<int>(m % nk_); }
  int ky(std::size_t m) const {
    int j = static_cast<int>(m / nk_);
    return j <= ny_ / 2 ? j : j - ny_;
  }
  bool nyquist(std::size_t m) const { return kx(m) == nx_ / 2 || ky(m) == ny_ / 2 || ky(m) == -ny_ / 2; }
  bool resolved(std::size_t m) const { return 3 * kx(m) < nx_ && 3 * std::abs(ky(m)) < ny_; }

  std::vector<cplx> forward(const std::vector<double>& u) {
    std::copy(u.begin(), u.end(), real_.begin());
    fftw_execute(fwd_);
    std::vector<cplx> out(modes());
    const double norm = 1.0 / (static_cast<double>(nx_) * ny_);
    for (std::size_t m = 0; m < out.size(); ++m)
      out[m] = cplx(spec_[m][0], spec_[m][1]) * norm;
    return out;
  }
  std::vector<double> backward(const std::vector<cplx>& h) {
    for (std::size_t m = 0; m < h.size(); ++m) {
      spec_[m][0] = h[m].real();
      spec_[m][1] = h[m].imag();
    }
    fftw_execute(bwd_);
    return real_;
  }
  // (i kx)^ox (i ky)^oy; odd orders drop the Nyquist modes
  std::vector<cplx> derivative(const std::vector<cplx>& h, int ox, int oy) const {
    std::vector<cplx> out(h.size());
    const cplx I(0, 1);
    for (std::size_t m = 0; m < h.size(); ++m) {
      if (((ox % 2) || (oy % 2)) && nyquist(m)) {
        out[m] = 0.0;
        continue;
      }
      out[m] = h[m] * std::pow(I * static_cast<double>(kx(m)), ox) * std::pow(I * static_cast<double>(ky(m)), oy);
    }
    return out;
  }

private:
  int nx_, ny_, nk_;
  std::vector<double> real_;
  fftw_complex* spec_;
  fftw_plan fwd_, bwd_;
};

struct DkpRhs {
  Spectral& fft;

  std::vector<cplx> operator()(const std::vector<cplx>& h) const {
    auto u = fft.backward(h);
    auto ux = fft.backward(fft.derivative(h, 1, 0));
    for (std::size_t i = 0; i < u.size(); ++i)
      ux[i] *= u[i];
    auto nl = fft.forward(ux);
    std::vector<cplx> out(h.size());
    for (std::size_t m = 0; m < h.size(); ++m) {
      if (!fft.resolved(m))
        continue;
      const int kx = fft.kx(m), ky = fft.ky(m);
      cplx lin = kx == 0 ? cplx(0.0) : cplx(0, -static_cast<double>(ky) * ky / kx) * h[m];
      out[m] = -nl[m] + lin;
    }
    return out;
  }
};

std::vector<cplx> axpy(const std::vector<cplx>& a, double s, const std::vector<cplx>& b) {
  std::vector<cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[i] + s * b[i];
  return out;
}

DkpStep diagnose(Spectral& fft, const DkpRhs& rhs, const std::vector<cplx>& h, const Grid2& g, int step, double time) {
  DkpStep d;
  d.step = step;
  d.time = time;
  auto u = fft.backward(h);
  double mass = 0;
  for (double v : u) {
    mass += v;
    d.max_abs_u = std::max(d.max_abs_u, std::abs(v));
  }
  d.mass = mass * g.dx() * g.dy();
  auto ut = rhs(h);
  auto uxt = fft.backward(fft.derivative(ut, 1, 0));
  auto uyy = fft.backward(fft.derivative(h, 0, 2));
  auto ux = fft.backward(fft.derivative(h, 1, 0));
  auto uxx = fft.backward(fft.derivative(h, 2, 0));
  for (std::size_t i = 0; i < u.size(); ++i)
    d.lax_gap = std::max(d.lax_gap, std::abs(uxt[i] + uyy[i] + u[i] * uxx[i] + ux[i] * ux[i]));
  return d;
}

bool all_finite(const std::vector<double>& u) {
  return std::all_of(u.begin(), u.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

std::vector<double> sample_grid(const Grid2& g, const ClosedFormSolution& sol, const std::string& dep, double t) {
  g.validate();
  std::vector<double> out(static_cast<std::size_t>(g.nx) * g.ny);
  Point p{};
  p[kSlotT] = t;
  const Expr& e = sol.expr(dep);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      p[0] = i * g.dx();
      p[kSlotY] = j * g.dy();
      out[static_cast<std::size_t>(j) * g.nx + i] = e.eval(p).real();
    }
  return out;
}

std::vector<double> spectral_derivative(const Grid2& g, const std::vector<double>& u, int order_x, int order_y) {
  g.validate();
  Spectral fft(g);
  return fft.backward(fft.derivative(fft.forward(u), order_x, order_y));
}

DkpResult dkp_solve(const Grid2& g, const std::vector<double>& init, double tmax, int record_every) {
  g.validate();
  if (init.size() != static_cast<std::size_t>(g.nx) * g.ny)
    throw std::invalid_argument("initial data does not match the grid");
  if (!all_finite(init))
    throw std::invalid_argument("initial data is not finite");
  if (!(tmax >= 0))
    throw std::invalid_argument("tmax must be non-negative");
  record_every = std::max(record_every, 1);
  DkpResult r;
  r.grid = g;
  r.tmax = tmax;
  r.initial = init;
  r.steps = static_cast<int>(std::lround(tmax / g.dt));
  const double dt = r.steps ? tmax / r.steps : g.dt;
  Spectral fft(g);
  DkpRhs rhs{fft};
  auto h = fft.forward(init);
  auto d0 = diagnose(fft, rhs, h, g, 0, 0);
  r.diagnostics.push_back(d0);
  const double hmin = std::min(g.dx(), g.dy());
  double max_u = d0.max_abs_u;
  for (int n = 1; n <= r.steps; ++n) {
    if (max_u > 0 && dt > g.cfl * hmin / max_u)
      throw NumericAbort("CFL violation at step " + std::to_string(n) + ": dt = " + std::to_string(dt) +
                             " exceeds " + std::to_string(g.cfl * hmin / max_u),
                         n);
    auto k1 = rhs(h);
    auto k2 = rhs(axpy(h, dt / 2, k1));
    auto k3 = rhs(axpy(h, dt / 2, k2));
    auto k4 = rhs(axpy(h, dt, k3));
    for (std::size_t m = 0; m < h.size(); ++m)
      h[m] += dt / 6 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    auto u = fft.backward(h);
    if (!all_finite(u))
      throw NumericAbort("non-finite value at step " + std::to_string(n), n);
    max_u = 0;
    for (double v : u)
      max_u = std::max(max_u, std::abs(v));
    if (n % record_every == 0 || n == r.steps) {
      auto d = diagnose(fft, rhs, h, g, n, n * dt);
      r.mass_drift = std::max(r.mass_drift, std::abs(d.mass - d0.mass));
      r.diagnostics.push_back(d);
    }
  }
  r.final_state = fft.backward(h);
  return r;
}

DkpResult dkp_solve(const Grid2& g, const ClosedFormSolution& init, double tmax, int record_every) {
  return dkp_solve(g, sample_grid(g, init), tmax, record_every);
}

std::vector<std::string> dkp_initial_names() { return {"constant", "single_mode", "oblique_mode"}; }

ClosedFormSolution dkp_initial(const std::string& name) {
  const Expr x = Expr::var(IndependentVar::x(1)), y = Expr::var(IndependentVar::y());
  Expr e;
  if (name == "constant")
    e = Expr(0.5);
  else if (name == "single_mode")
    e = Expr(0.1) * sin(x);
  else if (name == "oblique_mode")
    e = Expr(0.1) * sin(x + Expr(4.0) * y);
  else
    throw UnknownSolution("unknown initial condition '" + name + "'");
  return ClosedFormSolution(name, {{"u", e}});
}

RichardsonResult dkp_richardson(const Grid2& g, const std::vector<double>& init, double tmax) {
  RichardsonResult r;
  r.dt = g.dt;
  std::vector<std::vector<double>> finals;
  for (int level = 0; level < 3; ++level) {
    Grid2 gl = g;
    gl.dt = g.dt / (1 << level);
    finals.push_back(dkp_solve(gl, init, tmax, std::numeric_limits<int>::max()).final_state);
  }
  for (std::size_t i = 0; i < init.size(); ++i) {
    r.coarse = std::max(r.coarse, std::abs(finals[0][i] - finals[1][i]));
    r.fine = std::max(r.fine, std::abs(finals[1][i] - finals[2][i]));
  }
  r.ratio = r.fine > 0 ? r.coarse / r.fine : std::numeric_limits<double>::infinity();
  return r;
}

void write_csv(std::ostream& os, const DkpResult& r) {
  os << "step,time,mass,max_abs_u,lax_gap\n";
  os.precision(17);
  for (const auto& d : r.diagnostics)
    os << d.step << "," << d.time << "," << d.mass << "," << d.max_abs_u << "," << d.lax_gap << "\n";
}

using nlohmann::ordered_json;

ordered_json summary_json(const DkpResult& r) {
  double max_gap = 0;
  for (const auto& d : r.diagnostics)
    max_gap = std::max(max_gap, d.lax_gap);
  double change = 0;
  for (std::size_t i = 0; i < r.initial.size() && i < r.final_state.size(); ++i)
    change = std::max(change, std::abs(r.final_state[i] - r.initial[i]));
  const auto& first = r.diagnostics.front();
  const auto& last = r.diagnostics.back();
  return {{"equation_id", "dkp"},
          {"nx", r.grid.nx},
          {"ny", r.grid.ny},
          {"dt", r.grid.dt},
          {"tmax", r.tmax},
          {"steps", r.steps},
          {"mass_initial", first.mass},
          {"mass_final", last.mass},
          {"mass_drift", r.mass_drift},
          {"max_abs_u_final", last.max_abs_u},
          {"max_abs_change", change},
          {"max_lax_gap", max_gap}};
}

ordered_json report_json(const MmsReport& r) {
  ordered_json gens = ordered_json::array();
  for (const auto& g : r.generators)
    gens.push_back({{"label", g.label}, {"max_abs", g.max_abs}, {"mean_abs", g.mean_abs}});
  return {{"check", "mms_residual"},
          {"equation_id", r.equation_id},
          {"solution", r.solution},
          {"samples", r.samples},
          {"max_abs", r.max_abs},
          {"mean_abs", r.mean_abs},
          {"generators", gens}};
}

ordered_json report_json(const LaxNumericReport& r) {
  return {{"check", "lax_numeric"},
          {"equation_id", r.equation_id},
          {"solution", r.solution},
          {"samples", r.samples},
          {"skipped", r.skipped},
          {"max_abs_residual", r.max_abs_residual},
          {"max_abs_pde", r.max_abs_pde},
          {"max_condition_error", r.max_condition_error},
          {"max_relation_error", r.max_relation_error},
          {"max_bound_ratio", r.max_bound_ratio},
          {"relation_available", r.relation_available},
          {"ok", r.ok},
          {"notes", r.notes}};
}

ordered_json report_json(const FlowReport& r) {
  ordered_json ratios = ordered_json::array();
  for (double q : r.ratios)
    ratios.push_back(std::isfinite(q) ? ordered_json(q) : ordered_json(nullptr));
  return {{"check", "flow_commutator"},
          {"equation_id", r.equation_id},
          {"solution", r.solution},
          {"s", r.s},
          {"r", r.r},
          {"steps", r.steps},
          {"gaps", r.gaps},
          {"ratios", ratios},
          {"at_roundoff", r.at_roundoff},
          {"converges", r.converges},
          {"order_four", r.order_four},
          {"notes", r.notes}};
}

} // namespace heavenly
