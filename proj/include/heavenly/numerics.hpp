#ifndef HEAVENLY_NUMERICS_HPP
#define HEAVENLY_NUMERICS_HPP

#include <array>
#include <complex>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heavenly/jet.hpp"
#include "heavenly/spec.hpp"
#include "json.hpp"

namespace heavenly {

using cplx = std::complex<double>;

// coordinates by multi-index slot: x_1..x_kMaxTorus, y, t
using Point = std::array<cplx, kSlots>;

// Closed-form expression in the coordinates, differentiated analytically.
class Expr {
public:
  struct Node;

  Expr();
  Expr(double c);
  static Expr constant(cplx c);
  static Expr var(IndependentVar v);

  bool is_zero() const;
  cplx eval(const Point& p) const;
  Expr derivative(int slot) const;
  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  Expr pow(int n) const;

private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class MissingJet : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Values of every jet of the named dependents; parameters are constants.
class ClosedFormSolution {
public:
  ClosedFormSolution() = default;
  ClosedFormSolution(std::string name, std::map<std::string, Expr> deps, std::map<std::string, cplx> params = {});

  const std::string& name() const { return name_; }
  bool has(const std::string& dep) const { return deps_.count(dep) != 0; }
  const Expr& expr(const std::string& dep) const;
  // d^alpha of the dependent, cached per multi-index
  const Expr& jet(const std::string& dep, const MultiIndex& mi) const;
  cplx value(const std::string& dep, const MultiIndex& mi, const Point& p) const;

  // assignment for DiffPoly::eval; throws MissingJet for unknown dependents
  Assignment assignment(const JetContext& ctx, const Point& p) const;

private:
  std::string name_;
  std::map<std::string, Expr> deps_;
  std::map<std::string, cplx> params_;
  mutable std::map<std::pair<std::string, MultiIndex>, Expr> cache_;
};

// built-in solutions: zero, constant, linear_y (y/2), sine_x, sine_xy,
// y_sin_t (y sin t + cos t), quadratic (x - y^2/2), separable (sin x (y + t)).
// The expression is assigned to the first dependent, the rest are zero;
// parameters default to 1.
ClosedFormSolution builtin_solution(const std::string& name, const JetContext& ctx);
std::vector<std::string> builtin_solution_names();

class UnknownSolution : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Sample {
  Point point{};
  cplx lambda{0.0};
};

class SampleAtPole : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// finite poles of A_t and A_y
std::vector<cplx> pole_alphabet(const EquationSpec& spec);
// x_i in [0, 2π), y, t in [-1, 1], λ in the box |Re|, |Im| <= 2 at distance
// >= 0.1 from the pole alphabet
std::vector<Sample> random_samples(const EquationSpec& spec, int count, std::uint64_t seed);

// ---------------------------------------------------------------- residuals

struct ResidualNorms {
  std::string label;
  double max_abs = 0;
  double mean_abs = 0;
};

struct MmsReport {
  std::string equation_id;
  std::string solution;
  int samples = 0;
  std::vector<ResidualNorms> generators;
  double max_abs = 0;
  double mean_abs = 0;
};

MmsReport mms_residual(const EquationSpec& spec, const ClosedFormSolution& sol, const std::vector<Sample>& samples);

struct LaxNumericReport {
  std::string equation_id;
  std::string solution;
  int samples = 0;
  int skipped = 0;
  // max over samples and directions of |R|
  double max_abs_residual = 0;
  // max |PDE generator| over the same samples
  double max_abs_pde = 0;
  // |R - sum_p λ^p cond_p / (multiplier * denominator)|, relative
  double max_condition_error = 0;
  // |R - relation built from PDE generator values|, relative
  double max_relation_error = 0;
  // |R| <= bound * |PDE residual| with the bound taken from the relation
  double max_bound_ratio = 0;
  bool relation_available = true;
  bool ok = false;
  std::vector<std::string> notes;
};

LaxNumericReport lax_numeric_check(const EquationSpec& spec, const ClosedFormSolution& sol,
                                   const std::vector<Sample>& samples);

// ---------------------------------------------------------------- flows

struct FlowReport {
  std::string equation_id;
  std::string solution;
  double s = 0.5;
  double r = 0.5;
  std::vector<double> steps;
  std::vector<double> gaps;
  // gaps[i] / gaps[i + 1]
  std::vector<double> ratios;
  // every gap below the roundoff floor: the ratio carries no information
  bool at_roundoff = false;
  bool converges = false;
  bool order_four = false;
  std::vector<std::string> notes;
};

inline constexpr double kRoundoffFloor = 1e-12;

// Integrates the characteristics of ∂_t + A_t and ∂_y + A_y for times s and
// r in both orders with the classical 4th-order method at steps h, h/2, h/4.
FlowReport flow_commutator_check(const EquationSpec& spec, const ClosedFormSolution& sol, const Sample& start, double h,
                                 double s = 0.5, double r = 0.5);

// ---------------------------------------------------------------- dKP solver

struct Grid2 {
  int nx = 64;
  int ny = 64;
  double dt = 1e-3;
  // dt <= cfl * min(dx, dy) / max|u|
  double cfl = 1.0;

  double dx() const;
  double dy() const;
  // throws std::invalid_argument
  void validate() const;
};

class NumericAbort : public std::runtime_error {
public:
  NumericAbort(const std::string& what, int step) : std::runtime_error(what), step(step) {}
  int step;
};

struct DkpStep {
  int step = 0;
  double time = 0;
  double mass = 0;
  double max_abs_u = 0;
  // max |u_xt + u_yy + u u_xx + u_x^2| with u_t from the solver
  double lax_gap = 0;
};

struct DkpResult {
  Grid2 grid;
  double tmax = 0;
  int steps = 0;
  std::vector<double> initial;
  std::vector<double> final_state;
  std::vector<DkpStep> diagnostics;
  double mass_drift = 0;
};

// samples are row-major in y: u[j * nx + i] = u(x_i, y_j)
std::vector<double> sample_grid(const Grid2& g, const ClosedFormSolution& sol, const std::string& dep = "u",
                                double t = 0);
std::vector<double> spectral_derivative(const Grid2& g, const std::vector<double>& u, int order_x, int order_y);

// u_t = -u u_x - ∂_x^{-1} u_yy, zero x-mean pseudoinverse, 2/3 dealiasing, RK4
DkpResult dkp_solve(const Grid2& g, const std::vector<double>& init, double tmax, int record_every = 1);
DkpResult dkp_solve(const Grid2& g, const ClosedFormSolution& init, double tmax, int record_every = 1);

// initial data for the solver: constant, single_mode, oblique_mode
ClosedFormSolution dkp_initial(const std::string& name);
std::vector<std::string> dkp_initial_names();

struct RichardsonResult {
  double dt = 0;
  // max |u_dt - u_dt/2|, max |u_dt/2 - u_dt/4|
  double coarse = 0;
  double fine = 0;
  double ratio = 0;
};

RichardsonResult dkp_richardson(const Grid2& g, const std::vector<double>& init, double tmax);

void write_csv(std::ostream& os, const DkpResult& r);
nlohmann::ordered_json summary_json(const DkpResult& r);

nlohmann::ordered_json report_json(const MmsReport& r);
nlohmann::ordered_json report_json(const LaxNumericReport& r);
nlohmann::ordered_json report_json(const FlowReport& r);

} // namespace heavenly

#endif
