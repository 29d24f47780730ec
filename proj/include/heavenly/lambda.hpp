#ifndef HEAVENLY_LAMBDA_HPP
#define HEAVENLY_LAMBDA_HPP

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "heavenly/jet.hpp"

namespace heavenly {

// Polynomial in lambda with DiffPoly coefficients; trailing zeros trimmed.
class LambdaPoly {
public:
  explicit LambdaPoly(ContextPtr ctx);
  LambdaPoly(ContextPtr ctx, std::vector<DiffPoly> coeffs);
  LambdaPoly(const DiffPoly& constant);

  static LambdaPoly monomial(const DiffPoly& c, int power);
  static LambdaPoly lambda(ContextPtr ctx) { return monomial(DiffPoly(ctx, 1), 1); }
  // (lambda - p)^m
  static LambdaPoly linear_power(ContextPtr ctx, const GaussianRational& p, int m);

  const ContextPtr& context() const { return ctx_; }
  // -1 for the zero polynomial
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  DiffPoly coeff(int k) const;
  const std::vector<DiffPoly>& coeffs() const { return coeffs_; }

  LambdaPoly operator-() const;
  LambdaPoly& operator+=(const LambdaPoly& o);
  LambdaPoly& operator-=(const LambdaPoly& o);
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);
  friend LambdaPoly operator*(LambdaPoly a, const DiffPoly& c);
  friend LambdaPoly operator*(LambdaPoly a, const GaussianRational& c);
  friend bool operator==(const LambdaPoly& a, const LambdaPoly& b);

  LambdaPoly derivative() const;
  LambdaPoly total_derivative(IndependentVar v) const;
  DiffPoly eval_at(const GaussianRational& p) const;
  // coefficients of f(p + mu) in powers of mu
  std::vector<DiffPoly> taylor_at(const GaussianRational& p) const;
  // synthetic division by (lambda - p): quotient, remainder
  std::pair<LambdaPoly, DiffPoly> divide_linear(const GaussianRational& p) const;

  std::string str() const;

private:
  void trim();
  void check(const LambdaPoly& o) const;
  ContextPtr ctx_;
  std::vector<DiffPoly> coeffs_;
};

// pole location -> multiplicity; the denominator is prod (lambda - p)^m
using PoleMap = std::map<GaussianRational, int>;

std::vector<GaussianRational> denominator_coeffs(const PoleMap& poles);
std::string pole_factor_str(const GaussianRational& p, int m);

// Rational function num / prod (lambda - p)^m, always normalized: no pole at
// which the numerator vanishes, no zero-multiplicity entries.
class LambdaRational {
public:
  explicit LambdaRational(ContextPtr ctx);
  LambdaRational(LambdaPoly num, PoleMap poles = {});
  LambdaRational(const DiffPoly& constant);

  static LambdaRational lambda(ContextPtr ctx) { return LambdaRational(LambdaPoly::lambda(ctx)); }
  // c / (lambda - p)^m
  static LambdaRational pole(const DiffPoly& c, const GaussianRational& p, int m);

  const ContextPtr& context() const { return num_.context(); }
  const LambdaPoly& numerator() const { return num_; }
  const PoleMap& poles() const { return poles_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return poles_.empty(); }
  int pole_order(const GaussianRational& p) const;
  // order of growth at infinity: deg num - deg den
  int degree_at_infinity() const;

  LambdaRational operator-() const;
  LambdaRational& operator+=(const LambdaRational& o);
  LambdaRational& operator-=(const LambdaRational& o);
  friend LambdaRational operator+(LambdaRational a, const LambdaRational& b) { return a += b; }
  friend LambdaRational operator-(LambdaRational a, const LambdaRational& b) { return a -= b; }
  friend LambdaRational operator*(const LambdaRational& a, const LambdaRational& b);
  friend LambdaRational operator*(LambdaRational a, const GaussianRational& c);
  friend LambdaRational operator*(const GaussianRational& c, LambdaRational a) { return std::move(a) * c; }
  friend bool operator==(const LambdaRational& a, const LambdaRational& b);

  LambdaRational d_lambda() const;
  LambdaRational total_derivative(IndependentVar v) const;
  // multiplies the numerator by a pure jet expression (e.g. u_x^-1)
  LambdaRational scaled(const DiffPoly& c) const;

  std::complex<double> eval(const Assignment& a, std::complex<double> lambda) const;

  // "num / ((lambda-1)*lambda^2)"
  std::string str() const;

private:
  void normalize();
  LambdaPoly num_;
  PoleMap poles_;
};

struct PartialFractions {
  LambdaPoly polynomial;
  // pole -> coefficients of (lambda-p)^-1, (lambda-p)^-2, ...
  std::map<GaussianRational, std::vector<DiffPoly>> principal;

  LambdaRational recombine() const;
};

PartialFractions partial_fractions(const LambdaRational& f);

struct Projection {
  LambdaRational plus;
  LambdaRational minus;
};

// plus: polynomial part (constant included); minus: principal parts at the finite poles
Projection split_projection(const LambdaRational& f);

// Expansion point: a finite Gaussian-rational point or infinity. The local
// parameter is lambda - p at a finite point and 1/lambda at infinity.
struct ExpansionPoint {
  bool infinite = false;
  GaussianRational value;

  static ExpansionPoint at(const GaussianRational& p) { return {false, p}; }
  static ExpansionPoint infinity() { return {true, GaussianRational(0)}; }
  std::string str() const { return infinite ? "inf" : value.str(); }
  friend bool operator==(const ExpansionPoint&, const ExpansionPoint&) = default;
};

// Truncated Laurent series sum c_k z^k, k = lowest..known_through, plus an
// unknown tail O(z^(known_through+1)).
class LaurentSeries {
public:
  LaurentSeries(ContextPtr ctx, ExpansionPoint point, int lowest, std::vector<DiffPoly> coeffs, int known_through);
  static LaurentSeries exact_zero(ContextPtr ctx, ExpansionPoint point, int known_through);

  const ContextPtr& context() const { return ctx_; }
  const ExpansionPoint& point() const { return point_; }
  int lowest() const { return lowest_; }
  int known_through() const { return known_; }
  // lowest order at which the series can be nonzero, counting the tail
  int effective_lowest() const { return std::min(lowest_, known_ + 1); }
  DiffPoly coeff(int k) const;
  std::optional<int> first_nonzero() const;

  LaurentSeries operator-() const;
  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  LaurentSeries scaled(const GaussianRational& c) const;
  LaurentSeries scaled(const DiffPoly& c) const;
  // derivative in lambda (not in the local parameter)
  LaurentSeries d_lambda() const;
  LaurentSeries total_derivative(IndependentVar v) const;
  LaurentSeries truncated(int known_through) const;
  LaurentSeries map_coeffs(const std::function<DiffPoly(const DiffPoly&)>& f) const;
  // multiply by z^k
  LaurentSeries shifted(int k) const;

  // the known part as a rational function of lambda
  LambdaRational to_rational() const;
  std::string str() const;

private:
  void check(const LaurentSeries& o) const;
  ContextPtr ctx_;
  ExpansionPoint point_;
  int lowest_;
  std::vector<DiffPoly> coeffs_;
  int known_;
};

LaurentSeries laurent_expand(const LambdaRational& f, const ExpansionPoint& point, int order);

} // namespace heavenly

#endif
