#ifndef HEAVENLY_JET_HPP
#define HEAVENLY_JET_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heavenly/gaussian.hpp"

namespace heavenly {

inline constexpr int kMaxTorus = 10;
// multi-index slots: x_1..x_kMaxTorus, then y, then t
inline constexpr int kSlotY = kMaxTorus;
inline constexpr int kSlotT = kMaxTorus + 1;
inline constexpr int kSlots = kMaxTorus + 2;

class ContextMismatch : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Independent variable of the jet model: torus coordinate x_i (1-based), an
// evolution parameter y or t, or the spectral parameter lambda.
struct IndependentVar {
  enum class Kind : std::uint8_t { X, Y, T, Lambda };
  Kind kind = Kind::X;
  int index = 1;

  static IndependentVar x(int i) { return {Kind::X, i}; }
  static IndependentVar y() { return {Kind::Y, 0}; }
  static IndependentVar t() { return {Kind::T, 0}; }
  static IndependentVar lambda() { return {Kind::Lambda, 0}; }

  bool is_lambda() const { return kind == Kind::Lambda; }
  // multi-index slot; throws for lambda
  int slot() const;
  friend bool operator==(const IndependentVar&, const IndependentVar&) = default;
};

// Names and sizes shared by every polynomial built for one equation.
struct JetContext {
  int n = 1;
  std::vector<std::string> dependents;
  std::vector<std::string> params;

  JetContext(int n_, std::vector<std::string> deps, std::vector<std::string> pars = {});

  int dep_id(const std::string& name) const;
  int param_id(const std::string& name) const;
  std::string x_name(int i) const { return n == 1 ? "x" : "x" + std::to_string(i); }
  std::string slot_name(int slot) const;
  std::vector<IndependentVar> jet_directions() const;

  friend bool operator==(const JetContext&, const JetContext&) = default;
};

using ContextPtr = std::shared_ptr<const JetContext>;

inline ContextPtr make_context(int n, std::vector<std::string> deps, std::vector<std::string> params = {}) {
  return std::make_shared<const JetContext>(n, std::move(deps), std::move(params));
}

bool same_context(const ContextPtr& a, const ContextPtr& b);

using MultiIndex = std::array<std::uint8_t, kSlots>;

enum class SymbolKind : std::uint8_t { Param = 0, Coord = 1, Jet = 2 };

// A polynomial indeterminate: a jet u_alpha, an explicit torus coordinate
// x_i, or a constant parameter. Ordered by kind, id, total order, then
// lexicographically on the multi-index.
struct Symbol {
  SymbolKind kind = SymbolKind::Jet;
  std::uint8_t id = 0;
  MultiIndex orders{};

  static Symbol jet(int dep, const MultiIndex& mi = {}) { return {SymbolKind::Jet, static_cast<std::uint8_t>(dep), mi}; }
  static Symbol coord(int i) { return {SymbolKind::Coord, static_cast<std::uint8_t>(i - 1), {}}; }
  static Symbol param(int id) { return {SymbolKind::Param, static_cast<std::uint8_t>(id), {}}; }

  bool is_jet() const { return kind == SymbolKind::Jet; }
  int order() const;
  // true when this jet is a derivative (possibly trivial) of `pattern`
  bool dominates(const Symbol& pattern) const;
  Symbol differentiated(int slot, int times = 1) const;

  std::string str(const JetContext& ctx) const;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b);
};

MultiIndex make_index(std::initializer_list<IndependentVar> vars);

// sorted, exponents nonzero; negative exponents allowed (Laurent monomials)
using Monomial = std::vector<std::pair<Symbol, int>>;

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

int monomial_degree(const Monomial& m);
Monomial monomial_mul(const Monomial& a, const Monomial& b);

using Assignment = std::function<std::optional<std::complex<double>>(const Symbol&)>;

// Exact Laurent polynomial in jet symbols over Q(i), always in normal form:
// canonical term order, no zero coefficients.
class DiffPoly {
public:
  using TermMap = std::map<Monomial, GaussianRational, MonomialLess>;

  explicit DiffPoly(ContextPtr ctx);
  DiffPoly(ContextPtr ctx, const GaussianRational& c);

  static DiffPoly symbol(ContextPtr ctx, const Symbol& s, int exponent = 1);
  static DiffPoly jet(ContextPtr ctx, const std::string& dep, std::initializer_list<IndependentVar> vars = {});
  static DiffPoly coord(ContextPtr ctx, int i);
  static DiffPoly param(ContextPtr ctx, const std::string& name);
  static DiffPoly term(ContextPtr ctx, const Monomial& m, const GaussianRational& c);

  const ContextPtr& context() const { return ctx_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  GaussianRational constant_term() const;
  int degree() const;
  std::set<Symbol> symbols() const;

  DiffPoly operator-() const;
  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly& operator*=(const DiffPoly& o);
  DiffPoly& operator*=(const GaussianRational& c);

  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(DiffPoly a, const GaussianRational& c) { return a *= c; }
  friend DiffPoly operator*(const GaussianRational& c, DiffPoly a) { return a *= c; }
  friend DiffPoly operator+(DiffPoly a, const GaussianRational& c) { return a += DiffPoly(a.ctx_, c); }
  friend DiffPoly operator-(DiffPoly a, const GaussianRational& c) { return a -= DiffPoly(a.ctx_, c); }

  // structural equality of normal forms
  friend bool operator==(const DiffPoly& a, const DiffPoly& b);

  DiffPoly pow(int e) const;
  // total derivative along x_i, y or t; lambda is rejected
  DiffPoly total_derivative(IndependentVar v) const;
  DiffPoly total_derivative(const MultiIndex& word) const;
  DiffPoly substitute(const Symbol& s, const DiffPoly& value) const;
  // multiplies by the smallest monomial that removes every negative exponent;
  // returns the cleared polynomial and the multiplier
  std::pair<DiffPoly, Monomial> clear_denominators() const;

  std::complex<double> eval(const Assignment& a) const;
  std::complex<double> eval(const std::map<Symbol, std::complex<double>>& a) const;

  // canonical text form coeff*dep[indices]^exp*..., terms in canonical order
  std::string str() const;

  void add_term(const Monomial& m, const GaussianRational& c);

private:
  void check(const DiffPoly& o) const;

  ContextPtr ctx_;
  TermMap terms_;
};

std::string monomial_str(const Monomial& m, const JetContext& ctx);

} // namespace heavenly

#endif
