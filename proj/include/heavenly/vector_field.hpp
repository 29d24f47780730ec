#ifndef HEAVENLY_VECTOR_FIELD_HPP
#define HEAVENLY_VECTOR_FIELD_HPP

#include <map>
#include <string>
#include <vector>

#include "heavenly/lambda.hpp"

namespace heavenly {

// Basis direction on T^n x C. Lambda sorts first, then x_1..x_n.
struct Direction {
  int index = 0; // 0 = lambda, i = x_i

  static Direction lambda() { return {0}; }
  static Direction x(int i) { return {i}; }
  bool is_lambda() const { return index == 0; }
  std::string str(const JetContext& ctx) const { return is_lambda() ? "λ" : ctx.x_name(index); }
  friend auto operator<=>(const Direction&, const Direction&) = default;
};

// d/d(direction) of a coefficient: total derivative along x_i, d_lambda along lambda
LambdaRational partial(const LambdaRational& f, Direction d);

template <class Tag>
class FieldT {
public:
  explicit FieldT(ContextPtr ctx) : ctx_(std::move(ctx)) {}
  FieldT(ContextPtr ctx, std::initializer_list<std::pair<const Direction, LambdaRational>> comps) : ctx_(std::move(ctx)) {
    for (const auto& [d, c] : comps)
      set(d, c);
  }

  const ContextPtr& context() const { return ctx_; }
  LambdaRational get(Direction d) const {
    auto it = comps_.find(d);
    return it == comps_.end() ? LambdaRational(ctx_) : it->second;
  }
  void set(Direction d, const LambdaRational& c) {
    if (!same_context(ctx_, c.context()))
      throw ContextMismatch("field component from a different context");
    if (!d.is_lambda() && d.index > ctx_->n)
      throw std::out_of_range("direction exceeds torus dimension");
    if (c.is_zero())
      comps_.erase(d);
    else
      comps_.insert_or_assign(d, c);
  }
  const std::map<Direction, LambdaRational>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }
  // all directions of the ambient space
  std::vector<Direction> directions() const {
    std::vector<Direction> out{Direction::lambda()};
    for (int i = 1; i <= ctx_->n; ++i)
      out.push_back(Direction::x(i));
    return out;
  }

  FieldT& operator+=(const FieldT& o) {
    check(o);
    for (const auto& [d, c] : o.comps_)
      set(d, get(d) + c);
    return *this;
  }
  FieldT& operator-=(const FieldT& o) {
    check(o);
    for (const auto& [d, c] : o.comps_)
      set(d, get(d) - c);
    return *this;
  }
  friend FieldT operator+(FieldT a, const FieldT& b) { return a += b; }
  friend FieldT operator-(FieldT a, const FieldT& b) { return a -= b; }
  FieldT operator-() const { return scaled(GaussianRational(-1)); }
  FieldT scaled(const GaussianRational& c) const {
    FieldT out(ctx_);
    for (const auto& [d, v] : comps_)
      out.set(d, v * c);
    return out;
  }
  FieldT scaled(const LambdaRational& c) const {
    FieldT out(ctx_);
    for (const auto& [d, v] : comps_)
      out.set(d, v * c);
    return out;
  }
  // total derivative of every coefficient along y, t or x_i
  FieldT time_derivative(IndependentVar v) const {
    FieldT out(ctx_);
    for (const auto& [d, c] : comps_)
      out.set(d, c.total_derivative(v));
    return out;
  }
  friend bool operator==(const FieldT& a, const FieldT& b) {
    return same_context(a.ctx_, b.ctx_) && a.comps_ == b.comps_;
  }

  void check(const FieldT& o) const {
    if (!same_context(ctx_, o.ctx_))
      throw ContextMismatch("field operands belong to different jet contexts");
  }

private:
  ContextPtr ctx_;
  std::map<Direction, LambdaRational> comps_;
};

struct VectorTag;
struct FormTag;
using VectorField = FieldT<VectorTag>;
using OneForm = FieldT<FormTag>;

// "(λ^2 + u)∂_x + (...)∂_λ", x-directions first
std::string render_field(const VectorField& v);
// "(...)dx1 + (...)dλ"
std::string render_form(const OneForm& l);

// directional derivative sum_e a_e d_e f
LambdaRational apply(const VectorField& a, const LambdaRational& f);
LambdaRational divergence(const VectorField& a);
VectorField lie_bracket(const VectorField& a, const VectorField& b);

struct TimedVectorField {
  IndependentVar tau;
  VectorField field;
};

// R = d_y A_t - d_t A_y - [A_t, A_y]
VectorField compat_residual(const TimedVectorField& xt, const TimedVectorField& xy);

struct Condition {
  Direction direction;
  int lambda_power = 0;
  // numerator coefficient after clearing jet denominators
  DiffPoly polynomial;
  // coefficient before clearing
  DiffPoly raw;
  Monomial jet_multiplier;
  PoleMap denominator;
};

using ConditionSet = std::vector<Condition>;

// nonzero numerator coefficients, per direction and lambda power
ConditionSet extract_conditions(const VectorField& r);

} // namespace heavenly

#endif
