#include "heavenly/vector_field.hpp"

namespace heavenly {

LambdaRational partial(const LambdaRational& f, Direction d) {
  return d.is_lambda() ? f.d_lambda() : f.total_derivative(IndependentVar::x(d.index));
}

namespace {

std::string coefficient_str(const LambdaRational& c) {
  std::string s = c.str();
  return s.find(' ') == std::string::npos ? s : "(" + s + ")";
}

template <class F>
std::string render(const F& f, bool vector) {
  std::vector<Direction> order;
  for (int i = 1; i <= f.context()->n; ++i)
    order.push_back(Direction::x(i));
  order.push_back(Direction::lambda());
  std::string out;
  for (const auto& d : order) {
    auto c = f.get(d);
    if (c.is_zero())
      continue;
    std::string basis = vector ? "∂_" + d.str(*f.context()) : "d" + d.str(*f.context());
    std::string cs = coefficient_str(c);
    std::string term = cs == "1" ? basis : cs == "-1" ? "-" + basis : cs + "*" + basis;
    if (out.empty())
      out = term;
    else if (term[0] == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

} // namespace

std::string render_field(const VectorField& v) { return render(v, true); }
std::string render_form(const OneForm& l) { return render(l, false); }

LambdaRational apply(const VectorField& a, const LambdaRational& f) {
  LambdaRational out(a.context());
  for (const auto& [e, ae] : a.components()) {
    auto df = partial(f, e);
    if (!df.is_zero())
      out += ae * df;
  }
  return out;
}

LambdaRational divergence(const VectorField& a) {
  LambdaRational out(a.context());
  for (const auto& [e, ae] : a.components())
    out += partial(ae, e);
  return out;
}

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
  a.check(b);
  VectorField out(a.context());
  for (const auto& d : a.directions())
    out.set(d, apply(a, b.get(d)) - apply(b, a.get(d)));
  return out;
}

VectorField compat_residual(const TimedVectorField& xt, const TimedVectorField& xy) {
  if (xt.tau.kind != IndependentVar::Kind::T || xy.tau.kind != IndependentVar::Kind::Y)
    throw std::invalid_argument("compat_residual expects the t-field first and the y-field second");
  return xt.field.time_derivative(IndependentVar::y()) - xy.field.time_derivative(IndependentVar::t()) -
         lie_bracket(xt.field, xy.field);
}

ConditionSet extract_conditions(const VectorField& r) {
  ConditionSet out;
  for (const auto& [d, c] : r.components()) {
    const auto& coeffs = c.numerator().coeffs();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k].is_zero())
        continue;
      auto [cleared, mult] = coeffs[k].clear_denominators();
      out.push_back({d, static_cast<int>(k), cleared, coeffs[k], mult, c.poles()});
    }
  }
  return out;
}

} // namespace heavenly
