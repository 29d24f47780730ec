#include "heavenly/casimir.hpp"

namespace heavenly {

OneForm coadjoint_action(const OneForm& l, const VectorField& a) {
  if (!same_context(l.context(), a.context()))
    throw ContextMismatch("coadjoint_action: form and field belong to different jet contexts");
  const ContextPtr& ctx = l.context();
  OneForm out(ctx);
  LambdaRational div = divergence(a);
  for (const auto& i : l.directions()) {
    LambdaRational acc(ctx);
    const LambdaRational li = l.get(i);
    if (!li.is_zero()) {
      acc += li * div;
      acc += apply(a, li);
    }
    for (const auto& [j, lj] : l.components()) {
      auto dai = partial(a.get(j), i);
      if (!dai.is_zero())
        acc += lj * dai;
    }
    out.set(i, acc);
  }
  return out;
}

namespace {

constexpr int kExact = 1 << 20;

LaurentSeries series_partial(const LaurentSeries& s, Direction d) {
  return d.is_lambda() ? s.d_lambda() : s.total_derivative(IndependentVar::x(d.index));
}

} // namespace

SeriesField coadjoint_action(const SeriesField& l, const SeriesField& a, const ContextPtr& ctx,
                              const ExpansionPoint& point) {
  auto get = [&](const SeriesField& f, Direction d) {
    auto it = f.find(d);
    return it == f.end() ? LaurentSeries::exact_zero(ctx, point, kExact) : it->second;
  };
  std::vector<Direction> dirs{Direction::lambda()};
  for (int i = 1; i <= ctx->n; ++i)
    dirs.push_back(Direction::x(i));
  std::optional<LaurentSeries> div;
  for (const auto& [j, aj] : a) {
    auto t = series_partial(aj, j);
    div = div ? *div + t : t;
  }
  SeriesField out;
  for (const auto& i : dirs) {
    std::optional<LaurentSeries> acc;
    auto add = [&](const LaurentSeries& t) { acc = acc ? *acc + t : t; };
    auto li = l.find(i);
    if (li != l.end()) {
      if (div)
        add(li->second * *div);
      for (const auto& [j, aj] : a)
        add(aj * series_partial(li->second, j));
    }
    for (const auto& [j, lj] : l) {
      auto aj = a.find(j);
      if (aj != a.end())
        add(lj * series_partial(aj->second, i));
    }
    out.emplace(i, acc ? *acc : get({}, i));
  }
  return out;
}

ExactnessResult exactness_check(const OneForm& l, bool exclude_lambda_row) {
  ExactnessResult res;
  auto dirs = l.directions();
  for (std::size_t a = 0; a < dirs.size(); ++a)
    for (std::size_t b = a + 1; b < dirs.size(); ++b) {
      Direction i = dirs[a], j = dirs[b];
      if (exclude_lambda_row && (i.is_lambda() || j.is_lambda()))
        continue;
      LambdaRational v = partial(l.get(j), i) - partial(l.get(i), j);
      if (!v.is_zero()) {
        res.closed = false;
        res.witness.push_back({i, j, v});
      }
    }
  return res;
}

OneForm differential(const LambdaRational& f, bool dlambda_zero) {
  OneForm out(f.context());
  for (int i = 1; i <= f.context()->n; ++i)
    out.set(Direction::x(i), f.total_derivative(IndependentVar::x(i)));
  if (!dlambda_zero)
    out.set(Direction::lambda(), f.d_lambda());
  return out;
}

} // namespace heavenly
