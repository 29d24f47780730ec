#include "heavenly/verify.hpp"

#include <cstdlib>
#include <set>

#include "heavenly/catalog.hpp"

namespace heavenly {

using nlohmann::ordered_json;

std::string status_name(Status s) {
  switch (s) {
  case Status::Pass:
    return "PASS";
  case Status::Fail:
    return "FAIL";
  case Status::Conditional:
    return "CONDITIONAL";
  case Status::Info:
    return "INFO";
  }
  return "?";
}

CertBounds default_cert_bounds() {
  CertBounds b;
  if (const char* env = std::getenv("HEAVENLY_MAX_CERT_ORDER")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v <= 6)
      b.order = static_cast<int>(v);
  }
  return b;
}

EquationSpec apply_variant(const EquationSpec& spec, const std::string& label) {
  for (const auto& v : spec.variants) {
    if (v.label != label)
      continue;
    EquationSpec out = spec;
    if (v.pde)
      out.pde = *v.pde;
    if (v.a_t)
      out.gen_t.field = *v.a_t;
    if (v.a_y)
      out.gen_y.field = *v.a_y;
    return out;
  }
  throw std::out_of_range(spec.id + ": no variant '" + label + "'");
}

namespace {

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s)
    out += (out.empty() ? "" : ", ") + x;
  return out;
}

// jets of nonlocal dependents that no rule rewrites
std::set<std::string> unruled_nonlocal(const DiffPoly& p, const EquationSpec& spec) {
  std::set<std::string> out;
  for (const auto& s : p.symbols()) {
    if (!s.is_jet())
      continue;
    const std::string& dep = spec.ctx->dependents[s.id];
    if (std::find(spec.nonlocal.begin(), spec.nonlocal.end(), dep) != spec.nonlocal.end() &&
        !spec.pde.is_principal(s))
      out.insert(DiffPoly::symbol(spec.ctx, s).str());
  }
  return out;
}

Discharge discharge_certificate(const DiffPoly& p, const PdeSystem& sys, const CertBounds& b) {
  auto res = ideal_membership(p, sys, b.order, b.degree);
  if (res.found())
    return {"certificate", res.certificate->str(sys), true};
  return {"failed", res.failure, false};
}

} // namespace

LaxReport verify_lax(const EquationSpec& input, const LaxOptions& opts) {
  const EquationSpec spec = opts.variant ? apply_variant(input, *opts.variant) : input;
  LaxReport rep;
  rep.equation_id = spec.id;
  rep.variant = opts.variant.value_or("");
  auto r = compat_residual({spec.gen_t.tau, spec.gen_t.field}, {spec.gen_y.tau, spec.gen_y.field});
  bool all_ok = true, conditional = false;
  std::set<std::string> seen_nonlocal, blocking;
  for (auto& c : extract_conditions(r)) {
    LaxCondition lc{c, DiffPoly(spec.ctx), {}};
    if (spec.backend == Backend::Rewrite) {
      Reducer red(spec.pde);
      lc.leftover = red.normal_form(c.polynomial);
      for (const auto& s : unruled_nonlocal(c.polynomial, spec))
        seen_nonlocal.insert(s);
      if (lc.leftover.is_zero()) {
        lc.discharge = {"rewrite", red.rules_used().empty() ? "identically zero" : "0 via " + join(red.rules_used()), true};
      } else {
        auto open = unruled_nonlocal(lc.leftover, spec);
        if (!open.empty()) {
          lc.discharge = discharge_certificate(lc.leftover, spec.pde, opts.bounds);
          if (!lc.discharge.ok) {
            lc.discharge = {"unresolved", "normal form " + lc.leftover.str() + " involves " + join(open) +
                                              ", which no rule closes",
                            false};
            conditional = true;
            blocking.insert(open.begin(), open.end());
          }
        } else {
          lc.discharge = {"failed", "normal form " + lc.leftover.str(), false};
        }
      }
    } else {
      lc.leftover = c.polynomial;
      lc.discharge = discharge_certificate(c.polynomial, spec.pde, opts.bounds);
      if (lc.discharge.ok)
        lc.leftover = DiffPoly(spec.ctx);
    }
    all_ok = all_ok && lc.discharge.ok;
    rep.conditions.push_back(std::move(lc));
  }
  bool hard_fail = false;
  for (const auto& lc : rep.conditions)
    if (!lc.discharge.ok && lc.discharge.kind != "unresolved")
      hard_fail = true;
  rep.status = all_ok ? Status::Pass : hard_fail ? Status::Fail : conditional ? Status::Conditional : Status::Fail;
  if (!spec.nonlocal.empty()) {
    std::set<std::string> deps(spec.nonlocal.begin(), spec.nonlocal.end());
    bool t_jet = false;
    for (const auto& lc : rep.conditions)
      for (const auto& s : lc.condition.polynomial.symbols())
        if (s.is_jet() && s.orders[kSlotT] > 0 && !spec.pde.is_principal(s) &&
            std::find(spec.nonlocal.begin(), spec.nonlocal.end(), spec.ctx->dependents[s.id]) != spec.nonlocal.end())
          t_jet = true;
    if (!t_jet && blocking.empty())
      rep.notes.push_back("no t-derivative of the nonlocal dependents " + join(deps) +
                          " occurs in the residual; no closure rule for them is needed");
    if (!seen_nonlocal.empty() && blocking.empty())
      rep.notes.push_back("jets without a rule that occur and cancel: " + join(seen_nonlocal));
    if (!blocking.empty())
      rep.notes.push_back("residual needs a closure for " + join(blocking) + "; none found within certificate bounds (order " +
                          std::to_string(opts.bounds.order) + ", degree " + std::to_string(opts.bounds.degree) + ")");
  }
  if (rep.conditions.empty())
    rep.notes.push_back("residual vanishes identically");
  return rep;
}

std::vector<LaxReport> verify_lax_all_variants(const EquationSpec& spec, const CertBounds& bounds) {
  std::vector<LaxReport> out{verify_lax(spec, {bounds, std::nullopt})};
  for (const auto& v : spec.variants) {
    auto r = verify_lax(spec, {bounds, v.label});
    r.notes.insert(r.notes.begin(), v.note);
    out.push_back(std::move(r));
  }
  return out;
}

LaxSystem emit_lax_system(const EquationSpec& spec) {
  LaxSystem s;
  std::string et = render_lax_equation(spec.gen_t.tau, spec.gen_t.field),
              ey = render_lax_equation(spec.gen_y.tau, spec.gen_y.field);
  s.text = et + "; " + ey;
  s.json = {{"equation_id", spec.id},
            {"equations", {et, ey}},
            {"A_t", render_field(spec.gen_t.field)},
            {"A_y", render_field(spec.gen_y.field)}};
  return s;
}

namespace {

constexpr int kBig = 1 << 19;

SeriesField expand_form(const OneForm& l, const ExpansionPoint& pt, int order) {
  SeriesField out;
  for (const auto& [d, c] : l.components())
    out.emplace(d, laurent_expand(c, pt, order));
  return out;
}

// stored coefficients below `tail`, claimed known through `known`
SeriesField gradient_series(const GradientExpansion& g, int tail, int known) {
  SeriesField out;
  for (const auto& [d, s] : g.comps) {
    std::vector<DiffPoly> coeffs;
    for (int k = s.lowest(); k < tail; ++k)
      coeffs.push_back(s.coeff(k));
    out.emplace(d, LaurentSeries(s.context(), s.point(), s.lowest(), std::move(coeffs), known));
  }
  return out;
}

bool vanishes(const DiffPoly& c, const EquationSpec& spec, const CertBounds& b) {
  if (c.is_zero())
    return true;
  DiffPoly num = c.clear_denominators().first;
  if (spec.backend == Backend::Rewrite)
    return reduce(num, spec.pde).is_zero();
  return ideal_membership(num, spec.pde, b.order, b.degree).found();
}

} // namespace

CasimirReport casimir_residual_order(const EquationSpec& spec, int index, const CasimirOptions& opts) {
  return casimir_residual_order(spec, index, spec.casimir(index), opts);
}

CasimirReport casimir_residual_order(const EquationSpec& spec, int index, const GradientExpansion& g,
                                     const CasimirOptions& opts) {
  if (opts.extra_orders < 1)
    throw std::invalid_argument("extra_orders must be at least 1");
  const int tail = opts.tail_override.value_or(g.validated_tail);
  if (tail > g.printed_tail)
    throw std::invalid_argument(spec.id + ": requested tail beyond the stored expansion");
  const SeedSpec& seed = spec.seeds.at(g.seed);
  const ExpansionPoint& pt = g.point;

  CasimirReport rep;
  rep.equation_id = spec.id;
  rep.casimir_index = index;
  rep.label = g.label;
  rep.point = pt;
  rep.tail = tail;
  rep.printed_tail = g.printed_tail;
  rep.catalog_threshold = g.threshold;

  auto included = [&](Direction d) { return !(seed.dlambda_zero && d.is_lambda()); };

  // threshold pass: grow the seed expansion until only the gradient tail limits the result
  const auto truncated = gradient_series(g, tail, tail - 1);
  std::map<Direction, int> thr;
  int order = tail + 6;
  for (int iter = 0;; ++iter) {
    auto a = coadjoint_action(expand_form(seed.form, pt, order), truncated, spec.ctx, pt);
    auto b = coadjoint_action(expand_form(seed.form, pt, order + 6), truncated, spec.ctx, pt);
    bool stable = true;
    std::map<Direction, int> next;
    for (const auto& [d, s] : a) {
      const int kb = b.at(d).known_through();
      stable = stable && kb == s.known_through();
      next[d] = s.known_through() >= kBig ? kBig : s.known_through() + 1;
    }
    if (stable) {
      thr = std::move(next);
      break;
    }
    if (iter > 12)
      throw std::runtime_error(spec.id + ": residual order does not stabilize; the stored expansion is too short");
    order += 6;
  }
  int min_thr = kBig;
  for (const auto& [d, t] : thr)
    if (included(d))
      min_thr = std::min(min_thr, t);
  if (min_thr >= kBig)
    throw std::runtime_error(spec.id + ": residual is exact; no truncation threshold");
  rep.threshold = min_thr;

  // exact pass: the tail is taken as zero and the residual computed past the threshold
  std::map<Direction, int> target;
  for (const auto& [d, t] : thr)
    target[d] = (t >= kBig ? min_thr : t) + opts.extra_orders - 1;
  int pad = tail + opts.extra_orders + 8;
  SeriesField res;
  for (int iter = 0;; ++iter) {
    res = coadjoint_action(expand_form(seed.form, pt, pad), gradient_series(g, tail, pad), spec.ctx, pt);
    bool enough = true;
    for (const auto& [d, s] : res)
      enough = enough && (!included(d) || s.known_through() >= target[d]);
    if (enough)
      break;
    if (iter > 12)
      throw std::runtime_error(spec.id + ": series order insufficient; raise extra_orders");
    pad += 6;
  }

  bool pass = true;
  int best_margin = kBig;
  for (const auto& [d, s] : res) {
    ComponentOrder co;
    co.direction = d;
    co.threshold = thr[d] >= kBig ? min_thr : thr[d];
    co.computed_through = target[d];
    co.excluded = !included(d);
    if (!co.excluded) {
      for (int k = s.lowest(); k <= target[d]; ++k) {
        DiffPoly c = s.coeff(k);
        if (!vanishes(c, spec, opts.bounds)) {
          co.first_nonvanishing = k;
          co.leading_coefficient = reduce(c.clear_denominators().first, spec.pde).str();
          break;
        }
      }
      if (co.first_nonvanishing && *co.first_nonvanishing < co.threshold)
        pass = false;
      if (co.first_nonvanishing && (!rep.first_nonvanishing_order || *co.first_nonvanishing < *rep.first_nonvanishing_order))
        rep.first_nonvanishing_order = co.first_nonvanishing;
      const int margin = co.first_nonvanishing ? *co.first_nonvanishing - co.threshold : target[d] + 1 - co.threshold;
      if (margin < best_margin) {
        best_margin = margin;
        rep.binding = d;
      }
    }
    rep.components.push_back(std::move(co));
  }
  if (seed.dlambda_zero)
    rep.notes.push_back("seed written with dλ = 0: the dλ row of the residual is not part of the check");
  if (!opts.tail_override && rep.threshold != g.threshold) {
    rep.notes.push_back("catalog threshold " + std::to_string(g.threshold) + " differs from the computed " +
                        std::to_string(rep.threshold));
    pass = false;
  }
  rep.status = pass ? Status::Pass : Status::Fail;
  if (!opts.tail_override && g.validated_tail != g.printed_tail) {
    CasimirOptions o = opts;
    o.tail_override = g.printed_tail;
    auto printed = casimir_residual_order(spec, index, g, o);
    rep.printed_tail_status = printed.status;
    rep.notes.push_back("printed tail order " + std::to_string(g.printed_tail) + " gives " +
                        status_name(printed.status) + " (first nonvanishing " +
                        (printed.first_nonvanishing_order ? std::to_string(*printed.first_nonvanishing_order) : "none") +
                        ", threshold " + std::to_string(printed.threshold) + "); validated tail order " +
                        std::to_string(g.validated_tail));
  }
  return rep;
}

ExactnessReport verify_exactness(const EquationSpec& spec) {
  ExactnessReport rep;
  rep.equation_id = spec.id;
  bool any_expect = false, all_ok = true;
  for (const auto& s : spec.seeds) {
    SeedExactness e{s.label, exactness_check(s.form, s.dlambda_zero), s.expect_closed, Status::Info};
    if (s.expect_closed) {
      any_expect = true;
      e.status = e.result.closed == *s.expect_closed ? Status::Pass : Status::Fail;
      all_ok = all_ok && e.status == Status::Pass;
    }
    rep.seeds.push_back(std::move(e));
  }
  rep.status = !all_ok ? Status::Fail : any_expect ? Status::Pass : Status::Info;
  return rep;
}

namespace {

ordered_json opt_int(const std::optional<int>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string local_parameter(const ExpansionPoint& p) {
  return p.infinite ? "1/λ" : p.value.is_zero() ? "λ" : pole_factor_str(p.value, 1);
}

} // namespace

ordered_json report_json(const LaxReport& r, const JetContext& ctx) {
  ordered_json conds = ordered_json::array();
  for (const auto& c : r.conditions) {
    ordered_json e{{"direction", c.condition.direction.str(ctx)},
                   {"lambda_power", c.condition.lambda_power},
                   {"polynomial", c.condition.polynomial.str()},
                   {"discharge", {{"kind", c.discharge.kind}, {"detail", c.discharge.detail}}}};
    conds.push_back(e);
  }
  ordered_json j{{"equation_id", r.equation_id}, {"check", "lax"}};
  if (!r.variant.empty())
    j["variant"] = r.variant;
  j["status"] = status_name(r.status);
  j["conditions"] = conds;
  j["notes"] = r.notes;
  return j;
}

ordered_json report_json(const CasimirReport& r, const JetContext& ctx) {
  ordered_json comps = ordered_json::array();
  for (const auto& c : r.components) {
    ordered_json e{{"direction", c.direction.str(ctx)},
                   {"first_nonvanishing_order", opt_int(c.first_nonvanishing)},
                   {"threshold", c.threshold},
                   {"computed_through", c.computed_through}};
    if (c.excluded)
      e["excluded"] = true;
    if (!c.leading_coefficient.empty())
      e["leading_coefficient"] = c.leading_coefficient;
    comps.push_back(e);
  }
  ordered_json j{{"equation_id", r.equation_id},
                 {"check", "casimir"},
                 {"casimir_index", r.casimir_index},
                 {"point", r.point.str()},
                 {"first_nonvanishing_order", opt_int(r.first_nonvanishing_order)},
                 {"threshold", r.threshold},
                 {"status", status_name(r.status)},
                 {"label", r.label},
                 {"local_parameter", local_parameter(r.point)},
                 {"catalog_threshold", r.catalog_threshold},
                 {"tail_order", r.tail},
                 {"printed_tail_order", r.printed_tail}};
  if (r.printed_tail_status)
    j["printed_tail_status"] = status_name(*r.printed_tail_status);
  j["binding_direction"] = r.binding ? ordered_json(r.binding->str(ctx)) : ordered_json(nullptr);
  j["components"] = comps;
  j["notes"] = r.notes;
  return j;
}

ordered_json report_json(const ExactnessReport& r, const JetContext& ctx) {
  ordered_json seeds = ordered_json::array();
  for (const auto& s : r.seeds) {
    ordered_json w = ordered_json::array();
    for (const auto& x : s.result.witness)
      w.push_back({{"i", x.i.str(ctx)}, {"j", x.j.str(ctx)}, {"value", x.value.str()}});
    seeds.push_back({{"label", s.label},
                     {"closed", s.result.closed},
                     {"expected", s.expected ? ordered_json(*s.expected) : ordered_json(nullptr)},
                     {"status", status_name(s.status)},
                     {"witness", w}});
  }
  return {{"equation_id", r.equation_id}, {"check", "exactness"}, {"status", status_name(r.status)}, {"seeds", seeds}};
}

std::string report_text(const LaxReport& r, const JetContext& ctx) {
  std::string out = "lax " + r.equation_id + (r.variant.empty() ? "" : " [" + r.variant + "]") + ": " +
                    status_name(r.status) + "\n";
  for (const auto& c : r.conditions)
    out += "  " + c.condition.direction.str(ctx) + " λ^" + std::to_string(c.condition.lambda_power) + ": " +
           c.condition.polynomial.str() + "\n    " + c.discharge.kind + ": " + c.discharge.detail + "\n";
  for (const auto& n : r.notes)
    out += "  note: " + n + "\n";
  return out;
}

std::string report_text(const CasimirReport& r, const JetContext& ctx) {
  std::string out = "casimir " + r.equation_id + " #" + std::to_string(r.casimir_index) + " (" + r.label + ") at " +
                    r.point.str() + ": " + status_name(r.status) + "\n";
  out += "  orders in " + local_parameter(r.point) + "; threshold " + std::to_string(r.threshold) +
         ", first nonvanishing " + (r.first_nonvanishing_order ? std::to_string(*r.first_nonvanishing_order) : "none") +
         "\n";
  for (const auto& c : r.components)
    out += "  " + c.direction.str(ctx) + ": threshold " + std::to_string(c.threshold) + ", first nonvanishing " +
           (c.excluded ? std::string("excluded")
                       : c.first_nonvanishing ? std::to_string(*c.first_nonvanishing)
                                              : "none through " + std::to_string(c.computed_through)) +
           "\n";
  for (const auto& n : r.notes)
    out += "  note: " + n + "\n";
  return out;
}

std::string report_text(const ExactnessReport& r, const JetContext& ctx) {
  std::string out = "exactness " + r.equation_id + ": " + status_name(r.status) + "\n";
  for (const auto& s : r.seeds) {
    out += "  " + s.label + ": " + (s.result.closed ? "closed" : "not closed") + " [" + status_name(s.status) + "]\n";
    for (const auto& w : s.result.witness)
      out += "    d" + w.i.str(ctx) + " l_" + w.j.str(ctx) + " - d" + w.j.str(ctx) + " l_" + w.i.str(ctx) + " = " +
             w.value.str() + "\n";
  }
  return out;
}

} // namespace heavenly
