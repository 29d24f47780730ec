#include "heavenly/pde_system.hpp"

#include <algorithm>
#include <numeric>

namespace heavenly {

Ranking Ranking::uniform(const JetContext& ctx) {
  Ranking r;
  r.dep_offset.assign(ctx.dependents.size(), 0);
  r.weights.fill(1);
  r.priority = {kSlotT, kSlotY};
  for (int i = 0; i < kMaxTorus; ++i)
    r.priority.push_back(i);
  r.description = "total order, then dependent, then t, y, x1..xn";
  return r;
}

Ranking::Key Ranking::key(const Symbol& s) const {
  std::array<int, kSlots> lex{};
  if (!s.is_jet())
    return {-1, static_cast<int>(s.kind) * 256 + s.id, lex};
  int w = s.id < dep_offset.size() ? dep_offset[s.id] : 0;
  for (int k = 0; k < kSlots; ++k)
    w += weights[k] * s.orders[k];
  for (std::size_t k = 0; k < priority.size() && k < lex.size(); ++k)
    lex[k] = s.orders[priority[k]];
  return {w, s.id, lex};
}

const Rule* PdeSystem::match(const Symbol& s) const {
  for (const auto& r : rules)
    if (s.dominates(r.leading))
      return &r;
  return nullptr;
}

std::vector<std::string> PdeSystem::audit() const {
  std::vector<std::string> problems;
  for (std::size_t a = 0; a < rules.size(); ++a) {
    const Rule& r = rules[a];
    const std::string lead = r.leading.str(*ctx);
    if (!r.leading.is_jet()) {
      problems.push_back("rule " + r.label + ": leading symbol is not a jet");
      continue;
    }
    if (!same_context(ctx, r.rhs.context()))
      problems.push_back("rule " + r.label + ": rhs built in a different context");
    for (std::size_t b = 0; b < rules.size(); ++b)
      if (a != b && (r.leading.dominates(rules[b].leading) || rules[b].leading.dominates(r.leading)))
        problems.push_back("rules " + r.label + " and " + rules[b].label + " have overlapping leading patterns");
    for (const auto& s : r.rhs.symbols()) {
      if (!s.is_jet())
        continue;
      if (!ranking.less(s, r.leading))
        problems.push_back("rule " + r.label + ": rhs jet " + s.str(*ctx) + " does not rank below " + lead);
      if (match(s))
        problems.push_back("rule " + r.label + ": rhs jet " + s.str(*ctx) + " is itself reducible");
    }
  }
  return problems;
}

DiffPoly Reducer::prolonged_rhs(const Symbol& s, const Rule& r) {
  MultiIndex word{};
  for (int k = 0; k < kSlots; ++k)
    word[k] = static_cast<std::uint8_t>(s.orders[k] - r.leading.orders[k]);
  DiffPoly rhs = r.rhs.total_derivative(word);
  for (const auto& t : rhs.symbols())
    if (t.is_jet() && !sys_.ranking.less(t, s))
      throw NonTerminatingRewrite("reduce: rank does not decrease: " + s.str(*sys_.ctx) + " -> " + t.str(*sys_.ctx) +
                                  " via rule " + r.label);
  used_.insert(r.label);
  return rhs;
}

const DiffPoly& Reducer::symbol_normal_form(const Symbol& s) {
  auto it = cache_.find(s);
  if (it != cache_.end())
    return it->second;
  const Rule* r = s.is_jet() ? sys_.match(s) : nullptr;
  DiffPoly nf = r ? normal_form(prolonged_rhs(s, *r)) : DiffPoly::symbol(sys_.ctx, s);
  return cache_.emplace(s, std::move(nf)).first->second;
}

DiffPoly Reducer::normal_form(const DiffPoly& p) {
  if (!same_context(p.context(), sys_.ctx))
    throw ContextMismatch("reduce: polynomial and PDE system use different contexts");
  DiffPoly out(sys_.ctx);
  for (const auto& [m, c] : p.terms()) {
    bool reducible = false;
    for (const auto& [s, e] : m)
      if (s.is_jet() && sys_.match(s)) {
        if (e < 0)
          throw std::domain_error("reduce: principal jet " + s.str(*sys_.ctx) + " appears with negative exponent");
        reducible = true;
      }
    if (!reducible) {
      out.add_term(m, c);
      continue;
    }
    DiffPoly prod(sys_.ctx, c);
    Monomial plain;
    for (const auto& [s, e] : m) {
      if (s.is_jet() && sys_.match(s))
        prod *= symbol_normal_form(s).pow(e);
      else
        plain.emplace_back(s, e);
    }
    out += prod * DiffPoly::term(sys_.ctx, plain, 1);
  }
  return out;
}

DiffPoly Reducer::normal_form_shuffled(const DiffPoly& p, std::uint64_t seed, std::size_t max_steps) {
  if (!same_context(p.context(), sys_.ctx))
    throw ContextMismatch("reduce: polynomial and PDE system use different contexts");
  std::mt19937_64 rng(seed);
  DiffPoly cur = p;
  for (std::size_t step = 0;; ++step) {
    std::vector<Symbol> principal;
    for (const auto& s : cur.symbols())
      if (s.is_jet() && sys_.match(s))
        principal.push_back(s);
    if (principal.empty())
      return cur;
    if (step >= max_steps)
      throw NonTerminatingRewrite("reduce: step limit reached");
    std::uniform_int_distribution<std::size_t> pick(0, principal.size() - 1);
    const Symbol s = principal[pick(rng)];
    cur = cur.substitute(s, prolonged_rhs(s, *sys_.match(s)));
  }
}

DiffPoly reduce(const DiffPoly& p, const PdeSystem& sys, const ReduceOptions& opts) {
  Reducer r(sys);
  if (opts.shuffle_seed)
    return r.normal_form_shuffled(p, *opts.shuffle_seed, opts.max_steps);
  return r.normal_form(p);
}

} // namespace heavenly
