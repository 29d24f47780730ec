#include "heavenly/ideal.hpp"

#include <map>

namespace heavenly {

std::string word_str(const MultiIndex& w, const JetContext& ctx) {
  std::string out;
  for (int slot = 0; slot < kSlots; ++slot)
    for (int k = 0; k < w[slot]; ++k) {
      if (!out.empty())
        out += ",";
      out += ctx.slot_name(slot);
    }
  return out.empty() ? "1" : out;
}

DiffPoly Certificate::expand(const PdeSystem& sys, const ContextPtr& ctx) const {
  DiffPoly out(ctx);
  for (const auto& t : terms)
    out += t.multiplier * sys.generators.at(t.generator).total_derivative(t.word);
  return out;
}

std::string Certificate::str(const PdeSystem& sys) const {
  if (terms.empty())
    return "0";
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty())
      out += " + ";
    std::string label = t.generator < static_cast<int>(sys.generator_labels.size()) ? sys.generator_labels[t.generator]
                                                                                    : "G" + std::to_string(t.generator);
    out += "(" + t.multiplier.str() + ")*D[" + word_str(t.word, *sys.ctx) + "](" + label + ")";
  }
  return out;
}

namespace {

std::vector<MultiIndex> words_up_to(const JetContext& ctx, int order) {
  std::vector<int> slots;
  for (const auto& v : ctx.jet_directions())
    slots.push_back(v.slot());
  std::vector<MultiIndex> out{MultiIndex{}};
  std::vector<MultiIndex> layer{MultiIndex{}};
  for (int len = 1; len <= order; ++len) {
    std::vector<MultiIndex> next;
    for (const auto& w : layer) {
      // non-decreasing slot sequence avoids duplicates
      int last = -1;
      for (int s = 0; s < kSlots; ++s)
        if (w[s])
          last = s;
      for (int s : slots)
        if (s >= last) {
          MultiIndex n = w;
          ++n[s];
          next.push_back(n);
        }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::vector<Monomial> monomials_up_to(const std::vector<Symbol>& syms, int degree) {
  std::vector<Monomial> out{Monomial{}};
  std::vector<std::pair<Monomial, std::size_t>> layer{{Monomial{}, 0}};
  for (int d = 1; d <= degree; ++d) {
    std::vector<std::pair<Monomial, std::size_t>> next;
    for (const auto& [m, start] : layer)
      for (std::size_t k = start; k < syms.size(); ++k) {
        Monomial n = monomial_mul(m, Monomial{{syms[k], 1}});
        next.emplace_back(n, k);
        out.push_back(n);
      }
    layer = std::move(next);
  }
  return out;
}

using Row = std::map<int, GaussianRational>;

struct Column {
  int generator;
  MultiIndex word;
  Monomial multiplier;
};

// exact sparse elimination; returns nullopt if inconsistent
std::optional<std::map<int, GaussianRational>> solve(std::vector<std::pair<Row, GaussianRational>> rows) {
  std::map<int, std::pair<Row, GaussianRational>> pivots;
  for (auto& [row, rhs] : rows) {
    while (!row.empty()) {
      int lead = row.begin()->first;
      auto pit = pivots.find(lead);
      if (pit == pivots.end())
        break;
      GaussianRational f = row.begin()->second / pit->second.first.begin()->second;
      for (const auto& [c, v] : pit->second.first) {
        auto [it, ins] = row.try_emplace(c, GaussianRational(0));
        it->second -= f * v;
        if (it->second.is_zero())
          row.erase(it);
      }
      rhs -= f * pit->second.second;
    }
    if (row.empty()) {
      if (!rhs.is_zero())
        return std::nullopt;
      continue;
    }
    int lead = row.begin()->first;
    pivots.emplace(lead, std::make_pair(std::move(row), std::move(rhs)));
  }
  std::map<int, GaussianRational> x;
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto& [row, rhs] = it->second;
    GaussianRational acc = rhs;
    for (auto c = std::next(row.begin()); c != row.end(); ++c) {
      auto xv = x.find(c->first);
      if (xv != x.end())
        acc -= c->second * xv->second;
    }
    acc /= row.begin()->second;
    if (!acc.is_zero())
      x.emplace(it->first, acc);
  }
  return x;
}

} // namespace

MembershipResult ideal_membership(const DiffPoly& p, const PdeSystem& sys, int max_order, int max_degree) {
  if (!same_context(p.context(), sys.ctx))
    throw ContextMismatch("ideal_membership: polynomial and system use different contexts");
  MembershipResult res;
  if (p.is_zero()) {
    res.certificate = Certificate{};
    return res;
  }
  if (sys.generators.empty()) {
    res.failure = "system has no generators";
    return res;
  }
  if (max_order < 0 || max_degree < 0) {
    res.failure = "bounds must be non-negative";
    return res;
  }
  std::vector<Symbol> syms;
  for (const auto& s : p.symbols())
    syms.push_back(s);

  for (int order = 0; order <= max_order; ++order) {
    auto words = words_up_to(*sys.ctx, order);
    std::vector<std::vector<DiffPoly>> derived(sys.generators.size());
    for (std::size_t g = 0; g < sys.generators.size(); ++g)
      for (const auto& w : words)
        derived[g].push_back(sys.generators[g].total_derivative(w));
    for (int degree = 0; degree <= max_degree; ++degree) {
      auto mults = monomials_up_to(syms, degree);
      std::vector<Column> cols;
      std::map<Monomial, int, MonomialLess> row_id;
      std::vector<std::pair<Row, GaussianRational>> rows;
      auto row_of = [&](const Monomial& m) -> int {
        auto [it, ins] = row_id.try_emplace(m, static_cast<int>(rows.size()));
        if (ins)
          rows.emplace_back(Row{}, GaussianRational(0));
        return it->second;
      };
      for (std::size_t g = 0; g < sys.generators.size(); ++g)
        for (std::size_t w = 0; w < words.size(); ++w)
          for (const auto& m : mults) {
            int col = static_cast<int>(cols.size());
            cols.push_back({static_cast<int>(g), words[w], m});
            for (const auto& [tm, tc] : derived[g][w].terms())
              rows[row_of(monomial_mul(tm, m))].first.emplace(col, tc);
          }
      for (const auto& [m, c] : p.terms())
        rows[row_of(m)].second = c;
      res.unknowns = cols.size();
      res.equations = rows.size();
      auto x = solve(std::move(rows));
      if (!x)
        continue;
      std::map<std::pair<int, MultiIndex>, DiffPoly> grouped;
      for (const auto& [col, v] : *x) {
        const Column& c = cols[col];
        auto key = std::make_pair(c.generator, c.word);
        auto it = grouped.try_emplace(key, DiffPoly(sys.ctx)).first;
        it->second += DiffPoly::term(sys.ctx, c.multiplier, v);
      }
      Certificate cert;
      cert.order = order;
      cert.degree = degree;
      for (auto& [key, mult] : grouped)
        if (!mult.is_zero())
          cert.terms.push_back({key.first, key.second, std::move(mult)});
      if (!(cert.expand(sys, sys.ctx) == p))
        throw std::logic_error("ideal_membership: certificate failed re-expansion");
      res.certificate = std::move(cert);
      return res;
    }
  }
  res.failure = "no certificate with words of length <= " + std::to_string(max_order) +
                " and multipliers of degree <= " + std::to_string(max_degree);
  return res;
}

} // namespace heavenly
