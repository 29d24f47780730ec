#include "heavenly/jet.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace heavenly {

int IndependentVar::slot() const {
  switch (kind) {
  case Kind::X:
    if (index < 1 || index > kMaxTorus)
      throw std::out_of_range("torus index out of range: " + std::to_string(index));
    return index - 1;
  case Kind::Y:
    return kSlotY;
  case Kind::T:
    return kSlotT;
  case Kind::Lambda:
    break;
  }
  throw std::invalid_argument("lambda is not a jet differentiation direction");
}

JetContext::JetContext(int n_, std::vector<std::string> deps, std::vector<std::string> pars)
    : n(n_), dependents(std::move(deps)), params(std::move(pars)) {
  if (n < 1 || n > kMaxTorus)
    throw std::invalid_argument("torus dimension must be in [1, " + std::to_string(kMaxTorus) + "]");
  std::set<std::string> seen;
  for (const auto& d : dependents)
    if (!seen.insert(d).second)
      throw std::invalid_argument("duplicate symbol name: " + d);
  for (const auto& p : params)
    if (!seen.insert(p).second)
      throw std::invalid_argument("duplicate symbol name: " + p);
}

int JetContext::dep_id(const std::string& name) const {
  auto it = std::find(dependents.begin(), dependents.end(), name);
  if (it == dependents.end())
    throw std::invalid_argument("unknown dependent variable: " + name);
  return static_cast<int>(it - dependents.begin());
}

int JetContext::param_id(const std::string& name) const {
  auto it = std::find(params.begin(), params.end(), name);
  if (it == params.end())
    throw std::invalid_argument("unknown parameter: " + name);
  return static_cast<int>(it - params.begin());
}

std::string JetContext::slot_name(int slot) const {
  if (slot == kSlotY)
    return "y";
  if (slot == kSlotT)
    return "t";
  return x_name(slot + 1);
}

std::vector<IndependentVar> JetContext::jet_directions() const {
  std::vector<IndependentVar> out;
  for (int i = 1; i <= n; ++i)
    out.push_back(IndependentVar::x(i));
  out.push_back(IndependentVar::y());
  out.push_back(IndependentVar::t());
  return out;
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
  if (a == b)
    return true;
  if (!a || !b)
    return false;
  return *a == *b;
}

int Symbol::order() const {
  int s = 0;
  for (auto o : orders)
    s += o;
  return s;
}

bool Symbol::dominates(const Symbol& pattern) const {
  if (kind != SymbolKind::Jet || pattern.kind != SymbolKind::Jet || id != pattern.id)
    return false;
  for (int k = 0; k < kSlots; ++k)
    if (orders[k] < pattern.orders[k])
      return false;
  return true;
}

Symbol Symbol::differentiated(int slot, int times) const {
  Symbol s = *this;
  int v = s.orders[slot] + times;
  if (v > 255)
    throw std::overflow_error("jet derivative order overflow");
  s.orders[slot] = static_cast<std::uint8_t>(v);
  return s;
}

std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
  if (auto c = a.kind <=> b.kind; c != 0)
    return c;
  if (auto c = a.id <=> b.id; c != 0)
    return c;
  if (auto c = a.order() <=> b.order(); c != 0)
    return c;
  return a.orders <=> b.orders;
}

std::string Symbol::str(const JetContext& ctx) const {
  switch (kind) {
  case SymbolKind::Param:
    return ctx.params.at(id);
  case SymbolKind::Coord:
    return ctx.x_name(id + 1);
  case SymbolKind::Jet:
    break;
  }
  std::string out = ctx.dependents.at(id);
  if (order() == 0)
    return out;
  out += "[";
  bool first = true;
  for (int slot = 0; slot < kSlots; ++slot)
    for (int k = 0; k < orders[slot]; ++k) {
      if (!first)
        out += ",";
      out += ctx.slot_name(slot);
      first = false;
    }
  return out + "]";
}

MultiIndex make_index(std::initializer_list<IndependentVar> vars) {
  MultiIndex mi{};
  for (const auto& v : vars)
    ++mi[v.slot()];
  return mi;
}

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (const auto& f : m)
    d += f.second;
  return d;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db)
    return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin(), j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
      out.push_back(*j++);
    } else {
      int e = i->second + j->second;
      if (e != 0)
        out.emplace_back(i->first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

DiffPoly::DiffPoly(ContextPtr ctx) : ctx_(std::move(ctx)) {
  if (!ctx_)
    throw std::invalid_argument("DiffPoly requires a context");
}

DiffPoly::DiffPoly(ContextPtr ctx, const GaussianRational& c) : DiffPoly(std::move(ctx)) {
  if (!c.is_zero())
    terms_.emplace(Monomial{}, c);
}

DiffPoly DiffPoly::symbol(ContextPtr ctx, const Symbol& s, int exponent) {
  DiffPoly p(std::move(ctx));
  if (exponent == 0)
    p.terms_.emplace(Monomial{}, GaussianRational(1));
  else
    p.terms_.emplace(Monomial{{s, exponent}}, GaussianRational(1));
  return p;
}

DiffPoly DiffPoly::jet(ContextPtr ctx, const std::string& dep, std::initializer_list<IndependentVar> vars) {
  int id = ctx->dep_id(dep);
  MultiIndex mi = make_index(vars);
  for (const auto& v : vars)
    if (v.kind == IndependentVar::Kind::X && v.index > ctx->n)
      throw std::out_of_range("torus index exceeds context dimension");
  return symbol(std::move(ctx), Symbol::jet(id, mi));
}

DiffPoly DiffPoly::coord(ContextPtr ctx, int i) {
  if (i < 1 || i > ctx->n)
    throw std::out_of_range("coordinate index exceeds context dimension");
  return symbol(std::move(ctx), Symbol::coord(i));
}

DiffPoly DiffPoly::param(ContextPtr ctx, const std::string& name) {
  int id = ctx->param_id(name);
  return symbol(std::move(ctx), Symbol::param(id));
}

DiffPoly DiffPoly::term(ContextPtr ctx, const Monomial& m, const GaussianRational& c) {
  DiffPoly p(std::move(ctx));
  p.add_term(m, c);
  return p;
}

void DiffPoly::check(const DiffPoly& o) const {
  if (!same_context(ctx_, o.ctx_))
    throw ContextMismatch("DiffPoly operands belong to different jet contexts");
}

bool DiffPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

GaussianRational DiffPoly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? GaussianRational(0) : it->second;
}

int DiffPoly::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_)
    d = std::max(d, monomial_degree(m));
  return d;
}

std::set<Symbol> DiffPoly::symbols() const {
  std::set<Symbol> out;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m)
      out.insert(f.first);
  return out;
}

void DiffPoly::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero())
    return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly out(*this);
  for (auto& [m, c] : out.terms_)
    c = -c;
  return out;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  check(o);
  for (const auto& [m, c] : o.terms_)
    add_term(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  check(o);
  for (const auto& [m, c] : o.terms_)
    add_term(m, -c);
  return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  a.check(b);
  DiffPoly out(a.ctx_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_)
      out.add_term(monomial_mul(ma, mb), ca * cb);
  return out;
}

DiffPoly& DiffPoly::operator*=(const DiffPoly& o) {
  *this = *this * o;
  return *this;
}

DiffPoly& DiffPoly::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_)
    v *= c;
  return *this;
}

bool operator==(const DiffPoly& a, const DiffPoly& b) {
  if (!same_context(a.ctx_, b.ctx_))
    return false;
  return a.terms_ == b.terms_;
}

DiffPoly DiffPoly::pow(int e) const {
  if (e < 0) {
    if (terms_.size() != 1)
      throw std::domain_error("negative power of a non-monomial DiffPoly");
    const auto& [m, c] = *terms_.begin();
    Monomial inv;
    for (const auto& f : m)
      inv.emplace_back(f.first, -f.second);
    return term(ctx_, inv, c.inverse()).pow(-e);
  }
  DiffPoly result(ctx_, GaussianRational(1)), base = *this;
  while (e > 0) {
    if (e & 1)
      result *= base;
    e >>= 1;
    if (e)
      base *= base;
  }
  return result;
}

DiffPoly DiffPoly::total_derivative(IndependentVar v) const {
  if (v.is_lambda())
    throw std::invalid_argument("total_derivative: lambda is not a jet direction; use d_lambda");
  if (v.kind == IndependentVar::Kind::X && v.index > ctx_->n)
    throw std::out_of_range("total_derivative: torus index exceeds context dimension");
  const int slot = v.slot();
  DiffPoly out(ctx_);
  for (const auto& [m, c] : terms_) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      const auto& [s, e] = m[k];
      Monomial dm;
      if (s.kind == SymbolKind::Param)
        continue;
      if (s.kind == SymbolKind::Coord) {
        if (v.kind != IndependentVar::Kind::X || s.id != slot)
          continue;
        // d/dx_i of x_i^e
        Monomial rest = m;
        if (e == 1)
          rest.erase(rest.begin() + static_cast<long>(k));
        else
          rest[k].second = e - 1;
        out.add_term(rest, c * GaussianRational(e));
        continue;
      }
      Monomial rest = m;
      if (e == 1)
        rest.erase(rest.begin() + static_cast<long>(k));
      else
        rest[k].second = e - 1;
      Monomial dj{{s.differentiated(slot), 1}};
      out.add_term(monomial_mul(rest, dj), c * GaussianRational(e));
    }
  }
  return out;
}

DiffPoly DiffPoly::total_derivative(const MultiIndex& word) const {
  DiffPoly out = *this;
  for (int slot = 0; slot < kSlots; ++slot) {
    IndependentVar v = slot == kSlotY ? IndependentVar::y() : slot == kSlotT ? IndependentVar::t() : IndependentVar::x(slot + 1);
    for (int k = 0; k < word[slot]; ++k)
      out = out.total_derivative(v);
  }
  return out;
}

DiffPoly DiffPoly::substitute(const Symbol& s, const DiffPoly& value) const {
  check(value);
  DiffPoly out(ctx_);
  std::map<int, DiffPoly> powers;
  for (const auto& [m, c] : terms_) {
    auto it = std::find_if(m.begin(), m.end(), [&](const auto& f) { return f.first == s; });
    if (it == m.end()) {
      out.add_term(m, c);
      continue;
    }
    int e = it->second;
    Monomial rest = m;
    rest.erase(rest.begin() + (it - m.begin()));
    auto pit = powers.find(e);
    if (pit == powers.end())
      pit = powers.emplace(e, value.pow(e)).first;
    for (const auto& [pm, pc] : pit->second.terms_)
      out.add_term(monomial_mul(rest, pm), c * pc);
  }
  return out;
}

std::pair<DiffPoly, Monomial> DiffPoly::clear_denominators() const {
  std::map<Symbol, int> need;
  for (const auto& [m, c] : terms_)
    for (const auto& [s, e] : m)
      if (e < 0)
        need[s] = std::max(need[s], -e);
  Monomial mult(need.begin(), need.end());
  if (mult.empty())
    return {*this, mult};
  DiffPoly out(ctx_);
  for (const auto& [m, c] : terms_)
    out.add_term(monomial_mul(m, mult), c);
  return {out, mult};
}

std::complex<double> DiffPoly::eval(const Assignment& a) const {
  std::map<Symbol, std::complex<double>> cache;
  std::complex<double> total = 0.0;
  for (const auto& [m, c] : terms_) {
    std::complex<double> v = c.to_complex();
    for (const auto& [s, e] : m) {
      auto it = cache.find(s);
      if (it == cache.end()) {
        auto val = a(s);
        if (!val)
          throw std::out_of_range("eval_numeric: no value assigned to " + s.str(*ctx_));
        it = cache.emplace(s, *val).first;
      }
      v *= std::pow(it->second, e);
    }
    total += v;
  }
  return total;
}

std::complex<double> DiffPoly::eval(const std::map<Symbol, std::complex<double>>& a) const {
  return eval([&](const Symbol& s) -> std::optional<std::complex<double>> {
    auto it = a.find(s);
    if (it == a.end())
      return std::nullopt;
    return it->second;
  });
}

std::string monomial_str(const Monomial& m, const JetContext& ctx) {
  std::string out;
  for (const auto& [s, e] : m) {
    if (!out.empty())
      out += "*";
    out += s.str(ctx);
    if (e != 1)
      out += "^" + std::to_string(e);
  }
  return out;
}

std::string DiffPoly::str() const {
  if (terms_.empty())
    return "0";
  std::string out;
  bool first = true;
  // highest degree first reads naturally; the order is still canonical
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string coeff;
    bool negative = c.is_real() && sgn(c.re()) < 0;
    GaussianRational shown = negative ? -c : c;
    if (!first)
      out += negative ? " - " : " + ";
    else if (negative)
      out += "-";
    first = false;
    if (m.empty()) {
      out += shown.str();
      continue;
    }
    if (!shown.is_one())
      out += shown.str() + "*";
    out += monomial_str(m, *ctx_);
  }
  return out;
}

} // namespace heavenly
