#include "heavenly/lambda.hpp"

#include <algorithm>

namespace heavenly {

namespace {

using NumPoly = std::vector<GaussianRational>;

GaussianRational binomial(int n, int k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return GaussianRational(mpq_class(b));
}

NumPoly num_mul(const NumPoly& a, const NumPoly& b) {
  if (a.empty() || b.empty())
    return {};
  NumPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] += a[i] * b[j];
  return out;
}

NumPoly num_linear_power(const GaussianRational& p, int m) {
  NumPoly out{GaussianRational(1)};
  for (int k = 0; k < m; ++k)
    out = num_mul(out, NumPoly{-p, GaussianRational(1)});
  return out;
}

NumPoly num_taylor(const NumPoly& a, const GaussianRational& p) {
  NumPoly out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = j; k < a.size(); ++k)
      out[j] += binomial(static_cast<int>(k), static_cast<int>(j)) * p.pow(static_cast<int>(k - j)) * a[k];
  return out;
}

LambdaPoly from_num(const ContextPtr& ctx, const NumPoly& a) {
  std::vector<DiffPoly> c;
  for (const auto& v : a)
    c.emplace_back(ctx, v);
  return LambdaPoly(ctx, std::move(c));
}

std::string wrap(const std::string& s) {
  if (s.find(' ') == std::string::npos)
    return s;
  return "(" + s + ")";
}

} // namespace

// ---------------------------------------------------------------- LambdaPoly

LambdaPoly::LambdaPoly(ContextPtr ctx) : ctx_(std::move(ctx)) {
  if (!ctx_)
    throw std::invalid_argument("LambdaPoly requires a context");
}

LambdaPoly::LambdaPoly(ContextPtr ctx, std::vector<DiffPoly> coeffs) : LambdaPoly(std::move(ctx)) {
  coeffs_ = std::move(coeffs);
  for (const auto& c : coeffs_)
    if (!same_context(ctx_, c.context()))
      throw ContextMismatch("LambdaPoly coefficient from a different context");
  trim();
}

LambdaPoly::LambdaPoly(const DiffPoly& constant) : LambdaPoly(constant.context(), {constant}) {}

LambdaPoly LambdaPoly::monomial(const DiffPoly& c, int power) {
  if (power < 0)
    throw std::invalid_argument("LambdaPoly::monomial: negative power");
  std::vector<DiffPoly> v(static_cast<std::size_t>(power) + 1, DiffPoly(c.context()));
  v.back() = c;
  return LambdaPoly(c.context(), std::move(v));
}

LambdaPoly LambdaPoly::linear_power(ContextPtr ctx, const GaussianRational& p, int m) {
  return from_num(ctx, num_linear_power(p, m));
}

void LambdaPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero())
    coeffs_.pop_back();
}

void LambdaPoly::check(const LambdaPoly& o) const {
  if (!same_context(ctx_, o.ctx_))
    throw ContextMismatch("LambdaPoly operands belong to different jet contexts");
}

DiffPoly LambdaPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size()))
    return DiffPoly(ctx_);
  return coeffs_[k];
}

LambdaPoly LambdaPoly::operator-() const {
  LambdaPoly out(*this);
  for (auto& c : out.coeffs_)
    c = -c;
  return out;
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& o) {
  check(o);
  if (coeffs_.size() < o.coeffs_.size())
    coeffs_.resize(o.coeffs_.size(), DiffPoly(ctx_));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k)
    coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

LambdaPoly& LambdaPoly::operator-=(const LambdaPoly& o) { return *this += -o; }

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
  a.check(b);
  if (a.is_zero() || b.is_zero())
    return LambdaPoly(a.ctx_);
  std::vector<DiffPoly> out(a.coeffs_.size() + b.coeffs_.size() - 1, DiffPoly(a.ctx_));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero())
      continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      if (!b.coeffs_[j].is_zero())
        out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return LambdaPoly(a.ctx_, std::move(out));
}

LambdaPoly operator*(LambdaPoly a, const DiffPoly& c) {
  for (auto& v : a.coeffs_)
    v *= c;
  a.trim();
  return a;
}

LambdaPoly operator*(LambdaPoly a, const GaussianRational& c) {
  for (auto& v : a.coeffs_)
    v *= c;
  a.trim();
  return a;
}

bool operator==(const LambdaPoly& a, const LambdaPoly& b) {
  return same_context(a.ctx_, b.ctx_) && a.coeffs_ == b.coeffs_;
}

LambdaPoly LambdaPoly::derivative() const {
  std::vector<DiffPoly> out;
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    out.push_back(coeffs_[k] * GaussianRational(static_cast<long>(k)));
  return LambdaPoly(ctx_, std::move(out));
}

LambdaPoly LambdaPoly::total_derivative(IndependentVar v) const {
  std::vector<DiffPoly> out;
  for (const auto& c : coeffs_)
    out.push_back(c.total_derivative(v));
  return LambdaPoly(ctx_, std::move(out));
}

DiffPoly LambdaPoly::eval_at(const GaussianRational& p) const {
  DiffPoly acc(ctx_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * p + *it;
  return acc;
}

std::vector<DiffPoly> LambdaPoly::taylor_at(const GaussianRational& p) const {
  std::vector<DiffPoly> out(coeffs_.size(), DiffPoly(ctx_));
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    for (std::size_t k = j; k < coeffs_.size(); ++k)
      if (!coeffs_[k].is_zero())
        out[j] += coeffs_[k] * (binomial(static_cast<int>(k), static_cast<int>(j)) * p.pow(static_cast<int>(k - j)));
  return out;
}

std::pair<LambdaPoly, DiffPoly> LambdaPoly::divide_linear(const GaussianRational& p) const {
  if (coeffs_.empty())
    return {LambdaPoly(ctx_), DiffPoly(ctx_)};
  std::vector<DiffPoly> q(coeffs_.size() - 1, DiffPoly(ctx_));
  DiffPoly carry(ctx_);
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    DiffPoly cur = coeffs_[k] + carry * p;
    if (k == 0)
      return {LambdaPoly(ctx_, std::move(q)), cur};
    q[k - 1] = cur;
    carry = cur;
  }
  return {LambdaPoly(ctx_, std::move(q)), DiffPoly(ctx_)};
}

std::string LambdaPoly::str() const {
  if (coeffs_.empty())
    return "0";
  std::string out;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const DiffPoly& c = coeffs_[k];
    if (c.is_zero())
      continue;
    std::string cs = c.str();
    std::string lam = k == 0 ? "" : k == 1 ? "λ" : "λ^" + std::to_string(k);
    std::string term;
    if (k == 0)
      term = cs;
    else if (cs == "1")
      term = lam;
    else if (cs == "-1")
      term = "-" + lam;
    else
      term = wrap(cs) + "*" + lam;
    if (out.empty())
      out = term;
    else if (term[0] == '-' && term.size() > 1 && term[1] != '(' && term.find(' ') == std::string::npos)
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out;
}

// ------------------------------------------------------------ LambdaRational

std::vector<GaussianRational> denominator_coeffs(const PoleMap& poles) {
  NumPoly out{GaussianRational(1)};
  for (const auto& [p, m] : poles)
    out = num_mul(out, num_linear_power(p, m));
  return out;
}

std::string pole_factor_str(const GaussianRational& p, int m) {
  std::string base;
  if (p.is_zero())
    base = "λ";
  else if (p.str()[0] == '-')
    base = "(λ + " + (-p).str() + ")";
  else
    base = "(λ - " + p.str() + ")";
  return m == 1 ? base : base + "^" + std::to_string(m);
}

LambdaRational::LambdaRational(ContextPtr ctx) : num_(std::move(ctx)) {}

LambdaRational::LambdaRational(LambdaPoly num, PoleMap poles) : num_(std::move(num)), poles_(std::move(poles)) {
  for (const auto& [p, m] : poles_)
    if (m < 0)
      throw std::invalid_argument("LambdaRational: negative pole multiplicity");
  normalize();
}

LambdaRational::LambdaRational(const DiffPoly& constant) : num_(constant) {}

LambdaRational LambdaRational::pole(const DiffPoly& c, const GaussianRational& p, int m) {
  return LambdaRational(LambdaPoly(c), PoleMap{{p, m}});
}

void LambdaRational::normalize() {
  if (num_.is_zero()) {
    poles_.clear();
    return;
  }
  for (auto it = poles_.begin(); it != poles_.end();) {
    while (it->second > 0) {
      auto [q, r] = num_.divide_linear(it->first);
      if (!r.is_zero())
        break;
      num_ = std::move(q);
      --it->second;
    }
    if (it->second == 0)
      it = poles_.erase(it);
    else
      ++it;
  }
}

int LambdaRational::pole_order(const GaussianRational& p) const {
  auto it = poles_.find(p);
  return it == poles_.end() ? 0 : it->second;
}

int LambdaRational::degree_at_infinity() const {
  int e = 0;
  for (const auto& [p, m] : poles_)
    e += m;
  return num_.degree() - e;
}

LambdaRational LambdaRational::operator-() const {
  LambdaRational out(*this);
  out.num_ = -out.num_;
  return out;
}

LambdaRational& LambdaRational::operator+=(const LambdaRational& o) {
  if (o.is_zero())
    return *this;
  if (is_zero())
    return *this = o;
  PoleMap common = poles_;
  for (const auto& [p, m] : o.poles_)
    common[p] = std::max(common[p], m);
  LambdaPoly a = num_, b = o.num_;
  for (const auto& [p, m] : common) {
    int da = m - pole_order(p), db = m - o.pole_order(p);
    if (da)
      a = a * LambdaPoly::linear_power(context(), p, da);
    if (db)
      b = b * LambdaPoly::linear_power(context(), p, db);
  }
  num_ = a + b;
  poles_ = std::move(common);
  normalize();
  return *this;
}

LambdaRational& LambdaRational::operator-=(const LambdaRational& o) { return *this += -o; }

LambdaRational operator*(const LambdaRational& a, const LambdaRational& b) {
  PoleMap poles = a.poles_;
  for (const auto& [p, m] : b.poles_)
    poles[p] += m;
  return LambdaRational(a.num_ * b.num_, std::move(poles));
}

LambdaRational operator*(LambdaRational a, const GaussianRational& c) {
  a.num_ = a.num_ * c;
  a.normalize();
  return a;
}

bool operator==(const LambdaRational& a, const LambdaRational& b) { return a.num_ == b.num_ && a.poles_ == b.poles_; }

LambdaRational LambdaRational::d_lambda() const {
  if (poles_.empty())
    return LambdaRational(num_.derivative());
  const ContextPtr& ctx = context();
  LambdaPoly simple(ctx, {DiffPoly(ctx, 1)});
  for (const auto& [p, m] : poles_)
    simple = simple * LambdaPoly::linear_power(ctx, p, 1);
  // Q'/Q = sum m/(lambda-p); multiply through by prod (lambda-p)
  LambdaPoly logder(ctx);
  for (const auto& [p, m] : poles_) {
    LambdaPoly rest(ctx, {DiffPoly(ctx, GaussianRational(m))});
    for (const auto& [q, mq] : poles_)
      if (!(q == p))
        rest = rest * LambdaPoly::linear_power(ctx, q, 1);
    logder += rest;
  }
  PoleMap raised = poles_;
  for (auto& [p, m] : raised)
    ++m;
  return LambdaRational(num_.derivative() * simple - num_ * logder, std::move(raised));
}

LambdaRational LambdaRational::total_derivative(IndependentVar v) const {
  return LambdaRational(num_.total_derivative(v), poles_);
}

LambdaRational LambdaRational::scaled(const DiffPoly& c) const { return LambdaRational(num_ * c, poles_); }

std::complex<double> LambdaRational::eval(const Assignment& a, std::complex<double> lambda) const {
  std::complex<double> n = 0.0;
  for (std::size_t k = num_.coeffs().size(); k-- > 0;)
    n = n * lambda + num_.coeffs()[k].eval(a);
  std::complex<double> d = 1.0;
  for (const auto& [p, m] : poles_)
    d *= std::pow(lambda - p.to_complex(), m);
  return n / d;
}

std::string LambdaRational::str() const {
  std::string n = num_.str();
  if (poles_.empty())
    return n;
  std::string den;
  for (auto it = poles_.rbegin(); it != poles_.rend(); ++it) {
    if (!den.empty())
      den += "*";
    den += pole_factor_str(it->first, it->second);
  }
  if (poles_.size() > 1 || den.find('^') != std::string::npos)
    den = "(" + den + ")";
  return wrap(n) + " / " + den;
}

// --------------------------------------------------------- partial fractions

PartialFractions partial_fractions(const LambdaRational& f) {
  const ContextPtr& ctx = f.context();
  PartialFractions out{LambdaPoly(ctx), {}};
  NumPoly den = denominator_coeffs(f.poles());
  const auto& n = f.numerator().coeffs();
  const int dd = static_cast<int>(den.size()) - 1;
  // long division by the monic numeric denominator
  std::vector<DiffPoly> rem(n.begin(), n.end());
  if (static_cast<int>(rem.size()) - 1 >= dd) {
    std::vector<DiffPoly> q(rem.size() - dd, DiffPoly(ctx));
    for (int k = static_cast<int>(rem.size()) - 1; k >= dd; --k) {
      DiffPoly lead = rem[k];
      if (lead.is_zero())
        continue;
      q[k - dd] = lead;
      for (int j = 0; j <= dd; ++j)
        rem[k - dd + j] -= lead * den[j];
    }
    out.polynomial = LambdaPoly(ctx, std::move(q));
  }
  for (const auto& [p, m] : f.poles()) {
    LaurentSeries s = laurent_expand(f, ExpansionPoint::at(p), -1);
    std::vector<DiffPoly> parts;
    for (int j = 1; j <= m; ++j)
      parts.push_back(s.coeff(-j));
    out.principal.emplace(p, std::move(parts));
  }
  return out;
}

LambdaRational PartialFractions::recombine() const {
  LambdaRational out{polynomial};
  for (const auto& [p, parts] : principal)
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (!parts[j].is_zero())
        out += LambdaRational::pole(parts[j], p, static_cast<int>(j) + 1);
  return out;
}

Projection split_projection(const LambdaRational& f) {
  PartialFractions pf = partial_fractions(f);
  LambdaRational plus{pf.polynomial};
  pf.polynomial = LambdaPoly(f.context());
  return {plus, pf.recombine()};
}

// ------------------------------------------------------------ LaurentSeries

LaurentSeries::LaurentSeries(ContextPtr ctx, ExpansionPoint point, int lowest, std::vector<DiffPoly> coeffs,
                             int known_through)
    : ctx_(std::move(ctx)), point_(std::move(point)), lowest_(lowest), coeffs_(std::move(coeffs)), known_(known_through) {
  const int len = std::max(0, known_ - lowest_ + 1);
  if (static_cast<int>(coeffs_.size()) > len)
    throw std::invalid_argument("LaurentSeries: more coefficients than the known range");
  coeffs_.resize(len, DiffPoly(ctx_));
}

LaurentSeries LaurentSeries::exact_zero(ContextPtr ctx, ExpansionPoint point, int known_through) {
  return LaurentSeries(std::move(ctx), std::move(point), known_through + 1, {}, known_through);
}

DiffPoly LaurentSeries::coeff(int k) const {
  if (k > known_)
    throw std::out_of_range("LaurentSeries: order " + std::to_string(k) + " beyond known order " +
                            std::to_string(known_));
  if (k < lowest_)
    return DiffPoly(ctx_);
  return coeffs_[k - lowest_];
}

std::optional<int> LaurentSeries::first_nonzero() const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (!coeffs_[k].is_zero())
      return lowest_ + static_cast<int>(k);
  return std::nullopt;
}

void LaurentSeries::check(const LaurentSeries& o) const {
  if (!same_context(ctx_, o.ctx_))
    throw ContextMismatch("LaurentSeries operands belong to different jet contexts");
  if (!(point_ == o.point_))
    throw std::invalid_argument("LaurentSeries operands expanded at different points");
}

LaurentSeries LaurentSeries::operator-() const { return scaled(GaussianRational(-1)); }

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  a.check(b);
  int low = std::min(a.lowest_, b.lowest_), known = std::min(a.known_, b.known_);
  std::vector<DiffPoly> c;
  for (int k = low; k <= known; ++k)
    c.push_back((k >= a.lowest_ ? a.coeffs_[k - a.lowest_] : DiffPoly(a.ctx_)) +
                (k >= b.lowest_ ? b.coeffs_[k - b.lowest_] : DiffPoly(a.ctx_)));
  return LaurentSeries(a.ctx_, a.point_, low, std::move(c), known);
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  a.check(b);
  int known = std::min(a.effective_lowest() + b.known_, b.effective_lowest() + a.known_);
  int low = a.lowest_ + b.lowest_;
  std::vector<DiffPoly> c;
  for (int k = low; k <= known; ++k) {
    DiffPoly acc(a.ctx_);
    for (int i = a.lowest_; i <= a.known_; ++i) {
      int j = k - i;
      if (j < b.lowest_ || j > b.known_)
        continue;
      const DiffPoly& x = a.coeffs_[i - a.lowest_];
      const DiffPoly& y = b.coeffs_[j - b.lowest_];
      if (!x.is_zero() && !y.is_zero())
        acc += x * y;
    }
    c.push_back(std::move(acc));
  }
  return LaurentSeries(a.ctx_, a.point_, low, std::move(c), known);
}

LaurentSeries LaurentSeries::scaled(const GaussianRational& c) const {
  LaurentSeries out(*this);
  for (auto& v : out.coeffs_)
    v *= c;
  return out;
}

LaurentSeries LaurentSeries::scaled(const DiffPoly& c) const {
  LaurentSeries out(*this);
  for (auto& v : out.coeffs_)
    v *= c;
  return out;
}

LaurentSeries LaurentSeries::d_lambda() const {
  std::vector<DiffPoly> c;
  if (point_.infinite) {
    // d/dlambda w^k = -k w^(k+1)
    for (int k = lowest_; k <= known_; ++k)
      c.push_back(coeffs_[k - lowest_] * GaussianRational(-k));
    return LaurentSeries(ctx_, point_, lowest_ + 1, std::move(c), known_ + 1);
  }
  for (int k = lowest_; k <= known_; ++k)
    c.push_back(coeffs_[k - lowest_] * GaussianRational(k));
  return LaurentSeries(ctx_, point_, lowest_ - 1, std::move(c), known_ - 1);
}

LaurentSeries LaurentSeries::total_derivative(IndependentVar v) const {
  return map_coeffs([&](const DiffPoly& p) { return p.total_derivative(v); });
}

LaurentSeries LaurentSeries::map_coeffs(const std::function<DiffPoly(const DiffPoly&)>& f) const {
  LaurentSeries out(*this);
  for (auto& v : out.coeffs_)
    v = f(v);
  return out;
}

LaurentSeries LaurentSeries::truncated(int known_through) const {
  if (known_through >= known_)
    return *this;
  std::vector<DiffPoly> c;
  for (int k = lowest_; k <= known_through; ++k)
    c.push_back(coeffs_[k - lowest_]);
  return LaurentSeries(ctx_, point_, lowest_, std::move(c), known_through);
}

LaurentSeries LaurentSeries::shifted(int k) const {
  return LaurentSeries(ctx_, point_, lowest_ + k, coeffs_, known_ + k);
}

LambdaRational LaurentSeries::to_rational() const {
  LambdaRational out(ctx_);
  for (int k = lowest_; k <= known_; ++k) {
    const DiffPoly& c = coeffs_[k - lowest_];
    if (c.is_zero())
      continue;
    if (point_.infinite) {
      if (k <= 0)
        out += LambdaRational(LambdaPoly::monomial(c, -k));
      else
        out += LambdaRational::pole(c, GaussianRational(0), k);
    } else {
      if (k >= 0)
        out += LambdaRational(LambdaPoly::linear_power(ctx_, point_.value, k) * c);
      else
        out += LambdaRational::pole(c, point_.value, -k);
    }
  }
  return out;
}

std::string LaurentSeries::str() const {
  std::string z = point_.infinite ? "λ" : point_.value.is_zero() ? "λ" : pole_factor_str(point_.value, 1);
  std::string out;
  for (int k = lowest_; k <= known_; ++k) {
    const DiffPoly& c = coeffs_[k - lowest_];
    if (c.is_zero())
      continue;
    int e = point_.infinite ? -k : k;
    std::string term = wrap(c.str());
    if (e != 0)
      term += "*" + z + (e == 1 ? "" : "^" + std::to_string(e));
    out += (out.empty() ? "" : " + ") + term;
  }
  int tail = point_.infinite ? -(known_ + 1) : known_ + 1;
  out += (out.empty() ? "" : " + ") + std::string("O(") + z + "^" + std::to_string(tail) + ")";
  return out;
}

LaurentSeries laurent_expand(const LambdaRational& f, const ExpansionPoint& point, int order) {
  const ContextPtr& ctx = f.context();
  if (f.is_zero())
    return LaurentSeries::exact_zero(ctx, point, order);
  const auto& n = f.numerator().coeffs();
  std::vector<DiffPoly> ntil;
  NumPoly dtil;
  int low;
  if (point.infinite) {
    NumPoly den = denominator_coeffs(f.poles());
    const int d = f.numerator().degree(), e = static_cast<int>(den.size()) - 1;
    for (int j = 0; j <= d; ++j)
      ntil.push_back(n[d - j]);
    for (int j = 0; j <= e; ++j)
      dtil.push_back(den[e - j]);
    low = e - d;
  } else {
    const int m = f.pole_order(point.value);
    PoleMap others = f.poles();
    others.erase(point.value);
    ntil = f.numerator().taylor_at(point.value);
    dtil = num_taylor(denominator_coeffs(others), point.value);
    low = -m;
  }
  const int count = order - low + 1;
  std::vector<DiffPoly> g;
  if (count > 0) {
    GaussianRational inv0 = dtil[0].inverse();
    for (int j = 0; j < count; ++j) {
      DiffPoly acc = j < static_cast<int>(ntil.size()) ? ntil[j] : DiffPoly(ctx);
      for (int i = 1; i <= j && i < static_cast<int>(dtil.size()); ++i)
        if (!dtil[i].is_zero())
          acc -= g[j - i] * dtil[i];
      g.push_back(acc * inv0);
    }
  }
  return LaurentSeries(ctx, point, low, std::move(g), order);
}

} // namespace heavenly
