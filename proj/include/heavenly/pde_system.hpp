#ifndef HEAVENLY_PDE_SYSTEM_HPP
#define HEAVENLY_PDE_SYSTEM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "heavenly/jet.hpp"

namespace heavenly {

class NonTerminatingRewrite : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Well-founded ranking on jets, compatible with total differentiation:
// weighted order (dependent offset + sum of slot weights), then dependent id,
// then the multi-index read in `priority` slot order.
struct Ranking {
  std::vector<int> dep_offset;
  std::array<int, kSlots> weights{};
  std::vector<int> priority;
  std::string description;

  static Ranking uniform(const JetContext& ctx);

  using Key = std::tuple<int, int, std::array<int, kSlots>>;
  Key key(const Symbol& s) const;
  bool less(const Symbol& a, const Symbol& b) const { return key(a) < key(b); }
};

// Oriented rewrite: every jet dominating `leading` is replaced by the matching
// total derivative of `rhs`.
struct Rule {
  Symbol leading;
  DiffPoly rhs;
  std::string label;
};

struct PdeSystem {
  ContextPtr ctx;
  std::vector<Rule> rules;
  std::vector<DiffPoly> generators;
  std::vector<std::string> generator_labels;
  Ranking ranking;

  explicit PdeSystem(ContextPtr c) : ctx(std::move(c)), ranking(Ranking::uniform(*ctx)) {}

  // first rule whose leading pattern is dominated by s
  const Rule* match(const Symbol& s) const;
  bool is_principal(const Symbol& s) const { return match(s) != nullptr; }
  // termination and self-reduction problems; empty when the system is sound
  std::vector<std::string> audit() const;
};

struct ReduceOptions {
  // pick principal jets in random order (one substitution at a time) instead
  // of the memoized highest-rank-first strategy
  std::optional<std::uint64_t> shuffle_seed;
  std::size_t max_steps = 200000;
};

// Normal form modulo the rules and their prolongations. The prolongation cache
// lives in the object; one Reducer per thread.
class Reducer {
public:
  explicit Reducer(const PdeSystem& sys) : sys_(sys) {}

  DiffPoly normal_form(const DiffPoly& p);
  DiffPoly normal_form_shuffled(const DiffPoly& p, std::uint64_t seed, std::size_t max_steps);
  const std::set<std::string>& rules_used() const { return used_; }

private:
  const DiffPoly& symbol_normal_form(const Symbol& s);
  DiffPoly prolonged_rhs(const Symbol& s, const Rule& r);

  const PdeSystem& sys_;
  std::map<Symbol, DiffPoly> cache_;
  std::set<std::string> used_;
};

DiffPoly reduce(const DiffPoly& p, const PdeSystem& sys, const ReduceOptions& opts = {});

} // namespace heavenly

#endif
