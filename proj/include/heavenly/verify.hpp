#ifndef HEAVENLY_VERIFY_HPP
#define HEAVENLY_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "heavenly/ideal.hpp"
#include "heavenly/spec.hpp"
#include "json.hpp"

namespace heavenly {

enum class Status { Pass, Fail, Conditional, Info };
std::string status_name(Status s);

struct CertBounds {
  int order = 2;
  int degree = 1;
};

// HEAVENLY_MAX_CERT_ORDER overrides the order bound
CertBounds default_cert_bounds();

struct Discharge {
  std::string kind; // rewrite | certificate | unresolved | failed
  std::string detail;
  bool ok = false;
};

struct LaxCondition {
  Condition condition;
  DiffPoly leftover;
  Discharge discharge;
};

struct LaxReport {
  std::string equation_id;
  std::string variant; // empty for the main entry
  Status status = Status::Fail;
  std::vector<LaxCondition> conditions;
  std::vector<std::string> notes;
};

struct LaxOptions {
  CertBounds bounds = default_cert_bounds();
  std::optional<std::string> variant;
};

// spec with the named variant's PDE and fields substituted
EquationSpec apply_variant(const EquationSpec& spec, const std::string& label);

LaxReport verify_lax(const EquationSpec& spec, const LaxOptions& opts = {});
// main entry first, then every variant
std::vector<LaxReport> verify_lax_all_variants(const EquationSpec& spec, const CertBounds& bounds = default_cert_bounds());

struct LaxSystem {
  std::string text;
  nlohmann::ordered_json json;
};
LaxSystem emit_lax_system(const EquationSpec& spec);

struct ComponentOrder {
  Direction direction;
  std::optional<int> first_nonvanishing;
  // first order reached by the truncated tail
  int threshold = 0;
  // last order computed in the exact-tail pass
  int computed_through = 0;
  bool excluded = false;
  std::string leading_coefficient;
};

struct CasimirReport {
  std::string equation_id;
  int casimir_index = 0;
  std::string label;
  ExpansionPoint point;
  std::optional<int> first_nonvanishing_order;
  int threshold = 0;
  int catalog_threshold = 0;
  int tail = 0;
  int printed_tail = 0;
  Status status = Status::Fail;
  std::optional<Status> printed_tail_status;
  std::optional<Direction> binding;
  std::vector<ComponentOrder> components;
  std::vector<std::string> notes;
};

struct CasimirOptions {
  int extra_orders = 2;
  CertBounds bounds = default_cert_bounds();
  // tail used instead of the catalog's validated tail
  std::optional<int> tail_override;
};

// Orders are powers of the local parameter: λ - p, or 1/λ at infinity.
CasimirReport casimir_residual_order(const EquationSpec& spec, int index, const CasimirOptions& opts = {});
CasimirReport casimir_residual_order(const EquationSpec& spec, int index, const GradientExpansion& g,
                                     const CasimirOptions& opts = {});

struct SeedExactness {
  std::string label;
  ExactnessResult result;
  std::optional<bool> expected;
  Status status = Status::Info;
};

struct ExactnessReport {
  std::string equation_id;
  Status status = Status::Info;
  std::vector<SeedExactness> seeds;
};

ExactnessReport verify_exactness(const EquationSpec& spec);

nlohmann::ordered_json report_json(const LaxReport& r, const JetContext& ctx);
nlohmann::ordered_json report_json(const CasimirReport& r, const JetContext& ctx);
nlohmann::ordered_json report_json(const ExactnessReport& r, const JetContext& ctx);

std::string report_text(const LaxReport& r, const JetContext& ctx);
std::string report_text(const CasimirReport& r, const JetContext& ctx);
std::string report_text(const ExactnessReport& r, const JetContext& ctx);

} // namespace heavenly

#endif
