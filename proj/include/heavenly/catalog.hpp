#ifndef HEAVENLY_CATALOG_HPP
#define HEAVENLY_CATALOG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heavenly/spec.hpp"
#include "json.hpp"

namespace heavenly {

class UnknownEquation : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

class InvalidFamilyParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct CatalogEntry {
  std::string id;
  int n = 1;
  Backend backend = Backend::Rewrite;
  std::optional<std::string> family;
};

struct FamilyDescriptor {
  std::string id;
  int base_k = 1;
  int min_k = 1;
  // torus dimension is 2k
};

// base entries, validated once on first use
const EquationSpec& catalog_get(const std::string& id);
std::vector<CatalogEntry> catalog_list();
const std::vector<FamilyDescriptor>& catalog_families();
EquationSpec catalog_instantiate(const std::string& family, int k);

// per-entry validation messages; empty when every entry is sound
std::vector<std::string> catalog_validate_all();

nlohmann::ordered_json spec_json(const EquationSpec& spec);
nlohmann::ordered_json catalog_json();

// "ψ_t + (λ^2 + u)*ψ_x + ... = 0"
std::string render_lax_equation(const IndependentVar& tau, const VectorField& a);

} // namespace heavenly

#endif
