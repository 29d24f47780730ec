#ifndef HEAVENLY_IDEAL_HPP
#define HEAVENLY_IDEAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "heavenly/pde_system.hpp"

namespace heavenly {

struct CertificateTerm {
  int generator = 0;
  MultiIndex word{};
  DiffPoly multiplier;
};

// p = sum of multiplier * D_word(generator)
struct Certificate {
  std::vector<CertificateTerm> terms;
  int order = 0;
  int degree = 0;

  DiffPoly expand(const PdeSystem& sys, const ContextPtr& ctx) const;
  std::string str(const PdeSystem& sys) const;
};

struct MembershipResult {
  std::optional<Certificate> certificate;
  // why the search failed; empty on success
  std::string failure;
  std::size_t unknowns = 0;
  std::size_t equations = 0;

  bool found() const { return certificate.has_value(); }
};

// Searches words of length <= max_order and multiplier monomials of degree
// <= max_degree over the symbols of p and the generators; increases bounds
// progressively and returns the first certificate found.
MembershipResult ideal_membership(const DiffPoly& p, const PdeSystem& sys, int max_order, int max_degree);

std::string word_str(const MultiIndex& w, const JetContext& ctx);

} // namespace heavenly

#endif
