#include "doctest.h"

#include <cstdlib>

#include "properties.hpp"

using namespace hvprop;

namespace {

// HEAVENLY_SEED overrides the fixed default
std::uint64_t seed() {
  const char* s = std::getenv("HEAVENLY_SEED");
  return s ? std::strtoull(s, nullptr, 10) : kDefaultSeed;
}

void require_ok(const PropertyResult& r) {
  CAPTURE(r.first_failure);
  CHECK(r.cases == 1000);
  CHECK(r.failures == 0);
}

} // namespace

TEST_CASE("ring axioms") { require_ok(ring_axioms(seed(), 1000)); }

TEST_CASE("total derivatives commute") { require_ok(total_derivatives_commute(seed() + 1, 1000)); }

TEST_CASE("bracket antisymmetry and Jacobi") { require_ok(bracket_laws(seed() + 2, 1000)); }

TEST_CASE("partial fractions recombine") { require_ok(partial_fraction_roundtrip(seed() + 3, 1000)); }

TEST_CASE("projection completeness") { require_ok(projection_completeness(seed() + 4, 1000)); }

TEST_CASE("a broken identity is detected") {
  auto r = run_property("always fails", 1, 10, [](std::mt19937_64&) { return std::string("no"); });
  CHECK(r.failures == 10);
  CHECK(!r.ok());
  CHECK(r.first_failure == "case 0: no");
}

TEST_CASE("random generators are not degenerate") {
  auto c = property_context();
  std::mt19937_64 rng(kDefaultSeed);
  int brackets = 0, poles = 0, jets = 0;
  for (int k = 0; k < 200; ++k) {
    auto a = random_field(rng, c), b = random_field(rng, c);
    brackets += !lie_bracket(a, b).is_zero();
    auto f = random_rational(rng, c, 3);
    poles += !f.is_polynomial();
    jets += !small_poly(rng, c).total_derivative(X(1)).is_zero();
  }
  CHECK(brackets > 100);
  CHECK(poles > 100);
  CHECK(jets > 100);
}
