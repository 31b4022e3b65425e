#include <doctest.h>

#include "property_checks.hpp"

namespace {
constexpr int kCases = 1000;
}

TEST_CASE("rankings lie in [0,1]") { CHECK(props::alpha_in_unit_interval(kCases, 61) == 0); }

TEST_CASE("rankings are invariant to rescaling the density") { CHECK(props::ranking_scale_invariant(kCases, 62) == 0); }

TEST_CASE("level sets are nested") { CHECK(props::level_sets_nested(kCases, 63) == 0); }

TEST_CASE("mass-volume curve is non-decreasing") { CHECK(props::mass_volume_non_decreasing(kCases, 64) == 0); }

TEST_CASE("persistence curve is non-increasing") { CHECK(props::persistence_non_increasing(kCases, 65) == 0); }

TEST_CASE("true_measure is additive with total mass one on random models") {
  CHECK(props::true_measure_additive(kCases, 66) == 0);
}
