#pragma once

#include <cstdint>
#include <string>

namespace fbms::test {

struct PropertyOutcome {
    int cases = 0;
    int failures = 0;
    double worst = 0.0;  ///< largest observed error measure
    std::string first_failure;

    bool ok() const { return cases > 0 && failures == 0; }
};

// Randomized property suites over `random_surface` meshes.
PropertyOutcome area_gradient_matches_finite_differences(int cases, std::uint64_t seed);
PropertyOutcome steklov_scaling_law(int cases, std::uint64_t seed);
PropertyOutcome sigma1_length_scale_invariance(int cases, std::uint64_t seed);
PropertyOutcome dtn_symmetric_with_constant_kernel(int cases, std::uint64_t seed);
PropertyOutcome spectrum_nonnegative_and_ordered(int cases, std::uint64_t seed);
PropertyOutcome rayleigh_quotient_bounds_sigma1(int cases, std::uint64_t seed);

}  // namespace fbms::test
