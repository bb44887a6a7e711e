#pragma once

#include <span>
#include <vector>

#include "mclt/rng.hpp"

namespace mclt {

// Output of the variance-completing extension of one path: the original
// increments up to the stopping index tau, then r fair +-gamma steps, one
// residual step soaking up the remaining variance deficit, and zeros out to
// length 2n. The accumulated conditional variance of the result equals the
// supplied s2 exactly, so the normalized quadratic variation is 1.
struct AugmentResult {
  std::vector<double> increments;      // length 2n
  std::vector<double> cond_variances;  // length 2n
  long tau = 0;                        // stopping index in [0, n]
  long r = 0;                          // count of +-gamma filler steps
  double residual_magnitude = 0.0;
};

// increments / cond_variances describe one generated path of length n with
// |increment| <= gamma everywhere; s2 is the generating sequence's total
// variance sum_i E[X_i^2] (exact value or an externally calibrated estimate);
// filler and residual signs are drawn from `stream`.
//
// Throws std::invalid_argument when an increment exceeds gamma, s2 is not
// positive, s2 is inconsistent with the gamma bound (s2 > n*gamma^2), or the
// residual variance comes out negative beyond round-off (-1e-10).
AugmentResult augment_path(std::span<const double> increments,
                           std::span<const double> cond_variances, double s2,
                           double gamma, RngStream& stream);

// True iff the accumulated conditional variance of the augmented path equals
// s2 within 1e-10.
bool verify_v2_one(const AugmentResult& result, double s2);

}  // namespace mclt
