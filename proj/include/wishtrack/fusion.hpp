// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "wishtrack/measures.hpp"

namespace wishtrack {

enum class FusionMethod { CI, LE };

struct FusionResult {
    GaussianEstimate fused;
    FusionMethod method;
    double omega = 0.0;  // CI weight on the first input; unused for LE
};

// Covariance intersection with the trace-minimizing weight.
FusionResult fuse_ci(const GaussianEstimate& a, const GaussianEstimate& b);
// CI at a fixed weight.
GaussianEstimate fuse_ci_at(const GaussianEstimate& a, const GaussianEstimate& b, double omega);

// Largest ellipsoid within the intersection of the two covariance ellipsoids.
FusionResult fuse_le(const GaussianEstimate& a, const GaussianEstimate& b);

// sqrt of the mean trace
double rmt(std::span<const SpdMatrix> covariances);

}  // namespace wishtrack
