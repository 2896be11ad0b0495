#pragma once

#include "sforge/hypercube.hpp"

#include <cstdint>
#include <vector>

namespace sforge {

struct ReferenceFrames {
    Hypercube white; // counts
    Hypercube dark;  // counts
    double epsilon = 1e-6; // smallest trusted (white - dark) denominator
};

struct CalibrationResult {
    Hypercube reflectance;
    // element-aligned validity flags (1 = trusted); a flagged element is
    // zeroed in the cube and excluded from downstream ROI statistics
    std::vector<std::uint8_t> valid;
    std::size_t invalid_count = 0;
};

// (raw - dark) / (white - dark) per element, clipped to [0, r_max].
// Elements with denominator <= epsilon, or a non-finite intermediate,
// are marked invalid and set to 0. Throws ShapeMismatch when the three
// cubes disagree in shape or wavelength axis.
CalibrationResult calibrate_reflectance(const Hypercube& raw,
                                        const ReferenceFrames& refs,
                                        double r_max = 2.0);

} // namespace sforge
