#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "siegel/siegel_point.hpp"

/// Seeded random points of the Siegel upper half space. Uses mt19937_64
/// with an explicit 53-bit mapping to [0, 1), so sequences are identical
/// across platforms and standard libraries.
namespace siegel::sampling {

struct PointDistribution {
    double im_scale = 1.5;         ///< Im tau = im_scale * I + perturbation
    double re_half_width = 0.5;    ///< entries of Re tau uniform in [-w, w]
    double im_half_width = 0.2;    ///< perturbation entries uniform in [-w, w]
};

class PointSampler {
public:
    explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi);
    /// Symmetric real and imaginary parts drawn entry by entry (upper
    /// triangle, row-major); redrawn until Im tau is positive definite.
    SiegelPoint point(int g, const PointDistribution& dist = {});
    std::vector<SiegelPoint> points(int g, int count, const PointDistribution& dist = {});

private:
    std::mt19937_64 rng_;
};

}  // namespace siegel::sampling
