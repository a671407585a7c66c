#include "siegel/sampling.hpp"

#include "siegel/error.hpp"

namespace siegel::sampling {

double PointSampler::uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

SiegelPoint PointSampler::point(int g, const PointDistribution& dist) {
    if (g < 1) throw ValidationError("genus must be positive");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Eigen::MatrixXd re(g, g), im(g, g);
        for (int i = 0; i < g; ++i)
            for (int j = i; j < g; ++j) {
                re(i, j) = re(j, i) = uniform(-dist.re_half_width, dist.re_half_width);
                im(i, j) = im(j, i) = (i == j ? dist.im_scale : 0.0) + uniform(-dist.im_half_width, dist.im_half_width);
            }
        if (Eigen::LLT<Eigen::MatrixXd>(im).info() == Eigen::Success) return SiegelPoint(re, im);
    }
    throw ValidationError("sampling distribution does not produce positive-definite imaginary parts");
}

std::vector<SiegelPoint> PointSampler::points(int g, int count, const PointDistribution& dist) {
    std::vector<SiegelPoint> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) out.push_back(point(g, dist));
    return out;
}

}  // namespace siegel::sampling
