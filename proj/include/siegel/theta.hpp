#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include "siegel/siegel_point.hpp"

/// Siegel theta functions with characteristics,
///
///   theta[eps; eps'](tau, z) = sum_{m in Z^g} exp(pi i (x^t tau x + 2 x^t (z + eps'/2))),
///   x = m + eps/2,
///
/// evaluated as a box sum with a certified bound on the discarded tail.
/// Characteristic length equals the genus of the point.
namespace siegel::theta {

using Quad = boost::multiprecision::float128;
using QuadComplex = boost::multiprecision::complex128;

enum class Parity { even, odd };

class Characteristic {
public:
    Characteristic(std::vector<std::uint8_t> eps, std::vector<std::uint8_t> eps_prime);
    /// "eps/eps'" bit strings, e.g. "010/110".
    static Characteristic parse(std::string_view text);

    int size() const { return static_cast<int>(eps_.size()); }
    const std::vector<std::uint8_t>& eps() const { return eps_; }
    const std::vector<std::uint8_t>& eps_prime() const { return eps_prime_; }
    Parity parity() const { return parity_; }
    std::string to_string() const;

    /// Append the bits of another characteristic (block concatenation).
    Characteristic concat(const Characteristic& other) const;

    bool operator==(const Characteristic& o) const { return eps_ == o.eps_ && eps_prime_ == o.eps_prime_; }

private:
    std::vector<std::uint8_t> eps_;
    std::vector<std::uint8_t> eps_prime_;
    Parity parity_ = Parity::even;
};

inline Parity parity(const Characteristic& c) { return c.parity(); }

/// All 4^h characteristics, eps major and eps' minor, each read as a binary
/// number with the first bit most significant.
std::vector<Characteristic> all_characteristics(int h);
/// The even ones, in the same order; 2^(h-1) (2^h + 1) of them.
std::vector<Characteristic> even_characteristics(int h);

struct ThetaOptions {
    /// Points whose Im(tau) has a smaller eigenvalue are rejected.
    double lambda_floor = 0.05;
    /// Supported range for |Im z| (Euclidean norm).
    double z_imag_bound = 2.0;
};

/// Smallest tolerance accepted by the double-precision evaluators.
inline constexpr double kToleranceFloor = 1e-12;
/// Smallest tolerance accepted by the quad-precision evaluators.
inline constexpr double kQuadToleranceFloor = 1e-30;

/// Bound on sum over x in Z^g + eps/2 with |x|_inf > r of
/// exp(-pi lambda |x|^2 + 2 pi w |x|), valid for r >= w / lambda.
double tail_bound(int g, double lambda, int r, double w = 0.0);

/// Smallest R >= 0 whose tail bound is below tol; nonincreasing in the
/// smallest eigenvalue of im_tau.
int truncation_radius(const Eigen::MatrixXd& im_tau, double tol, double z_imag_norm = 0.0,
                      const ThetaOptions& opts = {});

Complex theta_function(const Characteristic& c, const SiegelPoint& tau, const Eigen::VectorXcd& z, double tol,
                       const ThetaOptions& opts = {});
Complex theta_constant(const Characteristic& c, const SiegelPoint& tau, double tol, const ThetaOptions& opts = {});

/// Theta constants for several characteristics at one point. Characteristics
/// with equal eps share one pass over the summation box.
std::vector<Complex> theta_constants(const std::vector<Characteristic>& cs, const SiegelPoint& tau, double tol,
                                     const ThetaOptions& opts = {});
/// The same in binary128 arithmetic, for tol down to kQuadToleranceFloor.
std::vector<QuadComplex> theta_constants_quad(const std::vector<Characteristic>& cs, const SiegelPoint& tau,
                                              double tol, const ThetaOptions& opts = {});

}  // namespace siegel::theta
