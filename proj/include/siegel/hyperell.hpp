#pragma once

#include <vector>

#include <Eigen/Dense>

#include "siegel/siegel_point.hpp"

/// Period matrices of hyperelliptic curves y^2 = prod (x - b_i) with 2g + 2
/// distinct real branch points b_1 < ... < b_{2g+2}.
///
/// Homology basis: a_j encircles the cut [b_{2j-1}, b_{2j}]; b_j runs from
/// cut j to the last cut on one sheet and back on the other. On the upper
/// edge of the real axis y = sqrt|p(x)| i^N(x), N(x) being the number of
/// branch points to the right of x, so every cycle integral is a signed sum
/// of interval integrals of x^(k-1) / sqrt|p(x)|.
namespace siegel::hyperell {

class HyperellipticCurve {
public:
    /// Relative gap floor: consecutive branch points closer than this times
    /// the total spread are rejected as ill-conditioned.
    static constexpr double kGapFloor = 1e-6;

    const std::vector<double>& branch() const { return branch_; }
    int genus() const { return static_cast<int>(branch_.size()) / 2 - 1; }

private:
    friend HyperellipticCurve validate_curve(std::vector<double> branch);
    std::vector<double> branch_;
};

/// Sorts and checks the branch points: even count >= 4, no duplicates,
/// finite values, gaps above the conditioning floor.
HyperellipticCurve validate_curve(std::vector<double> branch);

struct PeriodData {
    /// A(k, j) = integral of x^k dx / y over a_j; B likewise over b_j.
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
    int quad_order = 0;  ///< order of the returned (doubled) rule
    double drift = 0.0;  ///< max entry change between order n and 2n
};

/// Largest entry change tolerated when the quadrature order is doubled.
inline constexpr double kConvergenceGate = 1e-9;

/// Gauss-Chebyshev quadrature per interval, the weight 1/sqrt((x-a)(b-x))
/// absorbing the endpoint singularities. Evaluated at quad_order and
/// 2 quad_order; ConvergenceError if they differ by kConvergenceGate or more.
PeriodData periods(const HyperellipticCurve& curve, int quad_order = 256);

/// tau = A^-1 B, checked against the Riemann relations (symmetric to 1e-8,
/// Im tau positive definite), then symmetrized.
SiegelPoint jacobian_point(const HyperellipticCurve& curve, int quad_order = 256);

}  // namespace siegel::hyperell
