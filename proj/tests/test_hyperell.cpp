#include <doctest.h>

#include <cmath>

#include "siegel/error.hpp"
#include "siegel/hyperell.hpp"

using namespace siegel;
using namespace siegel::hyperell;

namespace {

double agm(double a, double b) {
    for (int it = 0; it < 40 && a != b; ++it) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return a;
}

// Genus-1 period ratio for real roots e1 < e2 < e3 < e4: the gap integral
// over the cut integral, K(k) / K(k') with the cross-ratio modulus.
double agm_ratio(double e1, double e2, double e3, double e4) {
    const double den = (e3 - e1) * (e4 - e2);
    const double k = std::sqrt((e3 - e2) * (e4 - e1) / den);
    const double kp = std::sqrt((e2 - e1) * (e4 - e3) / den);
    // K(k) = pi / (2 agm(1, k')).
    return agm(1.0, k) / agm(1.0, kp);
}

std::vector<double> clustered(double delta, double gap) {
    std::vector<double> b;
    for (int i = 0; i < 5; ++i) {
        b.push_back(i * gap);
        b.push_back(i * gap + delta);
    }
    return b;
}

void check_riemann(const SiegelPoint& tau, const PeriodData& p) {
    const Eigen::MatrixXcd t = p.A.fullPivLu().solve(p.B);
    CHECK((t - t.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(tau.min_imag_eigenvalue() > 0);
}

}  // namespace

TEST_CASE("curve validation") {
    CHECK(validate_curve({-2, -1, 1, 2}).genus() == 1);
    CHECK(validate_curve({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}).genus() == 4);
    CHECK(validate_curve({2, 1, -1, -2}).branch() == std::vector<double>{-2, -1, 1, 2});
    CHECK_THROWS_AS(validate_curve({0, 0, 1, 2}), ValidationError);
    CHECK_THROWS_AS(validate_curve({0, 1, 2}), ValidationError);
    CHECK_THROWS_AS(validate_curve({0, 1}), ValidationError);
    CHECK_THROWS_AS(validate_curve({0, 1e-9, 1, 2}), ValidationError);
    CHECK_THROWS_AS(validate_curve({0, 1, 2, NAN}), ValidationError);
}

TEST_CASE("genus-1 period against the AGM") {
    for (const auto& b : std::vector<std::vector<double>>{{-2, -1, 1, 2}, {0, 1, 3, 7}, {-5, -4.5, 0.2, 10}}) {
        const SiegelPoint tau = jacobian_point(validate_curve(b));
        REQUIRE(tau.genus() == 1);
        const double oracle = agm_ratio(b[0], b[1], b[2], b[3]);
        CHECK(std::abs(tau(0, 0) - Complex(0, oracle)) < 1e-10);
    }
    CHECK(std::abs(jacobian_point(validate_curve({-2, -1, 1, 2}))(0, 0).imag() - 1.5634019226961) < 1e-12);
}

TEST_CASE("Riemann relations") {
    for (const auto& b : std::vector<std::vector<double>>{
             {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, clustered(0.05, 10), clustered(0.02, 5), {-3, -1, 0, 2, 2.5, 6}}) {
        const auto curve = validate_curve(b);
        const PeriodData p = periods(curve);
        CHECK(p.drift < kConvergenceGate);
        CHECK(p.quad_order == 512);
        const SiegelPoint tau = jacobian_point(curve);
        CHECK(tau.genus() == curve.genus());
        check_riemann(tau, p);
        // Real branch points give a purely imaginary period matrix.
        CHECK(tau.real().cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("affine invariance") {
    const std::vector<double> b = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const SiegelPoint base = jacobian_point(validate_curve(b));
    for (auto [alpha, beta] : {std::pair{2.5, -3.0}, std::pair{0.1, 7.0}}) {
        std::vector<double> moved;
        for (double x : b) moved.push_back(alpha * x + beta);
        const SiegelPoint tau = jacobian_point(validate_curve(moved));
        CHECK((tau.matrix() - base.matrix()).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("quadrature gate") {
    CHECK_THROWS_AS(periods(validate_curve({-2, -1, 1, 2}), 8), ValidationError);
    CHECK_THROWS_AS(periods(validate_curve({0, 1, 1.0001, 2, 3, 4}), 16), ConvergenceError);
}
