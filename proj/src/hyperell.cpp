#include "siegel/hyperell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "siegel/error.hpp"

namespace siegel::hyperell {

namespace {

// Integral over [b_i, b_{i+1}] of x^k / sqrt|p(x)| dx for k = 0..g-1, by
// n-point Gauss-Chebyshev.
std::vector<double> interval_moments(const std::vector<double>& b, std::size_t i, int g, int n) {
    const double a = b[i], c = b[i + 1];
    const double mid = 0.5 * (a + c), half = 0.5 * (c - a);
    std::vector<double> sums(g, 0.0);
    for (int j = 1; j <= n; ++j) {
        const double x = mid + half * std::cos((2.0 * j - 1) * std::numbers::pi / (2.0 * n));
        double rest = 1.0;
        for (std::size_t m = 0; m < b.size(); ++m)
            if (m != i && m != i + 1) rest *= std::abs(x - b[m]);
        const double w = 1.0 / std::sqrt(rest);
        double pw = 1.0;
        for (int k = 0; k < g; ++k, pw *= x) sums[k] += pw * w;
    }
    for (auto& s : sums) s *= std::numbers::pi / n;
    return sums;
}

PeriodData periods_at(const HyperellipticCurve& curve, int n) {
    const auto& b = curve.branch();
    const int g = curve.genus();
    const std::size_t count = b.size();
    // Interval i = [b_i, b_{i+1}] (0-based) lies left of count - 1 - i points.
    std::vector<std::vector<Complex>> moment(count - 1);
    for (std::size_t i = 0; i + 1 < count; ++i) {
        const auto m = interval_moments(b, i, g, n);
        const int right = static_cast<int>(count - 1 - i);
        // 1 / y = i^(-N) / sqrt|p|.
        static const Complex inv_powers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
        const Complex f = inv_powers[right % 4];
        for (int k = 0; k < g; ++k) moment[i].push_back(f * m[k]);
    }
    PeriodData out;
    out.A = Eigen::MatrixXcd::Zero(g, g);
    out.B = Eigen::MatrixXcd::Zero(g, g);
    for (int j = 0; j < g; ++j)
        for (int k = 0; k < g; ++k) {
            out.A(k, j) = 2.0 * moment[2 * j][k];
            // The gaps between cut j and the last cut.
            for (std::size_t i = 2 * j + 1; i < 2 * static_cast<std::size_t>(g) + 1; i += 2) out.B(k, j) += 2.0 * moment[i][k];
        }
    out.quad_order = n;
    return out;
}

}  // namespace

HyperellipticCurve validate_curve(std::vector<double> branch) {
    if (branch.size() % 2 != 0) throw ValidationError("a hyperelliptic curve needs an even number of branch points");
    if (branch.size() < 4) throw ValidationError("a hyperelliptic curve needs at least 4 branch points");
    for (double v : branch)
        if (!std::isfinite(v)) throw ValidationError("branch points must be finite");
    std::sort(branch.begin(), branch.end());
    for (std::size_t i = 0; i + 1 < branch.size(); ++i)
        if (branch[i] == branch[i + 1]) throw ValidationError("duplicate branch point " + sci(branch[i]));
    const double spread = branch.back() - branch.front();
    for (std::size_t i = 0; i + 1 < branch.size(); ++i)
        if (branch[i + 1] - branch[i] < HyperellipticCurve::kGapFloor * spread)
            throw ValidationError("branch points too close for reliable periods");
    HyperellipticCurve c;
    c.branch_ = std::move(branch);
    return c;
}

PeriodData periods(const HyperellipticCurve& curve, int quad_order) {
    if (quad_order < 16) throw ValidationError("quadrature order must be at least 16");
    const PeriodData coarse = periods_at(curve, quad_order);
    PeriodData fine = periods_at(curve, 2 * quad_order);
    const double scale = std::max(fine.A.cwiseAbs().maxCoeff(), fine.B.cwiseAbs().maxCoeff());
    fine.drift = std::max((fine.A - coarse.A).cwiseAbs().maxCoeff(), (fine.B - coarse.B).cwiseAbs().maxCoeff()) / scale;
    if (!(fine.drift < kConvergenceGate))
        throw ConvergenceError("periods changed by " + sci(fine.drift) +
                               " when the quadrature order was doubled; raise --quad-order");
    return fine;
}

SiegelPoint jacobian_point(const HyperellipticCurve& curve, int quad_order) {
    const PeriodData p = periods(curve, quad_order);
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(p.A);
    if (!lu.isInvertible()) throw ConvergenceError("a-period matrix is singular");
    const Eigen::MatrixXcd tau = lu.solve(p.B);
    const double asym = (tau - tau.transpose()).cwiseAbs().maxCoeff();
    if (!(asym < 1e-8)) throw ConvergenceError("period matrix fails the symmetry relation (residual " + sci(asym) + ")");
    const Eigen::MatrixXcd sym = 0.5 * (tau + tau.transpose());
    const Eigen::LLT<Eigen::MatrixXd> llt(sym.imag());
    if (llt.info() != Eigen::Success) throw ConvergenceError("period matrix has indefinite imaginary part");
    return SiegelPoint(sym);
}

}  // namespace siegel::hyperell
