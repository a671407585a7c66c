#pragma once

#include <complex>

#include <Eigen/Dense>

namespace siegel {

using Complex = std::complex<double>;

/// A point of the Siegel upper half space: complex symmetric g x g matrix
/// with positive-definite imaginary part. Validated on construction; the
/// stored matrix is exactly symmetric.
class SiegelPoint {
public:
    static constexpr double kSymmetryTolerance = 1e-12;

    explicit SiegelPoint(const Eigen::MatrixXcd& tau);
    SiegelPoint(const Eigen::MatrixXd& re, const Eigen::MatrixXd& im);

    /// Purely imaginary diagonal point t * i * I_g.
    static SiegelPoint scaled_identity(int g, double t);
    /// Block-diagonal point diag(a, b).
    static SiegelPoint block_diagonal(const SiegelPoint& a, const SiegelPoint& b);

    int genus() const { return static_cast<int>(tau_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return tau_; }
    Complex operator()(int i, int j) const { return tau_(i, j); }
    Eigen::MatrixXd real() const { return tau_.real(); }
    Eigen::MatrixXd imag() const { return tau_.imag(); }

    /// Smallest eigenvalue of Im(tau).
    double min_imag_eigenvalue() const { return lambda_min_; }

private:
    Eigen::MatrixXcd tau_;
    double lambda_min_ = 0.0;
};

}  // namespace siegel
