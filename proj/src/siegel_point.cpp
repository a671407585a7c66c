#include "siegel/siegel_point.hpp"

#include <string>

#include "siegel/error.hpp"

namespace siegel {

SiegelPoint::SiegelPoint(const Eigen::MatrixXcd& tau) {
    if (tau.rows() == 0 || tau.rows() != tau.cols()) throw ValidationError("Siegel point must be a non-empty square matrix");
    if (!tau.allFinite()) throw ValidationError("Siegel point has non-finite entries");
    const double residual = (tau - tau.transpose()).cwiseAbs().maxCoeff();
    if (residual >= kSymmetryTolerance)
        throw ValidationError("Siegel point is not symmetric (residual " + sci(residual) + ")");
    tau_ = 0.5 * (tau + tau.transpose());
    const Eigen::MatrixXd im = tau_.imag();
    Eigen::LLT<Eigen::MatrixXd> llt(im);
    if (llt.info() != Eigen::Success) throw ValidationError("imaginary part of Siegel point is not positive definite");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(im, Eigen::EigenvaluesOnly);
    lambda_min_ = eig.eigenvalues()(0);
    if (!(lambda_min_ > 0.0)) throw ValidationError("imaginary part of Siegel point is not positive definite");
}

SiegelPoint::SiegelPoint(const Eigen::MatrixXd& re, const Eigen::MatrixXd& im)
    : SiegelPoint([&] {
          if (re.rows() != im.rows() || re.cols() != im.cols())
              throw ValidationError("real and imaginary parts differ in shape");
          Eigen::MatrixXcd t(re.rows(), re.cols());
          t.real() = re;
          t.imag() = im;
          return t;
      }()) {}

SiegelPoint SiegelPoint::scaled_identity(int g, double t) {
    return SiegelPoint(Eigen::MatrixXd::Zero(g, g), t * Eigen::MatrixXd::Identity(g, g));
}

SiegelPoint SiegelPoint::block_diagonal(const SiegelPoint& a, const SiegelPoint& b) {
    const int ga = a.genus();
    const int gb = b.genus();
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(ga + gb, ga + gb);
    t.topLeftCorner(ga, ga) = a.matrix();
    t.bottomRightCorner(gb, gb) = b.matrix();
    return SiegelPoint(t);
}

}  // namespace siegel
