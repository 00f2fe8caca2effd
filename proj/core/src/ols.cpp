#include "hdgc/error.hpp"
#include "hdgc/estimators.hpp"

namespace hdgc {

OlsFit ols_fit(const ArxDesign& design) {
    const Eigen::MatrixXd& X = design.X();
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    if (n <= d) {
        throw NotComputableError("least squares needs more rows than regressors (" + std::to_string(n) +
                                 " rows, " + std::to_string(d) + " regressors)");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < d) {
        throw NotComputableError("design is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                                 std::to_string(d) + ")");
    }
    OlsFit fit;
    fit.beta = qr.solve(design.y());
    fit.residuals = design.y() - X * fit.beta;
    fit.sigma2 = fit.residuals.squaredNorm() / static_cast<double>(n - d);

    // (X'X)^{-1} = P R^{-1} R^{-T} P'
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(d, d).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd R_inv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd inner = R_inv * R_inv.transpose();
    const auto& perm = qr.colsPermutation();
    fit.covariance = fit.sigma2 * (perm * inner * perm.transpose());
    return fit;
}

}  // namespace hdgc
