#include "hdgc/error.hpp"
#include "hdgc/inference.hpp"

namespace hdgc {

Eigen::MatrixXd RestrictionMatrix::matrix() const {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(selected.size()),
                                              static_cast<Eigen::Index>(num_coefficients));
    for (std::size_t i = 0; i < selected.size(); ++i) {
        R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(selected[i])) = 1.0;
    }
    return R;
}

Eigen::VectorXd RestrictionMatrix::apply(const Eigen::VectorXd& beta) const {
    if (static_cast<std::size_t>(beta.size()) != num_coefficients) {
        throw DimensionError("coefficient vector does not match the restriction matrix");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(selected.size()));
    for (std::size_t i = 0; i < selected.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = beta(static_cast<Eigen::Index>(selected[i]));
    }
    return v;
}

RestrictionMatrix restriction_matrix(const ArxDesign& design, BlockId block) {
    RestrictionMatrix R;
    R.block = block;
    R.num_coefficients = design.cols();
    R.selected = design.block_columns(block);
    if (R.selected.empty()) {
        throw StructureError("block id " + std::to_string(block.value) + " not present in design");
    }
    return R;
}

double wald_statistic(const Eigen::VectorXd& beta, const RestrictionMatrix& R, const Eigen::MatrixXd& cov) {
    const Eigen::VectorXd v = R.apply(beta);
    if (cov.rows() != v.size() || cov.cols() != v.size()) {
        throw DimensionError("covariance does not match the restriction");
    }
    if (v.isZero(0.0)) return 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw NumericError("coefficient covariance is not positive definite");
    const Eigen::VectorXd w = llt.matrixL().solve(v);
    return w.squaredNorm();
}

double mid_p_value(double Q, std::span<const double> q_boot) {
    if (q_boot.empty()) throw ArgumentError("mid p-value needs at least one bootstrap statistic");
    double total = 0.0;
    for (double q : q_boot) {
        if (q > Q) {
            total += 1.0;
        } else if (q == Q) {
            total += 0.5;
        }
    }
    return total / static_cast<double>(q_boot.size());
}

Eigen::MatrixXd restricted_covariance(const Eigen::MatrixXd& draws, const RestrictionMatrix& R) {
    const auto dim = static_cast<Eigen::Index>(R.rows());
    const Eigen::Index B = draws.rows();
    if (static_cast<std::size_t>(draws.cols()) != R.num_coefficients) {
        throw DimensionError("bootstrap draws do not match the restriction matrix");
    }
    if (B < 2) throw ArgumentError("covariance needs at least two bootstrap draws");
    Eigen::MatrixXd V(B, dim);
    for (Eigen::Index i = 0; i < dim; ++i) V.col(i) = draws.col(static_cast<Eigen::Index>(R.selected[static_cast<std::size_t>(i)]));
    // Identical draws have no spread; the mean would only add rounding noise.
    const Eigen::RowVectorXd first = V.row(0);
    if ((V.rowwise() - first).cwiseAbs().maxCoeff() == 0.0) return Eigen::MatrixXd::Identity(dim, dim);
    const Eigen::RowVectorXd mean = V.colwise().mean();
    V.rowwise() -= mean;
    Eigen::MatrixXd cov = V.transpose() * V / static_cast<double>(B - 1);
    cov = 0.5 * (cov + cov.transpose());
    const double trace = cov.trace();
    if (!(trace > 0.0)) return Eigen::MatrixXd::Identity(dim, dim);
    cov.diagonal().array() += 1e-8 * trace / static_cast<double>(dim);
    return cov;
}

}  // namespace hdgc
