#include "hdgc/error.hpp"
#include "hdgc/estimators.hpp"

#include <cmath>

namespace hdgc {
namespace {

constexpr double kPositiveEigenvalue = 1e-10;
constexpr double kFallbackRidge = 1e-6;

BlockStructure factor_blocks(std::size_t r) {
    Block block{"factors", {}};
    for (std::size_t j = 0; j < r; ++j) block.columns.push_back(j);
    return BlockStructure({std::move(block)}, r);
}

}  // namespace

std::size_t eigenvalue_ratio_factors(const Eigen::VectorXd& eigenvalues) {
    const Eigen::Index k = eigenvalues.size();
    if (k < 2) throw DegeneratePanelError("factor model needs at least two predictors");
    const double top = eigenvalues(0);
    Eigen::Index positive = 0;
    for (Eigen::Index j = 0; j < k; ++j) {
        if (eigenvalues(j) > kPositiveEigenvalue * std::max(top, 1.0)) ++positive;
    }
    if (positive < 2) {
        throw DegeneratePanelError("predictor correlation matrix has fewer than two positive eigenvalues");
    }
    // j runs over 1..k-1 but the ratio is only defined while the denominator is positive.
    const Eigen::Index last = std::min(k - 1, positive - 1);
    std::size_t best = 1;
    double best_ratio = -1.0;
    for (Eigen::Index j = 0; j < last; ++j) {
        const double ratio = eigenvalues(j) / eigenvalues(j + 1);
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = static_cast<std::size_t>(j + 1);
        }
    }
    return best;
}

FactorFit factor_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int p) {
    const Eigen::Index T = x.rows();
    const Eigen::Index k = x.cols();
    if (k < 2) throw DegeneratePanelError("factor model needs at least two predictors");
    if (y.size() != T) throw DimensionError("response and predictors have different lengths");
    if (p < 1 || T <= p + 1) throw DimensionError("sample too short for the factor forecast regression");

    FactorFit fit;
    fit.p = p;
    fit.x_mean = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - fit.x_mean.transpose();
    fit.x_scale = (centered.colwise().squaredNorm() / static_cast<double>(T)).cwiseSqrt().transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (!(fit.x_scale(j) > 0.0)) fit.x_scale(j) = 1.0;
    }
    const Eigen::MatrixXd Z = centered * fit.x_scale.cwiseInverse().asDiagonal();

    const Eigen::MatrixXd corr = Z.transpose() * Z / static_cast<double>(T);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
    fit.eigenvalues = solver.eigenvalues().reverse();
    const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

    fit.r = eigenvalue_ratio_factors(fit.eigenvalues);
    fit.loadings = vectors.leftCols(static_cast<Eigen::Index>(fit.r));
    fit.factors = Z * fit.loadings;

    const ArxDesign design = build_design(y, fit.factors, p, factor_blocks(fit.r));
    try {
        fit.forecast_coeffs = ols_fit(design).beta;
    } catch (const NotComputableError&) {
        fit.forecast_coeffs = ridge_fit(design, kFallbackRidge);
        fit.ridge_fallback = true;
    }
    return fit;
}

double factor_forecast(const FactorFit& fit, const Eigen::VectorXd& y, const Eigen::MatrixXd& x) {
    if (x.cols() != fit.loadings.rows()) throw DimensionError("predictor panel does not match the factor fit");
    const Eigen::MatrixXd Z = (x.rowwise() - fit.x_mean.transpose()) * fit.x_scale.cwiseInverse().asDiagonal();
    const Eigen::MatrixXd factors = Z * fit.loadings;
    const auto columns = design_columns(fit.p, factor_blocks(fit.r));
    const Eigen::RowVectorXd row = regressor_row(y, factors, columns, static_cast<std::size_t>(y.size()));
    return row.dot(fit.forecast_coeffs);
}

}  // namespace hdgc
