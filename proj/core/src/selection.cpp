#include "hdgc/error.hpp"
#include "hdgc/inference.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hdgc {

std::vector<BlockId> blocks_with_nonzero(const ArxDesign& design, const Eigen::VectorXd& beta) {
    if (static_cast<std::size_t>(beta.size()) != design.cols()) {
        throw DimensionError("coefficients do not match the design");
    }
    std::set<BlockId> found;
    for (std::size_t c = 0; c < design.cols(); ++c) {
        const auto& block = design.columns()[c].block;
        if (block && beta(static_cast<Eigen::Index>(c)) != 0.0) found.insert(*block);
    }
    return {found.begin(), found.end()};
}

LassoSelection granger_lasso_selection(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                       const BlockStructure& blocks, int p_max, const FitOptions& options) {
    SelectedModel model = select_arx(y, x, blocks, p_max, options);
    std::vector<BlockId> selected = blocks_with_nonzero(model.design, model.fit.beta);
    return LassoSelection{std::move(model), std::move(selected)};
}

WaldTestResult ols_wald_test(const ArxDesign& design, const OlsFit& fit, BlockId block) {
    const RestrictionMatrix R = restriction_matrix(design, block);
    Eigen::MatrixXd cov(static_cast<Eigen::Index>(R.rows()), static_cast<Eigen::Index>(R.rows()));
    for (std::size_t i = 0; i < R.rows(); ++i) {
        for (std::size_t j = 0; j < R.rows(); ++j) {
            cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                fit.covariance(static_cast<Eigen::Index>(R.selected[i]), static_cast<Eigen::Index>(R.selected[j]));
        }
    }
    WaldTestResult result;
    result.block = block;
    result.dof = R.rows();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const Eigen::VectorXd v = R.apply(fit.beta);
    if (v.isZero(0.0)) {
        result.statistic = 0.0;
    } else if (ldlt.info() == Eigen::Success && ldlt.isPositive() && (ldlt.vectorD().array() > 0.0).all()) {
        result.statistic = v.dot(ldlt.solve(v));
    } else {
        // Zero residual variance with a nonzero block: the restriction is rejected outright.
        result.statistic = std::numeric_limits<double>::infinity();
    }
    if (std::isinf(result.statistic)) {
        result.p_value = 0.0;
    } else {
        boost::math::chi_squared_distribution<double> chi2(static_cast<double>(result.dof));
        result.p_value = boost::math::cdf(boost::math::complement(chi2, result.statistic));
    }
    return result;
}

int select_ols_lag(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const BlockStructure& blocks, int p_max) {
    if (p_max < 1) throw ArgumentError("p_max must be >= 1");
    if (static_cast<Eigen::Index>(p_max) >= y.size()) throw DimensionError("sample too short for p_max");
    int best_p = 0;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        const ArxDesign design = build_design(y, x, p, blocks, static_cast<std::size_t>(p_max));
        try {
            const OlsFit fit = ols_fit(design);
            const double bic = bic_value(fit.residuals.squaredNorm(), design.cols(), design.rows());
            if (best_p == 0 || bic < best_bic) {
                best_bic = bic;
                best_p = p;
            }
        } catch (const NotComputableError&) {
        }
    }
    if (best_p == 0) {
        throw NotComputableError("least squares is not computable for any lag order up to " + std::to_string(p_max));
    }
    return best_p;
}

WaldSelection wald_test_selection(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const BlockStructure& blocks,
                                  double alpha, int p_max) {
    WaldSelection selection;
    selection.p = select_ols_lag(y, x, blocks, p_max);
    const ArxDesign design = build_design(y, x, selection.p, blocks);
    const OlsFit fit = ols_fit(design);
    for (BlockId id : blocks.ids()) {
        WaldTestResult test = ols_wald_test(design, fit, id);
        if (test.p_value < alpha) selection.selected.push_back(id);
        selection.tests.push_back(test);
    }
    return selection;
}

}  // namespace hdgc
