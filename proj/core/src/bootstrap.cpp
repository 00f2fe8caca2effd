#include "hdgc/error.hpp"
#include "hdgc/inference.hpp"
#include "hdgc/parallel.hpp"

#include <random>

namespace hdgc {
namespace {

/// Own-lag column index for every lag 1..p; throws if one is missing.
std::vector<Eigen::Index> own_lag_columns(const ArxDesign& design) {
    std::vector<Eigen::Index> cols(static_cast<std::size_t>(design.lag_order()), -1);
    for (std::size_t c = 0; c < design.cols(); ++c) {
        const ColumnInfo& info = design.columns()[c];
        if (info.kind == ColumnKind::own_lag) cols[static_cast<std::size_t>(info.lag - 1)] = static_cast<Eigen::Index>(c);
    }
    for (Eigen::Index c : cols) {
        if (c < 0) throw StructureError("bootstrap needs every own lag 1..p in the design");
    }
    return cols;
}

/// y values dated before the first target, oldest first (length p).
Eigen::VectorXd presample(const ArxDesign& design, const std::vector<Eigen::Index>& own) {
    const int p = design.lag_order();
    Eigen::VectorXd pre(p);
    // Row 0, own lag j holds y at first_row - j.
    for (int j = 1; j <= p; ++j) pre(p - j) = design.X()(0, own[static_cast<std::size_t>(j - 1)]);
    return pre;
}

}  // namespace

Eigen::VectorXd simulate_response(const ArxDesign& design, const Eigen::VectorXd& beta,
                                  const Eigen::VectorXd& innovations) {
    const Eigen::Index n = design.X().rows();
    if (beta.size() != design.X().cols()) throw DimensionError("coefficients do not match the design");
    if (innovations.size() != n) throw DimensionError("need one innovation per design row");
    const auto own = own_lag_columns(design);
    const int p = design.lag_order();

    // Exogenous part: every non-own-lag column is held fixed.
    Eigen::VectorXd fixed = innovations;
    for (std::size_t c = 0; c < design.cols(); ++c) {
        if (design.columns()[c].kind == ColumnKind::predictor && beta(static_cast<Eigen::Index>(c)) != 0.0) {
            fixed.noalias() += design.X().col(static_cast<Eigen::Index>(c)) * beta(static_cast<Eigen::Index>(c));
        }
    }
    Eigen::VectorXd history(p + n);
    history.head(p) = presample(design, own);
    for (Eigen::Index r = 0; r < n; ++r) {
        double value = fixed(r);
        for (int j = 1; j <= p; ++j) value += beta(own[static_cast<std::size_t>(j - 1)]) * history(p + r - j);
        history(p + r) = value;
    }
    return history.tail(n);
}

ArxDesign replace_response(const ArxDesign& design, const Eigen::VectorXd& y_new) {
    const Eigen::Index n = design.X().rows();
    if (y_new.size() != n) throw DimensionError("replacement response has the wrong length");
    const auto own = own_lag_columns(design);
    const int p = design.lag_order();
    Eigen::VectorXd history(p + n);
    history.head(p) = presample(design, own);
    history.tail(n) = y_new;
    Eigen::MatrixXd X = design.X();
    for (int j = 1; j <= p; ++j) X.col(own[static_cast<std::size_t>(j - 1)]) = history.segment(p - j, n);
    return ArxDesign(y_new, std::move(X), p, design.columns(), design.first_row(), design.centered());
}

Eigen::VectorXd resample_residuals(const Eigen::VectorXd& centered_residuals, Rng& rng) {
    const Eigen::Index n = centered_residuals.size();
    if (n == 0) throw ArgumentError("cannot resample an empty residual vector");
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = centered_residuals(pick(rng));
    return out;
}

Eigen::MatrixXd bootstrap_coefficients(const ArxDesign& design, const Eigen::VectorXd& beta,
                                       const Eigen::VectorXd& residuals, std::size_t replicates, Seed seed,
                                       const FitOptions& options, std::size_t jobs) {
    const Eigen::VectorXd centered = residuals.array() - residuals.mean();
    Eigen::MatrixXd draws(static_cast<Eigen::Index>(replicates), design.X().cols());
    parallel_for(replicates, jobs, [&](std::size_t b) {
        Rng rng = make_rng(derive_seed(seed, {b}));
        const Eigen::VectorXd y_star = simulate_response(design, beta, resample_residuals(centered, rng));
        const PenalizedFit refit = fit_adaptive_lasso(replace_response(design, y_star), options);
        draws.row(static_cast<Eigen::Index>(b)) = refit.beta.transpose();
    });
    return draws;
}

Eigen::MatrixXd coef_covariance(const ArxDesign& design, const PenalizedFit& fit, BlockId block,
                                std::size_t replicates, Seed seed, const FitOptions& options, std::size_t jobs) {
    if (replicates < 50) throw ArgumentError("covariance bootstrap needs at least 50 replicates");
    const RestrictionMatrix R = restriction_matrix(design, block);
    const Eigen::MatrixXd draws = bootstrap_coefficients(design, fit.beta, fit.residuals, replicates, seed, options, jobs);
    return restricted_covariance(draws, R);
}

}  // namespace hdgc
