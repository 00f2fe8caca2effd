#pragma once

#include "hdgc/design.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace hdgc {

/// Tuning of the adaptive lasso pipeline. Penalty levels, ridge levels and
/// weights inside the pipeline live on the standardized scale (columns scaled
/// to unit root-mean-square); every coefficient handed back is on the original
/// scale of the design.
struct FitOptions {
    std::size_t lambda_count = 50;
    double lambda_min_ratio = 1e-3;
    std::size_t ridge_grid_size = 20;
    /// Ridge grid runs from ridge_grid_high down to ridge_grid_low, both
    /// multiplied by the mean eigenvalue of the standardized Gram matrix.
    double ridge_grid_high = 1e1;
    double ridge_grid_low = 1e-4;
    double weight_floor = 1e-6;
    double cd_tolerance = 1e-7;
    /// A fit is also required to satisfy the optimality conditions to this
    /// tolerance on the standardized scale; coefficient changes alone stall
    /// early on ill-conditioned wide designs.
    double kkt_tolerance = 1e-7;
    std::size_t max_sweeps = 100000;
    /// BIC candidates may use at most this fraction of the effective sample
    /// as degrees of freedom. Beyond it the criterion diverges to -inf as fits
    /// approach interpolation.
    double max_df_fraction = 0.5;
};

/// Adaptive lasso solution at one penalty level.
struct PenalizedFit {
    Eigen::VectorXd beta;
    double lambda = 0.0;
    Eigen::VectorXd weights;    // original scale: penalty is lambda * sum weights_i |beta_i|
    std::size_t df = 0;         // number of exactly nonzero coefficients
    Eigen::VectorXd residuals;  // y - X beta
    double bic = 0.0;
    double sigma2 = 0.0;        // RSS / n
    std::size_t sweeps = 0;     // coordinate-descent sweeps used
    double ridge_lambda = 0.0;  // standardized ridge level that produced the weights (pipeline only)
};

/// BIC with the effective sample size n: n log(RSS / n) + df log n.
[[nodiscard]] double bic_value(double rss, std::size_t df, std::size_t n);

/// Closed-form ridge on the original scale: (X'X/n + lambda I)^{-1} X'y/n.
[[nodiscard]] Eigen::VectorXd ridge_fit(const ArxDesign& design, double lambda_ridge);

/// (X'X/n + diag(penalty))^{-1} X'y/n for a nonnegative penalty diagonal.
[[nodiscard]] Eigen::VectorXd generalized_ridge_fit(const ArxDesign& design,
                                                    const Eigen::VectorXd& penalty);

/// w_i = 1 / max(|beta_i|, floor).
[[nodiscard]] Eigen::VectorXd compute_adaptive_weights(const Eigen::VectorXd& ridge_beta,
                                                       double floor = 1e-6);

/// Smallest penalty at which the all-zero vector satisfies the optimality
/// conditions: max_i |(2/n) X_i'y| / w_i.
[[nodiscard]] double lambda_max(const ArxDesign& design, const Eigen::VectorXd& weights);

/// `count` log-spaced values from `high` down to high * min_ratio.
[[nodiscard]] std::vector<double> lambda_grid(double high, std::size_t count, double min_ratio);

/// Minimizes (1/n) RSS + lambda * sum w_i |beta_i| by cyclic coordinate
/// descent with active-set sweeps. `warm_start` (original scale) seeds the
/// iteration. When `sweep_objectives` is given, the objective after every
/// sweep is appended to it.
[[nodiscard]] PenalizedFit adaptive_lasso_fit(const ArxDesign& design, double lambda,
                                              const Eigen::VectorXd& weights,
                                              const FitOptions& options = {},
                                              const Eigen::VectorXd* warm_start = nullptr,
                                              std::vector<double>* sweep_objectives = nullptr);

/// Objective value (1/n) RSS + lambda * sum w_i |beta_i| on the original scale.
[[nodiscard]] double lasso_objective(const ArxDesign& design, const Eigen::VectorXd& beta,
                                     double lambda, const Eigen::VectorXd& weights);

struct BicPath {
    std::vector<PenalizedFit> fits;
    std::size_t chosen = 0;
    /// Fits [0, eligible) respect the degrees-of-freedom cap; the path is
    /// cut at the first fit that exceeds it.
    std::size_t eligible = 0;

    [[nodiscard]] const PenalizedFit& best() const { return fits.at(chosen); }
};

/// Fits every penalty of a strictly decreasing grid with warm starts and picks
/// the minimal-BIC fit among eligible ones; ties go to the larger penalty.
[[nodiscard]] BicPath bic_path(const ArxDesign& design, std::span<const double> grid,
                               const Eigen::VectorXd& weights, const FitOptions& options = {});

/// Full estimation pipeline for one design: standardize, choose the ridge level
/// by BIC, derive adaptive weights, run the BIC-selected lasso path.
[[nodiscard]] PenalizedFit fit_adaptive_lasso(const ArxDesign& design,
                                              const FitOptions& options = {});

struct SelectedModel {
    int p = 1;
    ArxDesign design;  // the common-sample design for the chosen p
    PenalizedFit fit;
};

/// Lag order and penalty selection. Every candidate p in 1..p_max is fitted on
/// the rows p_max..T-1 so their BIC values are comparable; ties go to the
/// smaller p. Blocks listed in `excluded` are left out of every design.
[[nodiscard]] SelectedModel select_arx(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                       const BlockStructure& blocks, int p_max,
                                       const FitOptions& options = {},
                                       std::span<const BlockId> excluded = {});

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::MatrixXd covariance;  // sigma2 (X'X)^{-1}
    double sigma2 = 0.0;         // RSS / (n - d)
    Eigen::VectorXd residuals;
};

/// Least squares. Throws NotComputableError when n <= d or X is rank deficient.
[[nodiscard]] OlsFit ols_fit(const ArxDesign& design);

/// Minnesota prior hyperparameters. Prior standard deviation of the own lag j
/// coefficient is tightness / j; of a predictor lag j coefficient
/// tightness * cross_shrink * (s_y / s_x) / j.
struct MinnesotaPrior {
    double tightness = 0.2;
    double cross_shrink = 0.5;
};

[[nodiscard]] Eigen::VectorXd minnesota_prior_stds(const ArxDesign& design,
                                                   const MinnesotaPrior& prior);

/// Error variance used by the posterior: residual variance of the pure
/// autoregression of y on its own lags, or the variance of y when that
/// regression is not computable.
[[nodiscard]] double minnesota_noise_variance(const ArxDesign& design);

/// Posterior mean under independent N(0, prior_stds^2) coefficient priors:
/// (X'X + noise_var * diag(prior_stds^-2))^{-1} X'y.
[[nodiscard]] Eigen::VectorXd minnesota_posterior_mean(const ArxDesign& design,
                                                       const Eigen::VectorXd& prior_stds,
                                                       double noise_var);

[[nodiscard]] Eigen::VectorXd minnesota_fit(const ArxDesign& design,
                                            const MinnesotaPrior& prior = {});

/// Diffusion-index model: principal components of the standardized
/// predictors, factor count by the maximum eigenvalue ratio, and a forecast
/// regression of y on its own lags and the factor lags.
struct FactorFit {
    std::size_t r = 1;
    int p = 1;
    Eigen::VectorXd eigenvalues;      // correlation-matrix eigenvalues, descending
    Eigen::MatrixXd loadings;         // k x r
    Eigen::MatrixXd factors;          // T x r principal-component scores
    Eigen::VectorXd forecast_coeffs;  // own lags 1..p, then factor lags (lag-major)
    Eigen::VectorXd x_mean;
    Eigen::VectorXd x_scale;
    bool ridge_fallback = false;
};

[[nodiscard]] FactorFit factor_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int p);

/// Number of factors chosen by the eigenvalue-ratio rule on descending
/// eigenvalues. Throws DegeneratePanelError with fewer than two positive ones.
[[nodiscard]] std::size_t eigenvalue_ratio_factors(const Eigen::VectorXd& eigenvalues);

/// One-step-ahead forecast of y[T] given y[0..T-1] and x[0..T-1].
[[nodiscard]] double factor_forecast(const FactorFit& fit, const Eigen::VectorXd& y,
                                     const Eigen::MatrixXd& x);

}  // namespace hdgc
