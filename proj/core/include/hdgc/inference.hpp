#pragma once

#include "hdgc/design.hpp"
#include "hdgc/estimators.hpp"
#include "hdgc/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hdgc {

/// 0/1 matrix selecting every lag coefficient of one block. Stored as the
/// selected column indices; row i has its single 1 in column selected[i].
/// Rows are lag-major, then panel order within a lag.
struct RestrictionMatrix {
    BlockId block;
    std::vector<std::size_t> selected;
    std::size_t num_coefficients = 0;

    [[nodiscard]] std::size_t rows() const noexcept { return selected.size(); }
    [[nodiscard]] Eigen::MatrixXd matrix() const;
    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& beta) const;
};

[[nodiscard]] RestrictionMatrix restriction_matrix(const ArxDesign& design, BlockId block);

/// Q = v' cov^{-1} v with v = R beta. Exactly 0 when v is the zero vector.
/// Throws NumericError when cov is not positive definite.
[[nodiscard]] double wald_statistic(const Eigen::VectorXd& beta, const RestrictionMatrix& R,
                                    const Eigen::MatrixXd& cov);

/// (1/B) sum [ I(q_b > Q) + 1/2 I(q_b == Q) ], ties by exact equality.
[[nodiscard]] double mid_p_value(double Q, std::span<const double> q_boot);

/// Response path regenerated from the model in `design` with coefficients
/// `beta` and the given innovations: own-lag regressors are fed back from the
/// new path (seeded with the observed pre-sample values), predictor columns
/// are held fixed.
[[nodiscard]] Eigen::VectorXd simulate_response(const ArxDesign& design, const Eigen::VectorXd& beta,
                                                const Eigen::VectorXd& innovations);

/// Same design with the response replaced and its own-lag columns rebuilt.
[[nodiscard]] ArxDesign replace_response(const ArxDesign& design, const Eigen::VectorXd& y_new);

/// Innovations drawn i.i.d. uniformly, with replacement, from the centered residuals.
[[nodiscard]] Eigen::VectorXd resample_residuals(const Eigen::VectorXd& centered_residuals, Rng& rng);

/// Residual-bootstrap coefficient draws of the adaptive lasso pipeline around
/// (design, beta, residuals). Row b holds replicate b, seeded by
/// derive_seed(seed, {b}). Replicates run on up to `jobs` threads.
[[nodiscard]] Eigen::MatrixXd bootstrap_coefficients(const ArxDesign& design, const Eigen::VectorXd& beta,
                                                     const Eigen::VectorXd& residuals, std::size_t replicates,
                                                     Seed seed, const FitOptions& options = {},
                                                     std::size_t jobs = 1);

/// Sample covariance of R beta* over bootstrap draws, plus eps * I with
/// eps = 1e-8 * trace / dim. When every draw is identical (trace 0) the
/// identity is returned: the statistic and its bootstrap replicates share the
/// matrix, so its scale does not affect the p-value.
[[nodiscard]] Eigen::MatrixXd restricted_covariance(const Eigen::MatrixXd& draws, const RestrictionMatrix& R);

/// Bootstrap covariance of the block's coefficients for a fitted unrestricted model.
[[nodiscard]] Eigen::MatrixXd coef_covariance(const ArxDesign& design, const PenalizedFit& fit, BlockId block,
                                              std::size_t replicates, Seed seed, const FitOptions& options = {},
                                              std::size_t jobs = 1);

/// Model whose residual bootstrap estimates Cov(beta) for the Wald statistic.
/// `null_model` resamples the restricted fit (block excluded) and refits the
/// unrestricted model; `unrestricted` resamples the unrestricted fit itself.
enum class CovarianceSource { null_model, unrestricted };

struct GrangerTestOptions {
    std::size_t replicates = 500;             // B
    std::size_t covariance_replicates = 200;  // B_cov
    CovarianceSource covariance = CovarianceSource::null_model;
    int p_max = 2;
    FitOptions fit;
    /// Scale the null residuals by sqrt(n / (n - df)) before resampling; the
    /// selected fit may spend up to half the rows.
    bool rescale_residuals = true;
    std::size_t jobs = 1;
};

struct GrangerTestResult {
    BlockId block;
    std::string block_name;
    double Q = 0.0;
    std::vector<double> q_boot;
    double mid_p = 1.0;
    std::size_t B = 0;
    int p_used = 1;
    double lambda_used = 0.0;
};

/// Bootstrap Wald test of "block does not Granger cause y" on the adaptive
/// lasso fit:
///  1. select (p, lambda) for the model without the block, keep its centered (optionally df-rescaled) residuals;
///  2. for b = 1..B rebuild y* recursively from the restricted model with
///     resampled residuals and fixed predictors, refit the unrestricted model
///     (p held at the restricted choice), compute Q*_b with the observed R and Cov;
///  3. report the mid p-value of the observed Q.
/// Cov comes from B_cov preliminary replicates (see CovarianceSource), seeded
/// by derive_seed(seed, {covariance_bootstrap, p, block}), or {covariance_bootstrap, p}
/// for the unrestricted source which all blocks share; replicate b of the
/// null distribution uses derive_seed(seed, {null_bootstrap, block, b}).
[[nodiscard]] GrangerTestResult granger_lasso_test(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                                   const BlockStructure& blocks, BlockId block,
                                                   const GrangerTestOptions& options, Seed seed);

/// Tests several blocks, sharing the unrestricted fit per lag order. Entry i equals granger_lasso_test(..., to_test[i], ...).
[[nodiscard]] std::vector<GrangerTestResult> granger_lasso_tests(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                                                 const BlockStructure& blocks,
                                                                 std::span<const BlockId> to_test,
                                                                 const GrangerTestOptions& options, Seed seed);

/// Blocks with at least one nonzero coefficient at any lag.
[[nodiscard]] std::vector<BlockId> blocks_with_nonzero(const ArxDesign& design, const Eigen::VectorXd& beta);

struct LassoSelection {
    SelectedModel model;
    std::vector<BlockId> selected;
};

/// Declares causality for every block with a nonzero estimated coefficient.
[[nodiscard]] LassoSelection granger_lasso_selection(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                                     const BlockStructure& blocks, int p_max,
                                                     const FitOptions& options = {});

struct WaldTestResult {
    BlockId block;
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Classical Wald test of the block restriction with the OLS covariance and a
/// chi-square(p * k_j) reference distribution.
[[nodiscard]] WaldTestResult ols_wald_test(const ArxDesign& design, const OlsFit& fit, BlockId block);

/// Lag order minimizing the OLS BIC on the common sample among computable
/// candidates. Throws NotComputableError when no candidate is computable.
[[nodiscard]] int select_ols_lag(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                 const BlockStructure& blocks, int p_max);

struct WaldSelection {
    int p = 1;
    std::vector<WaldTestResult> tests;  // one per block, in block order
    std::vector<BlockId> selected;      // p_value < alpha
};

[[nodiscard]] WaldSelection wald_test_selection(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                                const BlockStructure& blocks, double alpha, int p_max);

}  // namespace hdgc
