#include "hdgc/error.hpp"
#include "hdgc/inference.hpp"
#include "hdgc/parallel.hpp"

#include <cmath>
#include <map>

namespace hdgc {
namespace {

/// Unrestricted model at one lag order, shared by every block tested at that order.
struct UnrestrictedReference {
    ArxDesign design;
    PenalizedFit fit;
    Eigen::MatrixXd draws;  // unrestricted covariance bootstrap, B_cov x d; empty for the null source
};

void validate(const GrangerTestOptions& options) {
    if (options.replicates < 1) throw ArgumentError("bootstrap needs B >= 1");
    if (options.covariance_replicates < 50) throw ArgumentError("covariance bootstrap needs B_cov >= 50");
    if (options.p_max < 1) throw ArgumentError("p_max must be >= 1");
}

/// Restricted coefficients placed into the unrestricted column layout.
Eigen::VectorXd embed(const ArxDesign& full, BlockId block, const Eigen::VectorXd& restricted) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(full.X().cols());
    Eigen::Index next = 0;
    for (std::size_t c = 0; c < full.cols(); ++c) {
        if (full.columns()[c].block == block) continue;
        beta(static_cast<Eigen::Index>(c)) = restricted(next++);
    }
    if (next != restricted.size()) throw DimensionError("restricted coefficients do not match the design");
    return beta;
}

}  // namespace

std::vector<GrangerTestResult> granger_lasso_tests(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                                   const BlockStructure& blocks, std::span<const BlockId> to_test,
                                                   const GrangerTestOptions& options, Seed seed) {
    validate(options);
    std::map<int, UnrestrictedReference> references;
    auto reference_for = [&](int p) -> const UnrestrictedReference& {
        auto it = references.find(p);
        if (it != references.end()) return it->second;
        ArxDesign design = build_design(y, x, p, blocks);
        PenalizedFit fit = fit_adaptive_lasso(design, options.fit);
        Eigen::MatrixXd draws;
        if (options.covariance == CovarianceSource::unrestricted) {
            draws = bootstrap_coefficients(design, fit.beta, fit.residuals, options.covariance_replicates,
                                           derive_seed(seed, {tag::covariance_bootstrap, static_cast<std::uint64_t>(p)}),
                                           options.fit, options.jobs);
        }
        return references.emplace(p, UnrestrictedReference{std::move(design), std::move(fit), std::move(draws)})
            .first->second;
    };

    std::vector<GrangerTestResult> results;
    results.reserve(to_test.size());
    for (BlockId block : to_test) {
        const Block& info = blocks[block];
        const BlockId excluded[] = {block};
        const SelectedModel restricted = select_arx(y, x, blocks, options.p_max, options.fit, excluded);
        const int p = restricted.p;
        const UnrestrictedReference& ref = reference_for(p);
        const RestrictionMatrix R = restriction_matrix(ref.design, block);

        // Restricted model on the full sample for this p; its columns line up
        // with the common-sample design the coefficients were fitted on.
        const ArxDesign null_design = drop_block(build_design(y, x, p, blocks), block);
        const Eigen::VectorXd& null_beta = restricted.fit.beta;
        Eigen::VectorXd residuals = null_design.y() - null_design.X() * null_beta;
        residuals.array() -= residuals.mean();
        if (options.rescale_residuals) {
            const auto n = static_cast<double>(residuals.size());
            const auto df = static_cast<double>(restricted.fit.df);
            if (n > df) residuals *= std::sqrt(n / (n - df));
        }

        Eigen::MatrixXd cov;
        if (options.covariance == CovarianceSource::unrestricted) {
            cov = restricted_covariance(ref.draws, R);
        } else {
            const Eigen::MatrixXd draws = bootstrap_coefficients(
                ref.design, embed(ref.design, block, null_beta), residuals, options.covariance_replicates,
                derive_seed(seed, {tag::covariance_bootstrap, static_cast<std::uint64_t>(p), block.value}),
                options.fit, options.jobs);
            cov = restricted_covariance(draws, R);
        }

        GrangerTestResult result;
        result.block = block;
        result.block_name = info.name;
        result.B = options.replicates;
        result.p_used = p;
        result.lambda_used = ref.fit.lambda;
        result.Q = wald_statistic(ref.fit.beta, R, cov);

        result.q_boot.assign(options.replicates, 0.0);
        parallel_for(options.replicates, options.jobs, [&](std::size_t b) {
            Rng rng = make_rng(derive_seed(seed, {tag::null_bootstrap, block.value, b}));
            const Eigen::VectorXd y_star = simulate_response(null_design, null_beta, resample_residuals(residuals, rng));
            const PenalizedFit refit = fit_adaptive_lasso(replace_response(ref.design, y_star), options.fit);
            result.q_boot[b] = wald_statistic(refit.beta, R, cov);
        });
        result.mid_p = mid_p_value(result.Q, result.q_boot);
        results.push_back(std::move(result));
    }
    return results;
}

GrangerTestResult granger_lasso_test(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                     const BlockStructure& blocks, BlockId block,
                                     const GrangerTestOptions& options, Seed seed) {
    const BlockId one[] = {block};
    return std::move(granger_lasso_tests(y, x, blocks, one, options, seed).front());
}

}  // namespace hdgc
