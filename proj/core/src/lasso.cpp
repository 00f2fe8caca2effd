#include "hdgc/error.hpp"
#include "hdgc/estimators.hpp"
#include "internal/gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdgc {
namespace {

double soft_threshold(double value, double threshold) {
    if (value > threshold) return value - threshold;
    if (value < -threshold) return value + threshold;
    return 0.0;
}

void check_weights(const Eigen::VectorXd& weights, Eigen::Index d) {
    if (weights.size() != d) throw DimensionError("weight vector length does not match the design");
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!std::isfinite(weights(i))) throw ArgumentError("adaptive weights must be finite");
        if (!(weights(i) > 0.0)) throw ArgumentError("adaptive weights must be strictly positive");
    }
}

std::size_t count_nonzero(const Eigen::VectorXd& v) {
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) count += v(i) != 0.0 ? 1 : 0;
    return count;
}

/// Residuals computed column by column over the nonzero coefficients only.
Eigen::VectorXd sparse_residuals(const ArxDesign& design, const Eigen::VectorXd& beta) {
    Eigen::VectorXd r = design.y();
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta(j) != 0.0) r.noalias() -= design.X().col(j) * beta(j);
    }
    return r;
}

PenalizedFit materialize(const detail::GramProblem& problem, const ArxDesign& design,
                         const Eigen::VectorXd& gamma, const Eigen::VectorXd& std_weights,
                         double lambda, std::size_t sweeps) {
    PenalizedFit fit;
    fit.beta = gamma.cwiseQuotient(problem.scale);
    fit.lambda = lambda;
    fit.weights = std_weights.cwiseProduct(problem.scale);
    fit.df = count_nonzero(fit.beta);
    fit.residuals = sparse_residuals(design, fit.beta);
    const double rss = fit.residuals.squaredNorm();
    fit.bic = bic_value(rss, fit.df, problem.n);
    fit.sigma2 = rss / static_cast<double>(problem.n);
    fit.sweeps = sweeps;
    return fit;
}

}  // namespace

namespace detail {

double standardized_objective(const GramProblem& problem, const Eigen::VectorXd& weights,
                              double lambda, const Eigen::VectorXd& gamma) {
    const double quad = gamma.dot(problem.gram * gamma);
    const double rss_n = problem.yty - 2.0 * problem.xty.dot(gamma) + quad;
    return rss_n + lambda * weights.cwiseProduct(gamma.cwiseAbs()).sum();
}

std::size_t coordinate_descent(const GramProblem& problem, const Eigen::VectorXd& weights,
                               double lambda, Eigen::VectorXd& gamma, const FitOptions& options,
                               std::vector<double>* sweep_objectives, bool check_kkt) {
    const Eigen::MatrixXd& G = problem.gram;
    const Eigen::Index d = G.cols();
    Eigen::VectorXd q = problem.xty - G * gamma;  // c - G gamma

    auto update = [&](Eigen::Index j) -> double {
        const double gjj = G(j, j);
        if (gjj <= 0.0) return 0.0;
        const double rho = q(j) + gjj * gamma(j);
        const double next = soft_threshold(rho, 0.5 * lambda * weights(j)) / gjj;
        const double delta = next - gamma(j);
        if (delta != 0.0) {
            q.noalias() -= G.col(j) * delta;
            gamma(j) = next;
        }
        return std::abs(delta);
    };
    // Largest violation of the optimality conditions, from the maintained q.
    auto kkt_violation = [&] {
        double worst = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (G(j, j) <= 0.0) continue;
            const double grad = 2.0 * q(j);
            const double bound = lambda * weights(j);
            if (gamma(j) > 0.0) {
                worst = std::max(worst, std::abs(grad - bound));
            } else if (gamma(j) < 0.0) {
                worst = std::max(worst, std::abs(grad + bound));
            } else {
                worst = std::max(worst, std::abs(grad) - bound);
            }
        }
        return worst;
    };
    auto record = [&] {
        if (sweep_objectives) {
            sweep_objectives->push_back(standardized_objective(problem, weights, lambda, gamma));
        }
    };

    std::vector<Eigen::Index> active;
    active.reserve(static_cast<std::size_t>(d));
    std::size_t sweeps = 0;
    while (sweeps < options.max_sweeps) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) max_change = std::max(max_change, update(j));
        ++sweeps;
        record();
        if (max_change < options.cd_tolerance && (!check_kkt || kkt_violation() <= options.kkt_tolerance)) break;

        active.clear();
        for (Eigen::Index j = 0; j < d; ++j) {
            if (gamma(j) != 0.0) active.push_back(j);
        }
        while (sweeps < options.max_sweeps) {
            double active_change = 0.0;
            for (Eigen::Index j : active) active_change = std::max(active_change, update(j));
            ++sweeps;
            record();
            if (active_change < options.cd_tolerance) break;
        }
    }
    return sweeps;
}

BicPath standardized_path(const GramProblem& problem, const ArxDesign& design,
                          std::span<const double> grid, const Eigen::VectorXd& std_weights,
                          const FitOptions& options, bool keep_all) {
    const double df_cap = options.max_df_fraction * static_cast<double>(problem.n);
    BicPath path;
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(problem.gram.cols());
    Eigen::VectorXd best_gamma;
    double best_lambda = 0.0;
    std::size_t best_sweeps = 0;
    double best_bic = std::numeric_limits<double>::infinity();
    bool have_best = false;
    bool capped = false;

    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double lambda = grid[g];
        const std::size_t sweeps = coordinate_descent(problem, std_weights, lambda, gamma, options, nullptr, keep_all);
        const std::size_t df = count_nonzero(gamma);
        if (!capped && static_cast<double>(df) > df_cap && have_best) {
            capped = true;
            path.eligible = g;
            if (!keep_all) break;
        }
        if (keep_all) path.fits.push_back(materialize(problem, design, gamma, std_weights, lambda, sweeps));
        if (capped) continue;

        double bic;
        if (keep_all) {
            bic = path.fits.back().bic;
        } else {
            const Eigen::VectorXd r = sparse_residuals(design, gamma.cwiseQuotient(problem.scale));
            bic = bic_value(r.squaredNorm(), df, problem.n);
        }
        if (!have_best || bic < best_bic) {
            best_bic = bic;
            best_gamma = gamma;
            best_lambda = lambda;
            best_sweeps = sweeps;
            path.chosen = g;
            have_best = true;
        }
    }
    if (!capped) path.eligible = grid.size();
    if (!keep_all && have_best) {
        best_sweeps += coordinate_descent(problem, std_weights, best_lambda, best_gamma, options);
        path.fits.push_back(materialize(problem, design, best_gamma, std_weights, best_lambda, best_sweeps));
        path.chosen = 0;
    }
    return path;
}

}  // namespace detail

double lambda_max(const ArxDesign& design, const Eigen::VectorXd& weights) {
    check_weights(weights, design.X().cols());
    const Eigen::VectorXd grad = 2.0 * design.X().transpose() * design.y() / static_cast<double>(design.rows());
    return grad.cwiseAbs().cwiseQuotient(weights).maxCoeff();
}

std::vector<double> lambda_grid(double high, std::size_t count, double min_ratio) {
    if (count == 0) throw ArgumentError("lambda grid needs at least one value");
    if (!(high > 0.0)) throw ArgumentError("lambda grid needs a positive upper end");
    if (!(min_ratio > 0.0 && min_ratio < 1.0) && count > 1) {
        throw ArgumentError("lambda_min_ratio must lie in (0, 1)");
    }
    std::vector<double> grid(count);
    const double lo = std::log(min_ratio);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        grid[i] = high * std::exp(t * lo);
    }
    grid[0] = high;
    return grid;
}

double lasso_objective(const ArxDesign& design, const Eigen::VectorXd& beta, double lambda,
                       const Eigen::VectorXd& weights) {
    const Eigen::VectorXd r = design.y() - design.X() * beta;
    return r.squaredNorm() / static_cast<double>(design.rows()) +
           lambda * weights.cwiseProduct(beta.cwiseAbs()).sum();
}

PenalizedFit adaptive_lasso_fit(const ArxDesign& design, double lambda, const Eigen::VectorXd& weights,
                                const FitOptions& options, const Eigen::VectorXd* warm_start,
                                std::vector<double>* sweep_objectives) {
    check_weights(weights, design.X().cols());
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ArgumentError("lambda must be finite and nonnegative");
    }
    const detail::GramProblem problem = detail::make_gram(design);
    const Eigen::VectorXd std_weights = weights.cwiseQuotient(problem.scale);
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(design.X().cols());
    if (warm_start) {
        if (warm_start->size() != gamma.size()) throw DimensionError("warm start has the wrong length");
        gamma = warm_start->cwiseProduct(problem.scale);
    }
    const std::size_t sweeps =
        detail::coordinate_descent(problem, std_weights, lambda, gamma, options, sweep_objectives);
    return materialize(problem, design, gamma, std_weights, lambda, sweeps);
}

BicPath bic_path(const ArxDesign& design, std::span<const double> grid, const Eigen::VectorXd& weights,
                 const FitOptions& options) {
    check_weights(weights, design.X().cols());
    if (grid.empty()) throw ArgumentError("lambda grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) throw ArgumentError("lambda values must be finite and >= 0");
        if (i > 0 && !(grid[i] < grid[i - 1])) throw ArgumentError("lambda grid must be strictly decreasing");
    }
    const detail::GramProblem problem = detail::make_gram(design);
    return detail::standardized_path(problem, design, grid, weights.cwiseQuotient(problem.scale),
                                     options, true);
}

PenalizedFit fit_adaptive_lasso(const ArxDesign& design, const FitOptions& options) {
    const detail::GramProblem problem = detail::make_gram(design);
    const detail::RidgeChoice ridge = detail::ridge_by_bic(problem, design, options);
    const Eigen::VectorXd std_weights = compute_adaptive_weights(ridge.gamma, options.weight_floor);

    double top = 0.0;
    for (Eigen::Index j = 0; j < problem.xty.size(); ++j) {
        if (problem.gram(j, j) > 0.0) top = std::max(top, 2.0 * std::abs(problem.xty(j)) / std_weights(j));
    }
    PenalizedFit fit;
    if (!(top > 0.0)) {
        fit = materialize(problem, design, Eigen::VectorXd::Zero(problem.xty.size()), std_weights, 0.0, 0);
    } else {
        const auto grid = lambda_grid(top, options.lambda_count, options.lambda_min_ratio);
        BicPath path = detail::standardized_path(problem, design, grid, std_weights, options, false);
        fit = std::move(path.fits.front());
    }
    fit.ridge_lambda = ridge.lambda;
    return fit;
}

}  // namespace hdgc
