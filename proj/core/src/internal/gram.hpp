#pragma once

#include "hdgc/design.hpp"
#include "hdgc/estimators.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace hdgc::detail {

/// Sufficient statistics of a design with columns scaled to unit RMS.
/// Zero columns keep scale 1 and a zero diagonal; the solvers skip them.
struct GramProblem {
    Eigen::MatrixXd gram;   // Z'Z / n
    Eigen::VectorXd xty;    // Z'y / n
    Eigen::VectorXd scale;  // original column = scale * standardized column
    double yty = 0.0;       // y'y / n
    std::size_t n = 0;
};

[[nodiscard]] GramProblem make_gram(const ArxDesign& design);

/// Cyclic coordinate descent on the standardized problem, in place on gamma.
/// Returns the number of sweeps. Without `check_kkt` only the coefficient
/// change criterion is applied (cheaper, used while walking a path).
std::size_t coordinate_descent(const GramProblem& problem, const Eigen::VectorXd& weights,
                               double lambda, Eigen::VectorXd& gamma, const FitOptions& options,
                               std::vector<double>* sweep_objectives = nullptr, bool check_kkt = true);

/// Standardized-scale objective (1/n) RSS + lambda sum w |gamma|.
[[nodiscard]] double standardized_objective(const GramProblem& problem,
                                            const Eigen::VectorXd& weights, double lambda,
                                            const Eigen::VectorXd& gamma);

struct RidgeChoice {
    Eigen::VectorXd gamma;  // standardized coefficients
    double lambda = 0.0;
    double df = 0.0;
};

/// Ridge level by BIC (df = trace of the hat matrix) over the options' grid.
[[nodiscard]] RidgeChoice ridge_by_bic(const GramProblem& problem, const ArxDesign& design,
                                       const FitOptions& options);

/// Path over a descending grid on the standardized problem with standardized
/// weights. Converts to original scale and fills BIC. When keep_all is false
/// only the chosen fit is materialized in `fits`.
[[nodiscard]] BicPath standardized_path(const GramProblem& problem, const ArxDesign& design,
                                        std::span<const double> grid,
                                        const Eigen::VectorXd& std_weights,
                                        const FitOptions& options, bool keep_all);

}  // namespace hdgc::detail
