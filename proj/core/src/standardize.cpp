#include "internal/gram.hpp"

#include <cmath>

namespace hdgc::detail {

GramProblem make_gram(const ArxDesign& design) {
    const Eigen::MatrixXd& X = design.X();
    const Eigen::VectorXd& y = design.y();
    const auto n = static_cast<double>(design.rows());
    const Eigen::Index d = X.cols();

    GramProblem problem;
    problem.n = design.rows();
    problem.gram.resize(d, d);
    problem.gram.setZero();
    problem.gram.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose(), 1.0 / n);
    problem.gram.triangularView<Eigen::StrictlyUpper>() = problem.gram.transpose();
    problem.xty = X.transpose() * y / n;
    problem.yty = y.squaredNorm() / n;

    problem.scale.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double g = problem.gram(j, j);
        problem.scale(j) = g > 0.0 ? std::sqrt(g) : 1.0;
    }
    const Eigen::VectorXd inv = problem.scale.cwiseInverse();
    problem.gram = inv.asDiagonal() * problem.gram * inv.asDiagonal();
    problem.xty = problem.xty.cwiseProduct(inv);
    for (Eigen::Index j = 0; j < d; ++j) {
        if (problem.gram(j, j) > 0.0) problem.gram(j, j) = 1.0;
    }
    return problem;
}

}  // namespace hdgc::detail
