#pragma once

#include "hdgc/design.hpp"
#include "hdgc/rng.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace hdgc::fixtures {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    }
    return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, Rng& rng) { return random_matrix(n, 1, rng).col(0); }

/// Plain regression problem wrapped as a design: every column is a lag-1
/// predictor of a single block.
inline ArxDesign regression_design(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    std::vector<ColumnInfo> columns;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        columns.push_back(ColumnInfo{ColumnKind::predictor, 1, static_cast<std::size_t>(j), BlockId{0}});
    }
    return ArxDesign(y, X, 1, std::move(columns), 1, false);
}

/// ARX(1) sample with `k` AR(1) predictors; the first `active` drive y.
struct ArxSample {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
};

inline ArxSample arx_sample(std::size_t T, std::size_t k, std::size_t active, double coef, Seed seed,
                            double noise_sd = 0.3) {
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, noise_sd);
    const std::size_t burn = 50;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(T + burn), static_cast<Eigen::Index>(k));
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(T + burn));
    for (Eigen::Index t = 1; t < y.size(); ++t) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(t, j) = 0.5 * x(t - 1, j) + normal(rng);
        double v = 0.5 * y(t - 1) + normal(rng);
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(active); ++j) v += coef * x(t - 1, j);
        y(t) = v;
    }
    ArxSample s{y.tail(static_cast<Eigen::Index>(T)), x.bottomRows(static_cast<Eigen::Index>(T))};
    s.y.array() -= s.y.mean();
    s.x.rowwise() -= s.x.colwise().mean();
    return s;
}

}  // namespace hdgc::fixtures
