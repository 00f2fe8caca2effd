#include "hdgc/error.hpp"
#include "hdgc/estimators.hpp"
#include "internal/gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdgc {

Eigen::VectorXd generalized_ridge_fit(const ArxDesign& design, const Eigen::VectorXd& penalty) {
    const Eigen::Index d = design.X().cols();
    if (penalty.size() != d) throw DimensionError("penalty diagonal has the wrong length");
    if ((penalty.array() < 0.0).any() || !penalty.allFinite()) {
        throw ArgumentError("ridge penalties must be finite and nonnegative");
    }
    const auto n = static_cast<double>(design.rows());
    Eigen::MatrixXd A = design.X().transpose() * design.X() / n;
    A.diagonal() += penalty;
    const Eigen::VectorXd b = design.X().transpose() * design.y() / n;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) return llt.solve(b);
    // Zero penalties on a singular Gram matrix: fall back to a rank-revealing solve.
    return A.colPivHouseholderQr().solve(b);
}

Eigen::VectorXd ridge_fit(const ArxDesign& design, double lambda_ridge) {
    if (!(lambda_ridge > 0.0) || !std::isfinite(lambda_ridge)) {
        throw ArgumentError("ridge penalty must be positive and finite");
    }
    return generalized_ridge_fit(design, Eigen::VectorXd::Constant(design.X().cols(), lambda_ridge));
}

Eigen::VectorXd compute_adaptive_weights(const Eigen::VectorXd& ridge_beta, double floor) {
    if (!ridge_beta.allFinite()) throw ArgumentError("ridge coefficients must be finite");
    return ridge_beta.cwiseAbs().cwiseMax(floor).cwiseInverse();
}

double bic_value(double rss, std::size_t df, std::size_t n) {
    const auto nn = static_cast<double>(n);
    if (rss <= 0.0) return -std::numeric_limits<double>::infinity();
    return nn * std::log(rss / nn) + static_cast<double>(df) * std::log(nn);
}

namespace detail {

RidgeChoice ridge_by_bic(const GramProblem& problem, const ArxDesign& design,
                         const FitOptions& options) {
    const auto d = problem.gram.cols();
    const auto n = static_cast<Eigen::Index>(problem.n);
    const double nn = static_cast<double>(problem.n);

    // Spectral form of the ridge family: with eigenvalues e_i and projections
    // a_i of the response, fitted values, RSS and df are O(min(n, d)) per level.
    Eigen::VectorXd eig;
    Eigen::MatrixXd basis;
    Eigen::VectorXd proj;  // squared projection weights entering the RSS
    Eigen::MatrixXd Z;
    const bool wide = d > n;
    if (!wide) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(problem.gram);
        eig = solver.eigenvalues().cwiseMax(0.0);
        basis = solver.eigenvectors();
        proj = basis.transpose() * problem.xty;  // z_i
    } else {
        Z = design.X() * problem.scale.cwiseInverse().asDiagonal();
        Eigen::MatrixXd K = Z * Z.transpose() / nn;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(K);
        eig = solver.eigenvalues().cwiseMax(0.0);
        basis = solver.eigenvectors();
        proj = basis.transpose() * design.y();  // a_i = u_i'y
    }

    auto rss_df = [&](double lambda) {
        double rss = 0.0;
        double df = 0.0;
        if (!wide) {
            double explained = 0.0;
            for (Eigen::Index i = 0; i < eig.size(); ++i) {
                const double e = eig(i);
                const double z2 = proj(i) * proj(i);
                explained += z2 * (e + 2.0 * lambda) / ((e + lambda) * (e + lambda));
                df += e / (e + lambda);
            }
            rss = std::max(0.0, (problem.yty - explained) * nn);
        } else {
            for (Eigen::Index i = 0; i < eig.size(); ++i) {
                const double e = eig(i);
                const double shrink = lambda / (e + lambda);
                rss += shrink * shrink * proj(i) * proj(i);
                df += e / (e + lambda);
            }
        }
        return std::pair{rss, df};
    };

    const double mean_eig = problem.gram.trace() / static_cast<double>(std::max<Eigen::Index>(d, 1));
    const double scale = mean_eig > 0.0 ? mean_eig : 1.0;
    const std::size_t count = std::max<std::size_t>(options.ridge_grid_size, 1);
    const double hi = std::log(options.ridge_grid_high * scale);
    const double lo = std::log(options.ridge_grid_low * scale);
    const double df_cap = options.max_df_fraction * nn;

    RidgeChoice best;
    double best_bic = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t g = 0; g < count; ++g) {
        const double t = count == 1 ? 0.0 : static_cast<double>(g) / static_cast<double>(count - 1);
        const double lambda = std::exp(hi + t * (lo - hi));
        const auto [rss, df] = rss_df(lambda);
        if (found && df > df_cap) break;
        const double bic = rss > 0.0 ? nn * std::log(rss / nn) + df * std::log(nn)
                                     : -std::numeric_limits<double>::infinity();
        if (!found || bic < best_bic) {
            best_bic = bic;
            best.lambda = lambda;
            best.df = df;
            found = true;
        }
    }

    const double lambda = best.lambda;
    if (!wide) {
        Eigen::VectorXd coef = proj;
        for (Eigen::Index i = 0; i < eig.size(); ++i) coef(i) /= (eig(i) + lambda);
        best.gamma = basis * coef;
    } else {
        Eigen::VectorXd coef = proj;
        for (Eigen::Index i = 0; i < eig.size(); ++i) coef(i) /= (eig(i) + lambda);
        best.gamma = Z.transpose() * (basis * coef) / nn;
    }
    return best;
}

}  // namespace detail
}  // namespace hdgc
