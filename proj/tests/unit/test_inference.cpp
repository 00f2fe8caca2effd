#include "helpers.hpp"

#include "hdgc/error.hpp"
#include "hdgc/inference.hpp"
#include "hdgc/simulation.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hdgc;
using fixtures::random_matrix;
using fixtures::random_vector;

namespace {

BlockStructure sizes_of(std::initializer_list<std::size_t> sizes) {
    const std::vector<std::size_t> v(sizes);
    return BlockStructure::from_sizes(v);
}

GrangerTestOptions small_options() {
    GrangerTestOptions o;
    o.replicates = 40;
    o.covariance_replicates = 50;
    return o;
}

}  // namespace

TEST(Restriction, SelectsTheBlockColumns) {
    const auto s = fixtures::arx_sample(20, 3, 0, 0.0, 1);
    const ArxDesign d1 = build_design(s.y, s.x, 1, sizes_of({1, 2}));
    const RestrictionMatrix R = restriction_matrix(d1, BlockId{1});
    EXPECT_EQ(R.selected, (std::vector<std::size_t>{2, 3}));
    const Eigen::MatrixXd M = R.matrix();
    ASSERT_EQ(M.rows(), 2);
    ASSERT_EQ(M.cols(), 4);
    EXPECT_EQ(M.rowwise().sum(), Eigen::Vector2d::Ones());

    const ArxDesign d2 = build_design(s.y, s.x, 2, sizes_of({1, 2}));
    const RestrictionMatrix R2 = restriction_matrix(d2, BlockId{0});
    EXPECT_EQ(R2.selected, (std::vector<std::size_t>{2, 5}));

    Eigen::VectorXd indicator = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d2.cols()));
    for (std::size_t c : d2.block_columns(BlockId{1})) indicator(static_cast<Eigen::Index>(c)) = 1.0;
    EXPECT_EQ(restriction_matrix(d2, BlockId{1}).apply(indicator), Eigen::VectorXd::Ones(4));
    EXPECT_THROW((void)restriction_matrix(d2, BlockId{5}), StructureError);
}

TEST(WaldStatistic, HandExamples) {
    const auto s = fixtures::arx_sample(20, 3, 0, 0.0, 2);
    const ArxDesign d = build_design(s.y, s.x, 1, sizes_of({1, 2}));
    const RestrictionMatrix R = restriction_matrix(d, BlockId{1});
    const Eigen::Vector4d beta(0.7, -1, 2, 3);
    EXPECT_DOUBLE_EQ(wald_statistic(beta, R, Eigen::Vector2d(4, 1).asDiagonal()), 10.0);
    EXPECT_DOUBLE_EQ(wald_statistic(beta, R, Eigen::Matrix2d::Identity()), 13.0);
    EXPECT_EQ(wald_statistic(Eigen::Vector4d(1, 1, 0, 0), R, Eigen::Matrix2d::Identity()), 0.0);
    Eigen::Matrix2d singular;
    singular << 1, 1, 1, 1;
    EXPECT_THROW((void)wald_statistic(beta, R, singular), NumericError);
}

TEST(WaldStatistic, InvariantUnderRowPermutation) {
    Rng rng = make_rng(3);
    const auto s = fixtures::arx_sample(30, 4, 0, 0.0, 3);
    const ArxDesign d = build_design(s.y, s.x, 2, sizes_of({1, 3}));
    RestrictionMatrix R = restriction_matrix(d, BlockId{1});
    const Eigen::VectorXd beta = random_vector(static_cast<Eigen::Index>(d.cols()), rng);
    const Eigen::MatrixXd A = random_matrix(6, 6, rng);
    const Eigen::MatrixXd cov = A * A.transpose() + Eigen::MatrixXd::Identity(6, 6);
    const double Q = wald_statistic(beta, R, cov);

    const std::vector<std::size_t> order{3, 0, 5, 1, 4, 2};
    RestrictionMatrix P = R;
    Eigen::MatrixXd cov_p(6, 6);
    for (std::size_t i = 0; i < 6; ++i) {
        P.selected[i] = R.selected[order[i]];
        for (std::size_t j = 0; j < 6; ++j) {
            cov_p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                cov(static_cast<Eigen::Index>(order[i]), static_cast<Eigen::Index>(order[j]));
        }
    }
    EXPECT_NEAR(wald_statistic(beta, P, cov_p), Q, 1e-10 * Q);
    const Eigen::VectorXd v = R.apply(beta);
    EXPECT_NEAR(Q, v.dot(cov.inverse() * v), 1e-9 * Q);
}

TEST(MidP, TieRule) {
    const double one[] = {2.5};
    EXPECT_EQ(mid_p_value(2.5, one), 0.5);
    const double zeros[] = {0, 0, 0, 1};
    EXPECT_EQ(mid_p_value(0.0, zeros), (1.0 + 0.5 * 3) / 4.0);
    const double spread[] = {0, 1, 2, 3};
    EXPECT_EQ(mid_p_value(1.0, spread), 0.625);
    EXPECT_EQ(mid_p_value(10.0, spread), 0.0);
}

TEST(RestrictedCovariance, SymmetricRegularizedAndIdentityWhenFlat) {
    Rng rng = make_rng(4);
    const auto s = fixtures::arx_sample(20, 3, 0, 0.0, 4);
    const ArxDesign d = build_design(s.y, s.x, 1, sizes_of({1, 2}));
    const RestrictionMatrix R = restriction_matrix(d, BlockId{1});
    Eigen::MatrixXd draws = random_matrix(60, 4, rng);
    draws.col(3).setZero();
    const Eigen::MatrixXd cov = restricted_covariance(draws, R);
    EXPECT_LT((cov - cov.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(cov(1, 1), 0.0);
    EXPECT_GE(cov(1, 1), 0.49e-8 * cov(0, 0));

    const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(60, 4, 0.3);
    EXPECT_EQ(restricted_covariance(flat, R), Eigen::Matrix2d::Identity());
}

TEST(Bootstrap, SimulatedResponseReproducesTheData) {
    const auto s = fixtures::arx_sample(50, 4, 2, 0.5, 5);
    const ArxDesign d = build_design(s.y, s.x, 2, sizes_of({2, 2}));
    Rng rng = make_rng(5);
    const Eigen::VectorXd beta = random_vector(static_cast<Eigen::Index>(d.cols()), rng) * 0.2;
    const Eigen::VectorXd innovations = d.y() - d.X() * beta;
    const Eigen::VectorXd rebuilt = simulate_response(d, beta, innovations);
    ASSERT_EQ(rebuilt.size(), d.y().size());
    EXPECT_LT((rebuilt - d.y()).cwiseAbs().maxCoeff(), 1e-12);

    const ArxDesign same = replace_response(d, rebuilt);
    EXPECT_LT((same.X() - d.X()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((same.y() - d.y()).cwiseAbs().maxCoeff(), 1e-12);

    // Predictor columns stay fixed while own lags follow the new path.
    const Eigen::VectorXd other = simulate_response(d, beta, innovations * 2.0);
    const ArxDesign moved = replace_response(d, other);
    EXPECT_EQ(moved.X().rightCols(8), d.X().rightCols(8));
    const auto n = static_cast<Eigen::Index>(d.rows());
    EXPECT_EQ(moved.X().col(0).tail(n - 1), other.head(n - 1));
    EXPECT_EQ(moved.X()(0, 0), d.X()(0, 0));
}

TEST(Bootstrap, ResampleDrawsFromResiduals) {
    const Eigen::Vector3d r(-1, 0.25, 0.75);
    Rng rng = make_rng(6);
    const Eigen::VectorXd draw = resample_residuals(r, rng);
    ASSERT_EQ(draw.size(), 3);
    for (double v : draw) EXPECT_TRUE(v == -1 || v == 0.25 || v == 0.75);
}

TEST(GrangerLassoTest, MidPRecomputesAndIsReproducible) {
    const auto s = fixtures::arx_sample(60, 6, 2, 0.5, 7);
    const BlockStructure blocks = sizes_of({3, 3});
    GrangerTestOptions o = small_options();
    const GrangerTestResult a = granger_lasso_test(s.y, s.x, blocks, BlockId{1}, o, 99);
    EXPECT_EQ(a.q_boot.size(), o.replicates);
    EXPECT_EQ(a.mid_p, mid_p_value(a.Q, a.q_boot));
    for (double q : a.q_boot) {
        EXPECT_TRUE(std::isfinite(q));
        EXPECT_GE(q, 0.0);
    }
    o.jobs = 3;
    const GrangerTestResult b = granger_lasso_test(s.y, s.x, blocks, BlockId{1}, o, 99);
    EXPECT_EQ(a.Q, b.Q);
    EXPECT_EQ(a.q_boot, b.q_boot);

    const BlockId both[] = {BlockId{0}, BlockId{1}};
    const auto many = granger_lasso_tests(s.y, s.x, blocks, both, small_options(), 99);
    ASSERT_EQ(many.size(), 2u);
    EXPECT_EQ(many[1].q_boot, a.q_boot);
    const GrangerTestResult first = granger_lasso_test(s.y, s.x, blocks, BlockId{0}, small_options(), 99);
    EXPECT_EQ(many[0].Q, first.Q);
    EXPECT_EQ(many[0].q_boot, first.q_boot);
    EXPECT_LT(first.mid_p, 0.05);
}

TEST(GrangerLassoTest, NoiselessRestrictedModelGivesFiniteStatistics) {
    // y follows its own lag exactly, so the restricted residuals vanish.
    const auto s = fixtures::arx_sample(40, 4, 0, 0.0, 8);
    Eigen::VectorXd y(40);
    for (Eigen::Index t = 0; t < 40; ++t) y(t) = t % 2 == 0 ? 1.0 : -1.0;
    const GrangerTestResult r = granger_lasso_test(y, s.x, sizes_of({2, 2}), BlockId{1}, small_options(), 5);
    EXPECT_TRUE(std::isfinite(r.Q));
    for (double q : r.q_boot) EXPECT_TRUE(std::isfinite(q));
    EXPECT_GE(r.mid_p, 0.0);
    EXPECT_LE(r.mid_p, 1.0);
}

TEST(CoefCovariance, CloseToOlsStandardErrors) {
    // T=100, k=25 layout with coefficients large enough that the lasso keeps them all.
    SimulationDesign design = builtin_design(1);
    design.a1_null.head(5).setConstant(0.6);
    const auto panel = simulate(design, Hypothesis::null, 10);
    const Eigen::VectorXd y = center(panel.y).first.values().col(0);
    const Eigen::MatrixXd x = center(panel.x).first.values();
    const ArxDesign d = build_design(y, x, 1, design.blocks());
    const PenalizedFit fit = fit_adaptive_lasso(d);
    const Eigen::MatrixXd cov = coef_covariance(d, fit, BlockId{0}, 200, 11);
    const OlsFit ols = ols_fit(d);
    const auto cols = d.block_columns(BlockId{0});
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const double boot_sd = std::sqrt(cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
        const auto c = static_cast<Eigen::Index>(cols[i]);
        const double ols_sd = std::sqrt(ols.covariance(c, c));
        EXPECT_GT(boot_sd, 0.5 * ols_sd) << i;
        EXPECT_LT(boot_sd, 1.5 * ols_sd) << i;
    }
    EXPECT_THROW((void)coef_covariance(d, fit, BlockId{0}, 10, 11), ArgumentError);
}

TEST(OlsWald, ChiSquareReference) {
    const auto s = fixtures::arx_sample(80, 4, 2, 0.3, 12);
    const ArxDesign d = build_design(s.y, s.x, 1, sizes_of({2, 2}));
    const OlsFit fit = ols_fit(d);
    const WaldTestResult w = ols_wald_test(d, fit, BlockId{1});
    EXPECT_EQ(w.dof, 2u);
    // Chi-square with two degrees of freedom has survival exp(-q/2).
    EXPECT_NEAR(w.p_value, std::exp(-w.statistic / 2.0), 1e-12);
    const Eigen::VectorXd v = fit.beta.segment(3, 2);
    EXPECT_NEAR(w.statistic, v.dot(fit.covariance.block(3, 3, 2, 2).inverse() * v), 1e-9 * w.statistic);
}

TEST(OlsWald, WideDesignIsNotComputable) {
    const SimulationDesign design = builtin_design(4);
    const auto panel = simulate(design, Hypothesis::null, 13);
    EXPECT_THROW((void)wald_test_selection(panel.y.values().col(0), panel.x.values(), design.blocks(), 0.01, 2),
                 NotComputableError);
}

TEST(Selection, BlocksWithNonzero) {
    const auto s = fixtures::arx_sample(30, 3, 0, 0.0, 15);
    const ArxDesign d = build_design(s.y, s.x, 2, sizes_of({1, 2}));
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.cols()));
    EXPECT_TRUE(blocks_with_nonzero(d, beta).empty());
    beta(0) = 1.0;
    EXPECT_TRUE(blocks_with_nonzero(d, beta).empty());
    beta(6) = -0.1;  // lag 2, column 1 of the panel
    EXPECT_EQ(blocks_with_nonzero(d, beta), std::vector<BlockId>{BlockId{1}});
    beta(5) = 0.1;
    EXPECT_EQ(blocks_with_nonzero(d, beta), (std::vector<BlockId>{BlockId{0}, BlockId{1}}));
}

TEST(Selection, LassoSelectionFindsStrongBlock) {
    const auto s = fixtures::arx_sample(100, 6, 2, 0.5, 16);
    const LassoSelection sel = granger_lasso_selection(s.y, s.x, sizes_of({2, 2, 2}), 2);
    ASSERT_FALSE(sel.selected.empty());
    EXPECT_EQ(sel.selected.front(), BlockId{0});
    EXPECT_EQ(sel.selected, blocks_with_nonzero(sel.model.design, sel.model.fit.beta));
}
