#include "helpers.hpp"

#include "hdgc/design.hpp"
#include "hdgc/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace hdgc;

namespace {

TimeSeriesPanel column(std::initializer_list<double> v, const std::string& label = "a") {
    Eigen::VectorXd values(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) values(i++) = d;
    return TimeSeriesPanel::from_series(values, label);
}

}  // namespace

TEST(Panel, RejectsBadShapesAndValues) {
    EXPECT_THROW(TimeSeriesPanel(Eigen::MatrixXd::Zero(1, 2), {"a", "b"}), DimensionError);
    EXPECT_THROW(TimeSeriesPanel(Eigen::MatrixXd::Zero(3, 2), {"a", "a"}), StructureError);
    EXPECT_THROW(TimeSeriesPanel(Eigen::MatrixXd::Zero(3, 2), {"a"}), DimensionError);
    Eigen::MatrixXd nan = Eigen::MatrixXd::Zero(3, 1);
    nan(1, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(TimeSeriesPanel(nan, {"a"}), ArgumentError);
}

TEST(BlockStructure, ValidatesPartition) {
    EXPECT_THROW(BlockStructure({{"a", {0, 1}}, {"b", {1, 2}}}, 3), StructureError);
    EXPECT_THROW(BlockStructure({{"a", {0, 3}}}, 3), StructureError);
    EXPECT_THROW(BlockStructure({{"a", {0}}, {"b", {2}}}, 3), StructureError);
    EXPECT_THROW(BlockStructure({{"a", {0}}, {"a", {1}}}, 2), StructureError);
    const std::size_t sizes[] = {2, 3};
    const BlockStructure b = BlockStructure::from_sizes(sizes);
    EXPECT_EQ(b.size(), 2u);
    EXPECT_EQ(b.block_of(4), BlockId{1});
    EXPECT_EQ(b[BlockId{1}].columns, (std::vector<std::size_t>{2, 3, 4}));
    EXPECT_THROW((void)b[BlockId{2}], StructureError);
}

TEST(Difference, HandExamples) {
    const auto d1 = difference(column({1, 3, 6, 10}), 1);
    EXPECT_EQ(d1.values().col(0), Eigen::Vector3d(2, 3, 4));
    EXPECT_EQ(d1.labels(), std::vector<std::string>{"a"});
    EXPECT_EQ(difference(column({5, 5, 5}), 1).values().col(0), Eigen::Vector2d(0, 0));
    EXPECT_EQ(difference(column({1, 3, 6, 10}), 2).values().col(0), Eigen::Vector2d(1, 1));
    EXPECT_THROW((void)difference(column({1, 2, 3}), 3), DimensionError);
}

TEST(Difference, InvertsCumulativeSum) {
    Rng rng = make_rng(3);
    const Eigen::VectorXd steps = fixtures::random_vector(30, rng);
    Eigen::VectorXd level(31);
    level(0) = 2.5;
    for (Eigen::Index i = 0; i < 30; ++i) level(i + 1) = level(i) + steps(i);
    const auto d = difference(TimeSeriesPanel::from_series(level, "a"), 1);
    EXPECT_LT((d.values().col(0) - steps).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Center, HandExamples) {
    auto [c, means] = center(column({1, 2, 3}));
    EXPECT_EQ(c.values().col(0), Eigen::Vector3d(-1, 0, 1));
    EXPECT_EQ(means(0), 2.0);
    auto [again, zero] = center(c);
    EXPECT_EQ(again.values(), c.values());
    EXPECT_EQ(zero(0), 0.0);

    Eigen::MatrixXd two(2, 2);
    two << 1, 10, 3, 30;
    auto [c2, m2] = center(TimeSeriesPanel(two, {"a", "b"}));
    Eigen::MatrixXd expected(2, 2);
    expected << -1, -10, 1, 10;
    EXPECT_EQ(c2.values(), expected);
    EXPECT_EQ(m2, Eigen::Vector2d(2, 20));
}

TEST(BuildDesign, SmallHandExample) {
    const Eigen::Vector3d y(1, 2, 3);
    const Eigen::MatrixXd x = Eigen::Vector3d(4, 5, 6);
    const std::size_t sizes[] = {1};
    const ArxDesign d = build_design(y, x, 1, BlockStructure::from_sizes(sizes));
    EXPECT_EQ(d.y(), Eigen::Vector2d(2, 3));
    Eigen::MatrixXd X(2, 2);
    X << 1, 4, 2, 5;
    EXPECT_EQ(d.X(), X);
    EXPECT_EQ(d.first_row(), 1u);
}

TEST(BuildDesign, BoundaryAndOrdering) {
    Rng rng = make_rng(1);
    const Eigen::VectorXd y = fixtures::random_vector(6, rng);
    const Eigen::MatrixXd x = fixtures::random_matrix(6, 2, rng);
    const std::size_t sizes[] = {1, 1};
    const BlockStructure blocks = BlockStructure::from_sizes(sizes);
    EXPECT_EQ(build_design(y, x, 5, blocks).rows(), 1u);
    EXPECT_THROW((void)build_design(y, x, 6, blocks), DimensionError);

    const ArxDesign d = build_design(y, x, 2, blocks);
    ASSERT_EQ(d.cols(), 6u);
    const std::vector<ColumnInfo> expected{
        {ColumnKind::own_lag, 1, 0, std::nullopt},   {ColumnKind::own_lag, 2, 0, std::nullopt},
        {ColumnKind::predictor, 1, 0, BlockId{0}},   {ColumnKind::predictor, 1, 1, BlockId{1}},
        {ColumnKind::predictor, 2, 0, BlockId{0}},   {ColumnKind::predictor, 2, 1, BlockId{1}},
    };
    EXPECT_EQ(d.columns(), expected);
    EXPECT_THROW((void)build_design(y, x, 1, BlockStructure::from_sizes(std::vector<std::size_t>{3})),
                 StructureError);
}

TEST(BuildDesign, ColumnsReconstructLaggedValues) {
    Rng rng = make_rng(2);
    const Eigen::VectorXd y = fixtures::random_vector(20, rng);
    const Eigen::MatrixXd x = fixtures::random_matrix(20, 4, rng);
    const std::size_t sizes[] = {1, 3};
    const int p = 3;
    const ArxDesign d = build_design(y, x, p, BlockStructure::from_sizes(sizes));
    for (std::size_t r = 0; r < d.rows(); ++r) {
        const auto t = static_cast<Eigen::Index>(r) + p;
        EXPECT_EQ(d.y()(static_cast<Eigen::Index>(r)), y(t));
        for (std::size_t c = 0; c < d.cols(); ++c) {
            const ColumnInfo& info = d.columns()[c];
            const double expected = info.kind == ColumnKind::own_lag
                                        ? y(t - info.lag)
                                        : x(t - info.lag, static_cast<Eigen::Index>(info.source));
            EXPECT_EQ(d.X()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), expected);
        }
    }
}

TEST(BuildDesign, CenteredPanelGivesNearlyCenteredColumns) {
    const auto s = fixtures::arx_sample(100, 5, 2, 0.3, 9);
    const std::size_t sizes[] = {5};
    const ArxDesign d = build_design(s.y, s.x, 2, BlockStructure::from_sizes(sizes), std::nullopt, true);
    EXPECT_TRUE(d.centered());
    for (Eigen::Index c = 0; c < d.X().cols(); ++c) {
        const auto col = d.X().col(c);
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().mean());
        EXPECT_LE(std::abs(mean), 0.1 * sd);
    }
}

TEST(DropBlock, RemovesEveryLagOfTheBlock) {
    Rng rng = make_rng(4);
    const Eigen::VectorXd y = fixtures::random_vector(12, rng);
    const Eigen::MatrixXd x = fixtures::random_matrix(12, 2, rng);
    const std::size_t sizes[] = {1, 1};
    const BlockStructure blocks = BlockStructure::from_sizes(sizes);
    const ArxDesign full = build_design(y, x, 2, blocks);

    const ArxDesign no_b = drop_block(full, BlockId{1});
    ASSERT_EQ(no_b.cols(), 4u);
    EXPECT_FALSE(no_b.has_block(BlockId{1}));
    EXPECT_EQ(no_b.columns()[2], (ColumnInfo{ColumnKind::predictor, 1, 0, BlockId{0}}));
    EXPECT_EQ(no_b.columns()[3], (ColumnInfo{ColumnKind::predictor, 2, 0, BlockId{0}}));

    // Same matrix as building from the panel without the block's columns.
    const std::size_t one[] = {1};
    const ArxDesign reduced = build_design(y, x.leftCols(1), 2, BlockStructure::from_sizes(one));
    EXPECT_EQ(no_b.X(), reduced.X());
    EXPECT_EQ(no_b.y(), reduced.y());

    const ArxDesign ar = drop_block(no_b, BlockId{0});
    EXPECT_EQ(ar.cols(), 2u);
    EXPECT_THROW((void)drop_block(ar, BlockId{0}), StructureError);
}

TEST(RegressorRow, ReadsOnlyEarlierRows) {
    Rng rng = make_rng(5);
    Eigen::VectorXd y = fixtures::random_vector(10, rng);
    Eigen::MatrixXd x = fixtures::random_matrix(10, 3, rng);
    const std::size_t sizes[] = {3};
    const auto columns = design_columns(2, BlockStructure::from_sizes(sizes));
    const Eigen::RowVectorXd before = regressor_row(y, x, columns, 7);
    y.tail(3).setConstant(1e9);
    x.bottomRows(3).setConstant(-1e9);
    EXPECT_EQ(regressor_row(y, x, columns, 7), before);
    // A design row equals the regressor row of its target.
    const ArxDesign d = build_design(y, x, 2, BlockStructure::from_sizes(sizes));
    EXPECT_EQ(d.X().row(3), regressor_row(y, x, columns, 5));
}
