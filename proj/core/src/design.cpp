#include "hdgc/design.hpp"

#include "hdgc/error.hpp"

#include <algorithm>

namespace hdgc {

ArxDesign::ArxDesign(Eigen::VectorXd y, Eigen::MatrixXd X, int p, std::vector<ColumnInfo> columns,
                     std::size_t first_row, bool centered)
    : y_(std::move(y)),
      X_(std::move(X)),
      p_(p),
      columns_(std::move(columns)),
      first_row_(first_row),
      centered_(centered) {
    if (p_ < 1) throw DimensionError("lag order must be >= 1");
    if (X_.rows() != y_.size()) throw DimensionError("design X and y have different row counts");
    if (static_cast<std::size_t>(X_.cols()) != columns_.size()) {
        throw DimensionError("design column map does not match X");
    }
}

std::vector<std::size_t> ArxDesign::block_columns(BlockId block) const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (columns_[c].block == block) out.push_back(c);
    }
    return out;
}

bool ArxDesign::has_block(BlockId block) const {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const ColumnInfo& info) { return info.block == block; });
}

TimeSeriesPanel difference(const TimeSeriesPanel& panel, int order) {
    if (order < 1) throw ArgumentError("difference order must be >= 1");
    if (static_cast<std::size_t>(order) >= panel.rows()) {
        throw DimensionError("difference order " + std::to_string(order) +
                             " needs more than " + std::to_string(panel.rows()) + " rows");
    }
    Eigen::MatrixXd values = panel.values();
    for (int d = 0; d < order; ++d) {
        const Eigen::Index n = values.rows() - 1;
        Eigen::MatrixXd next = values.bottomRows(n) - values.topRows(n);
        values = std::move(next);
    }
    if (values.rows() < 2) {
        // A one-row result is a legal difference but not a legal panel.
        throw DimensionError("differenced panel would have fewer than 2 rows");
    }
    return TimeSeriesPanel(std::move(values), panel.labels(), panel.frequency());
}

std::pair<TimeSeriesPanel, Eigen::VectorXd> center(const TimeSeriesPanel& panel) {
    Eigen::VectorXd means = panel.values().colwise().mean().transpose();
    Eigen::MatrixXd values = panel.values().rowwise() - means.transpose();
    return {TimeSeriesPanel(std::move(values), panel.labels(), panel.frequency()), std::move(means)};
}

std::vector<ColumnInfo> design_columns(int p, const BlockStructure& blocks) {
    const std::size_t k = blocks.num_columns();
    std::vector<ColumnInfo> columns;
    columns.reserve(static_cast<std::size_t>(p) * (1 + k));
    for (int lag = 1; lag <= p; ++lag) {
        columns.push_back(ColumnInfo{ColumnKind::own_lag, lag, 0, std::nullopt});
    }
    for (int lag = 1; lag <= p; ++lag) {
        for (std::size_t c = 0; c < k; ++c) {
            columns.push_back(ColumnInfo{ColumnKind::predictor, lag, c, blocks.block_of(c)});
        }
    }
    return columns;
}

ArxDesign build_design(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int p,
                       const BlockStructure& blocks, std::optional<std::size_t> first_row,
                       bool centered) {
    if (p < 1) throw DimensionError("lag order must be >= 1");
    const auto T = static_cast<std::size_t>(y.size());
    if (static_cast<std::size_t>(x.rows()) != T) {
        throw DimensionError("response and predictors have different lengths");
    }
    if (blocks.num_columns() != static_cast<std::size_t>(x.cols())) {
        throw StructureError("block structure covers " + std::to_string(blocks.num_columns()) +
                             " columns but the predictor panel has " + std::to_string(x.cols()));
    }
    const std::size_t start = first_row.value_or(static_cast<std::size_t>(p));
    if (start < static_cast<std::size_t>(p)) throw DimensionError("first_row must be >= p");
    if (T <= start) {
        throw DimensionError("sample of length " + std::to_string(T) + " too short for lag order " +
                             std::to_string(p));
    }

    std::vector<ColumnInfo> columns = design_columns(p, blocks);
    const auto n = static_cast<Eigen::Index>(T - start);
    const Eigen::Index k = x.cols();
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(columns.size()));
    const auto s = static_cast<Eigen::Index>(start);
    for (int lag = 1; lag <= p; ++lag) {
        X.col(lag - 1) = y.segment(s - lag, n);
        if (k > 0) {
            X.middleCols(p + (lag - 1) * k, k) = x.middleRows(s - lag, n);
        }
    }
    return ArxDesign(y.segment(s, n), std::move(X), p, std::move(columns), start, centered);
}

ArxDesign build_design(const TimeSeriesPanel& y, const TimeSeriesPanel& x, int p,
                       const BlockStructure& blocks, std::optional<std::size_t> first_row,
                       bool centered) {
    if (y.cols() != 1) throw DimensionError("response panel must have exactly one column");
    return build_design(Eigen::VectorXd(y.values().col(0)), x.values(), p, blocks, first_row,
                        centered);
}

ArxDesign select_design_columns(const ArxDesign& design, std::span<const std::size_t> keep) {
    Eigen::MatrixXd X(design.X().rows(), static_cast<Eigen::Index>(keep.size()));
    std::vector<ColumnInfo> columns;
    columns.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= design.cols()) throw DimensionError("design column out of range");
        X.col(static_cast<Eigen::Index>(i)) = design.X().col(static_cast<Eigen::Index>(keep[i]));
        columns.push_back(design.columns()[keep[i]]);
    }
    return ArxDesign(design.y(), std::move(X), design.lag_order(), std::move(columns),
                     design.first_row(), design.centered());
}

ArxDesign drop_block(const ArxDesign& design, BlockId block) {
    if (!design.has_block(block)) {
        throw StructureError("block id " + std::to_string(block.value) + " not present in design");
    }
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < design.cols(); ++c) {
        if (design.columns()[c].block != block) keep.push_back(c);
    }
    return select_design_columns(design, keep);
}

Eigen::RowVectorXd regressor_row(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                 const std::vector<ColumnInfo>& columns, std::size_t target_row) {
    Eigen::RowVectorXd row(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const ColumnInfo& info = columns[c];
        if (static_cast<std::size_t>(info.lag) > target_row) {
            throw DimensionError("not enough history for lag " + std::to_string(info.lag));
        }
        const auto t = static_cast<Eigen::Index>(target_row - static_cast<std::size_t>(info.lag));
        row(static_cast<Eigen::Index>(c)) = info.kind == ColumnKind::own_lag
                                                ? y(t)
                                                : x(t, static_cast<Eigen::Index>(info.source));
    }
    return row;
}

}  // namespace hdgc
