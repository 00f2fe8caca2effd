#pragma once

#include "hdgc/panel.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hdgc {

enum class ColumnKind { own_lag, predictor };

/// Provenance of one regressor column.
struct ColumnInfo {
    ColumnKind kind = ColumnKind::own_lag;
    int lag = 1;                   // 1..p
    std::size_t source = 0;        // predictor column index; 0 for own lags
    std::optional<BlockId> block;  // empty for own lags

    friend bool operator==(const ColumnInfo&, const ColumnInfo&) = default;
};

/// Stacked ARX regression y = X beta + e.
///
/// Columns are lag-major: own lags 1..p first, then for lag 1..p the k
/// predictors in panel order. Row r holds the regressors for target time
/// first_row() + r and only values dated strictly earlier.
class ArxDesign {
public:
    ArxDesign(Eigen::VectorXd y, Eigen::MatrixXd X, int p, std::vector<ColumnInfo> columns,
              std::size_t first_row, bool centered);

    [[nodiscard]] const Eigen::VectorXd& y() const noexcept { return y_; }
    [[nodiscard]] const Eigen::MatrixXd& X() const noexcept { return X_; }
    [[nodiscard]] int lag_order() const noexcept { return p_; }
    [[nodiscard]] const std::vector<ColumnInfo>& columns() const noexcept { return columns_; }
    [[nodiscard]] std::size_t first_row() const noexcept { return first_row_; }
    [[nodiscard]] bool centered() const noexcept { return centered_; }
    [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(X_.rows()); }
    [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(X_.cols()); }

    /// Indices of every column belonging to `block`, in column order.
    [[nodiscard]] std::vector<std::size_t> block_columns(BlockId block) const;
    [[nodiscard]] bool has_block(BlockId block) const;

private:
    Eigen::VectorXd y_;
    Eigen::MatrixXd X_;
    int p_;
    std::vector<ColumnInfo> columns_;
    std::size_t first_row_;
    bool centered_;
};

/// Order-th difference of every column; labels are kept.
[[nodiscard]] TimeSeriesPanel difference(const TimeSeriesPanel& panel, int order = 1);

/// Subtracts the column means. Returns the centered panel and the means.
[[nodiscard]] std::pair<TimeSeriesPanel, Eigen::VectorXd> center(const TimeSeriesPanel& panel);

/// Column layout for lag order p and k predictors mapped through `blocks`.
[[nodiscard]] std::vector<ColumnInfo> design_columns(int p, const BlockStructure& blocks);

/// Builds the design from raw vectors. Targets are y[first_row..T-1]; by
/// default first_row = p. A larger first_row trims the sample so designs of
/// different lag orders share their rows.
[[nodiscard]] ArxDesign build_design(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int p,
                                     const BlockStructure& blocks,
                                     std::optional<std::size_t> first_row = std::nullopt,
                                     bool centered = false);

/// Panel overload; `y` must have exactly one column and the same length as `x`.
[[nodiscard]] ArxDesign build_design(const TimeSeriesPanel& y, const TimeSeriesPanel& x, int p,
                                     const BlockStructure& blocks,
                                     std::optional<std::size_t> first_row = std::nullopt,
                                     bool centered = false);

/// Design without any column of `block` (all of its lags).
[[nodiscard]] ArxDesign drop_block(const ArxDesign& design, BlockId block);

/// Design restricted to the given column indices (kept in ascending order).
[[nodiscard]] ArxDesign select_design_columns(const ArxDesign& design,
                                              std::span<const std::size_t> keep);

/// Regressor row for forecasting the target at time `target_row` (which may be
/// one past the end of the data): only values before target_row are read.
[[nodiscard]] Eigen::RowVectorXd regressor_row(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                               const std::vector<ColumnInfo>& columns,
                                               std::size_t target_row);

}  // namespace hdgc
