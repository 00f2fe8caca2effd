#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hdgc {

/// T x k matrix of observed series, oldest observation in row 0.
///
/// Invariants (checked on construction): T >= 2, k >= 1, every value finite,
/// one unique label per column.
class TimeSeriesPanel {
public:
    TimeSeriesPanel(Eigen::MatrixXd values, std::vector<std::string> labels,
                    std::string frequency = {});

    /// Single-column panel, e.g. the response series.
    static TimeSeriesPanel from_series(const Eigen::VectorXd& values, std::string label,
                                       std::string frequency = {});

    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] const std::string& frequency() const noexcept { return frequency_; }
    [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    [[nodiscard]] std::optional<std::size_t> find(const std::string& label) const;
    [[nodiscard]] Eigen::VectorXd column(std::size_t j) const { return values_.col(static_cast<Eigen::Index>(j)); }

    /// Sub-panel with the given columns, in the given order.
    [[nodiscard]] TimeSeriesPanel select_columns(std::span<const std::size_t> columns) const;
    /// Contiguous range of rows [first, first + count).
    [[nodiscard]] TimeSeriesPanel slice_rows(std::size_t first, std::size_t count) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> labels_;
    std::string frequency_;
};

/// Index of a block inside its BlockStructure.
struct BlockId {
    std::size_t value = 0;
    friend auto operator<=>(const BlockId&, const BlockId&) = default;
};

struct Block {
    std::string name;
    std::vector<std::size_t> columns;
};

/// Partition of the k predictor columns into named blocks, the unit of a
/// Granger causality test. Every column belongs to exactly one block.
class BlockStructure {
public:
    BlockStructure(std::vector<Block> blocks, std::size_t num_columns);

    /// Consecutive blocks of the given sizes named "block1", "block2", ...
    static BlockStructure from_sizes(std::span<const std::size_t> sizes);

    [[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
    [[nodiscard]] std::size_t num_columns() const noexcept { return column_block_.size(); }
    [[nodiscard]] const Block& operator[](BlockId id) const;
    [[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] BlockId block_of(std::size_t column) const;
    [[nodiscard]] std::optional<BlockId> find(const std::string& name) const;
    [[nodiscard]] std::vector<BlockId> ids() const;

    /// Structure over the predictor columns of the kept blocks, renumbered
    /// 0..k'-1 in ascending original column order. `columns` receives the
    /// original index of every retained column.
    [[nodiscard]] BlockStructure subset(std::span<const BlockId> keep,
                                        std::vector<std::size_t>& columns) const;

private:
    std::vector<Block> blocks_;
    std::vector<std::size_t> column_block_;
};

}  // namespace hdgc
