#include "hdgc/panel.hpp"

#include "hdgc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hdgc {

TimeSeriesPanel::TimeSeriesPanel(Eigen::MatrixXd values, std::vector<std::string> labels,
                                 std::string frequency)
    : values_(std::move(values)), labels_(std::move(labels)), frequency_(std::move(frequency)) {
    if (values_.rows() < 2) {
        throw DimensionError("panel needs at least 2 time points, got " +
                             std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) throw DimensionError("panel needs at least 1 column");
    if (static_cast<Eigen::Index>(labels_.size()) != values_.cols()) {
        throw DimensionError("panel has " + std::to_string(values_.cols()) + " columns but " +
                             std::to_string(labels_.size()) + " labels");
    }
    std::set<std::string> seen;
    for (const auto& label : labels_) {
        if (!seen.insert(label).second) throw StructureError("duplicate column label '" + label + "'");
    }
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
        for (Eigen::Index t = 0; t < values_.rows(); ++t) {
            if (!std::isfinite(values_(t, j))) {
                throw ArgumentError("non-finite value in column '" + labels_[static_cast<std::size_t>(j)] +
                                    "' at row " + std::to_string(t));
            }
        }
    }
}

TimeSeriesPanel TimeSeriesPanel::from_series(const Eigen::VectorXd& values, std::string label,
                                             std::string frequency) {
    return TimeSeriesPanel(Eigen::MatrixXd(values), {std::move(label)}, std::move(frequency));
}

std::optional<std::size_t> TimeSeriesPanel::find(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

TimeSeriesPanel TimeSeriesPanel::select_columns(std::span<const std::size_t> columns) const {
    Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(columns.size()));
    std::vector<std::string> labels;
    labels.reserve(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] >= cols()) throw DimensionError("column index out of range");
        out.col(static_cast<Eigen::Index>(i)) = values_.col(static_cast<Eigen::Index>(columns[i]));
        labels.push_back(labels_[columns[i]]);
    }
    return TimeSeriesPanel(std::move(out), std::move(labels), frequency_);
}

TimeSeriesPanel TimeSeriesPanel::slice_rows(std::size_t first, std::size_t count) const {
    if (first + count > rows()) throw DimensionError("row slice out of range");
    return TimeSeriesPanel(values_.middleRows(static_cast<Eigen::Index>(first),
                                              static_cast<Eigen::Index>(count)),
                           labels_, frequency_);
}

BlockStructure::BlockStructure(std::vector<Block> blocks, std::size_t num_columns)
    : blocks_(std::move(blocks)),
      column_block_(num_columns, std::numeric_limits<std::size_t>::max()) {
    std::set<std::string> names;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Block& block = blocks_[b];
        if (!names.insert(block.name).second) {
            throw StructureError("duplicate block name '" + block.name + "'");
        }
        if (block.columns.empty()) throw StructureError("block '" + block.name + "' is empty");
        for (std::size_t c : block.columns) {
            if (c >= num_columns) {
                throw StructureError("block '" + block.name + "' references column " +
                                     std::to_string(c) + " but the panel has " +
                                     std::to_string(num_columns) + " columns");
            }
            if (column_block_[c] != std::numeric_limits<std::size_t>::max()) {
                throw StructureError("column " + std::to_string(c) + " belongs to blocks '" +
                                     blocks_[column_block_[c]].name + "' and '" + block.name + "'");
            }
            column_block_[c] = b;
        }
    }
    for (std::size_t c = 0; c < num_columns; ++c) {
        if (column_block_[c] == std::numeric_limits<std::size_t>::max()) {
            throw StructureError("column " + std::to_string(c) + " is not assigned to any block");
        }
    }
}

BlockStructure BlockStructure::from_sizes(std::span<const std::size_t> sizes) {
    std::vector<Block> blocks;
    std::size_t next = 0;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        Block block{"block" + std::to_string(b + 1), {}};
        for (std::size_t i = 0; i < sizes[b]; ++i) block.columns.push_back(next++);
        blocks.push_back(std::move(block));
    }
    return BlockStructure(std::move(blocks), next);
}

const Block& BlockStructure::operator[](BlockId id) const {
    if (id.value >= blocks_.size()) {
        throw StructureError("unknown block id " + std::to_string(id.value));
    }
    return blocks_[id.value];
}

BlockId BlockStructure::block_of(std::size_t column) const {
    if (column >= column_block_.size()) throw StructureError("column index out of range");
    return BlockId{column_block_[column]};
}

std::optional<BlockId> BlockStructure::find(const std::string& name) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].name == name) return BlockId{b};
    }
    return std::nullopt;
}

std::vector<BlockId> BlockStructure::ids() const {
    std::vector<BlockId> out;
    out.reserve(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) out.push_back(BlockId{b});
    return out;
}

BlockStructure BlockStructure::subset(std::span<const BlockId> keep,
                                      std::vector<std::size_t>& columns) const {
    std::vector<bool> kept(blocks_.size(), false);
    for (BlockId id : keep) {
        (void)(*this)[id];
        kept[id.value] = true;
    }
    columns.clear();
    for (std::size_t c = 0; c < column_block_.size(); ++c) {
        if (kept[column_block_[c]]) columns.push_back(c);
    }
    std::vector<std::size_t> new_index(column_block_.size(), 0);
    for (std::size_t i = 0; i < columns.size(); ++i) new_index[columns[i]] = i;

    std::vector<Block> out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (!kept[b]) continue;
        Block block{blocks_[b].name, {}};
        for (std::size_t c : blocks_[b].columns) block.columns.push_back(new_index[c]);
        std::sort(block.columns.begin(), block.columns.end());
        out.push_back(std::move(block));
    }
    return BlockStructure(std::move(out), columns.size());
}

}  // namespace hdgc
