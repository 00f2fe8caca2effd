#pragma once

#include "hdgc/panel.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hdgc {

/// Reads a panel CSV: header row of labels, then one row per time point,
/// oldest first, '.' as decimal separator. Empty cells, NaN and non-numeric
/// cells are rejected with a ParseError naming file and line.
[[nodiscard]] TimeSeriesPanel read_panel_csv(const std::string& path);
[[nodiscard]] TimeSeriesPanel parse_panel_csv(std::istream& in, const std::string& source);

/// Reads a block map, one block per line: `block_name: label1,label2,...`.
/// Blank lines and lines starting with '#' are skipped. Labels are resolved
/// against `labels`, which must be covered exactly once.
[[nodiscard]] BlockStructure read_block_map(const std::string& path,
                                            const std::vector<std::string>& labels);
[[nodiscard]] BlockStructure parse_block_map(std::istream& in, const std::string& source,
                                             const std::vector<std::string>& labels);

/// Writes a panel in the format read_panel_csv accepts.
void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel);

/// Writes a block map in the format read_block_map accepts.
void write_block_map(std::ostream& out, const BlockStructure& blocks,
                     const std::vector<std::string>& labels);

/// Shortest decimal text that parses back to exactly `value`; "NA" for NaN.
[[nodiscard]] std::string format_number(double value);

}  // namespace hdgc
